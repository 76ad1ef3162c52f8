// Copyright 2026 The ewnexus Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Seeded generator for desk-scale test instances: wind and solar units
// fitted into surrogates, one battery, the default RO plant and a
// greenhouse load on top of a constant municipal water demand.

#ifndef EWNEXUS_SYNTHETIC_HPP_
#define EWNEXUS_SYNTHETIC_HPP_

#include <cstdint>
#include <string>

#include "ewnexus/model.hpp"

namespace ewnexus {

struct SyntheticOptions {
  std::string name = "synthetic";
  int horizon_steps = 24;
  double dt_hours = 1.0;
  std::uint64_t seed = 1;
  SolveMode mode = SolveMode::kFullTimeDependent;

  bool include_solar = true;
  double solar_cost_factor = 1.0;  // scales the solar unit cost
  double mean_wind_speed = 8.0;    // m/s
  double wind_variability = 0.3;   // relative, AR(1) noise

  double base_power = 100.0;        // kW
  double water_demand = 570.0;      // m3/h
  int greenhouse_count = 2;
  double greenhouse_water = 15.0;   // m3/h per greenhouse
};

struct SyntheticResources {
  TimeSeries wind_speed;  // m/s
  TimeSeries dni;         // W/m2
};

SyntheticResources make_synthetic_resources(const SyntheticOptions& options);

TechnologyUnitModel synthetic_wind_unit();
TechnologyUnitModel synthetic_solar_unit(double cost_factor = 1.0);

NexusInstance make_synthetic_instance(const SyntheticOptions& options);

// 48 steps of strongly varying wind and no solar; the instance used for the
// tank study.
SyntheticOptions tight_water_options();

}  // namespace ewnexus

#endif  // EWNEXUS_SYNTHETIC_HPP_
