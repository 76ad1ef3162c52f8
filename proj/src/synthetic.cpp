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

#include "ewnexus/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "ewnexus/surrogates.hpp"

namespace ewnexus {
namespace {

double hour_of_day(int t, double dt) { return std::fmod(t * dt, 24.0); }

// 0 at night, 1 at solar noon.
double daylight(double hour) {
  if (hour <= 6.0 || hour >= 18.0) return 0.0;
  return std::sin(std::numbers::pi * (hour - 6.0) / 12.0);
}

}  // namespace

SyntheticResources make_synthetic_resources(const SyntheticOptions& o) {
  std::mt19937_64 rng(o.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  SyntheticResources r;
  const double rho = 0.8;
  double noise = 0.0;
  for (int t = 0; t < o.horizon_steps; ++t) {
    double h = hour_of_day(t, o.dt_hours);
    noise = rho * noise + std::sqrt(1.0 - rho * rho) * o.wind_variability * gauss(rng);
    double diurnal = 1.0 + 0.15 * std::sin(2.0 * std::numbers::pi * (h - 4.0) / 24.0);
    r.wind_speed.push_back(std::clamp(o.mean_wind_speed * (diurnal + noise), 0.0, 30.0));
    double cloud = std::clamp(1.0 - 0.3 * std::abs(gauss(rng)), 0.2, 1.0);
    r.dni.push_back(900.0 * daylight(h) * cloud);
  }
  return r;
}

TechnologyUnitModel synthetic_wind_unit() {
  TechnologyUnitModel u;
  u.name = "wind";
  u.k_tech = 14000.0;
  u.k_land = 300.0;
  u.area_tech = 0.01;
  u.area_spacing = 1.5;
  // 100 kW turbine: cut-in 3 m/s, rated 12 m/s, cut-out 25 m/s.
  u.power_curve = {{0, 3, 5, 7, 9, 11, 12, 25, 25.5, 30},
                   {0, 0, 12, 33, 62, 90, 100, 100, 0, 0}};
  u.max_units = 40;
  return u;
}

TechnologyUnitModel synthetic_solar_unit(double cost_factor) {
  TechnologyUnitModel u;
  u.name = "solar";
  u.k_tech = 4000.0 * cost_factor;
  u.k_land = 300.0;
  u.area_tech = 0.1;
  u.area_spacing = 0.05;
  // 50 kW array, linear in DNI up to 1000 W/m2.
  u.power_curve = {{0, 1000, 1400}, {0, 50, 50}};
  u.max_units = 40;
  return u;
}

NexusInstance make_synthetic_instance(const SyntheticOptions& o) {
  NexusInstance inst;
  inst.name = o.name;
  inst.grid = {o.horizon_steps, o.dt_hours};
  inst.mode = o.mode;
  SyntheticResources res = make_synthetic_resources(o);

  TechnologyUnitModel wind = synthetic_wind_unit();
  inst.technologies.push_back(fit_technology_surrogate(
      wind, res.wind_speed, inst.grid, fitting_targets(wind, res.wind_speed, inst.grid)));
  if (o.include_solar) {
    TechnologyUnitModel solar = synthetic_solar_unit(o.solar_cost_factor);
    inst.technologies.push_back(fit_technology_surrogate(
        solar, res.dni, inst.grid, fitting_targets(solar, res.dni, inst.grid)));
  }

  StorageTech battery;
  battery.name = "battery";
  battery.capex_per_capacity = 300.0;
  battery.opex_per_throughput = 0.001;
  battery.lifespan_years = 15.0;
  battery.max_capacity = 1e5;
  inst.storage_techs.push_back(battery);

  // Feed flow enters the network in thousands of m3/h relative to 3000;
  // the output maps to kW.
  inst.ro.ec_input_scaling = {{1.0, 1.0, 1.0, 1.0 / 3000.0}, {0.0, 0.0, 0.0, 0.0}};
  inst.ro.ec_output_scaling = {{200.0}, {200.0}};

  DemandSet& d = inst.demands;
  d.greenhouse_count = o.greenhouse_count;
  for (int t = 0; t < o.horizon_steps; ++t) {
    double h = hour_of_day(t, o.dt_hours);
    d.power_demand.push_back(o.base_power);
    d.water_demand.push_back(o.water_demand);
    d.greenhouse_power_profile.push_back(10.0 + 20.0 * daylight(h));
    d.greenhouse_water_profile.push_back(o.greenhouse_water);
  }
  for (int t = 0; t < o.horizon_steps; ++t) d.power_total_target += d.power_at(t) * o.dt_hours;
  return inst;
}

SyntheticOptions tight_water_options() {
  SyntheticOptions o;
  o.name = "tight-water";
  o.horizon_steps = 48;
  o.seed = 11;
  o.include_solar = false;
  o.mean_wind_speed = 7.0;
  o.wind_variability = 0.6;
  return o;
}

}  // namespace ewnexus
