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

// Domain types for the energy-water supply planning problem.
//
// Units throughout: power kW, energy kWh, water flow m3/h, volume m3, land ha,
// cost $/yr. A TimeSeries is a plain vector whose length must equal the
// instance's horizon_steps.

#ifndef EWNEXUS_MODEL_HPP_
#define EWNEXUS_MODEL_HPP_

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ewnexus/solver.hpp"

namespace ewnexus {

using TimeSeries = std::vector<double>;

inline constexpr double kHoursPerYear = 8760.0;

struct TimeGrid {
  int horizon_steps = 24;
  double dt_hours = 1.0;

  double total_hours() const { return horizon_steps * dt_hours; }
  // Scales a horizon sum to a yearly figure.
  double annualization() const { return kHoursPerYear / total_hours(); }
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Piecewise-linear map from a resource value (wind speed, irradiance, ...)
// to per-unit output. Outside [xs.front(), xs.back()] it is undefined.
struct PowerCurve {
  std::vector<double> xs;
  std::vector<double> ys;

  double operator()(double x) const;
  bool covers(double x) const {
    return !xs.empty() && x >= xs.front() && x <= xs.back();
  }
};

// One generation technology before surrogate fitting. `unit_derate` holds the
// location factor of each candidate unit; an empty vector means
// `max_units` identical units.
struct TechnologyUnitModel {
  std::string name;
  double k_tech = 0.0;   // $/unit/yr
  double k_land = 0.0;   // $/ha/yr
  double area_tech = 0.0;
  double area_spacing = 0.0;
  PowerCurve power_curve;
  int max_units = 100;
  std::vector<double> unit_derate;

  double unit_area() const { return area_tech + area_spacing; }
  bool homogeneous() const;
};

struct TechnologySurrogate {
  std::string name;
  double cost_slope = 0.0;      // $/yr per kWh/yr
  double cost_intercept = 0.0;  // $/yr, paid once any unit exists
  double land_slope = 0.0;      // ha per kWh/yr
  double land_intercept = 0.0;  // ha
  double r_squared_cost = 1.0;
  double r_squared_land = 1.0;
  double per_unit_energy = 0.0;  // kWh/yr of one unit
  TimeSeries per_unit_profile;   // kW of one unit
  int max_units = 100;
  // Water drawn per unit (m3/h); nonempty only for crops such as maize.
  TimeSeries water_per_unit;

  double cost(double annual_energy) const {
    return cost_slope * annual_energy + cost_intercept;
  }
  double land(double annual_energy) const {
    return land_slope * annual_energy + land_intercept;
  }
};

struct StorageTech {
  std::string name;
  double efficiency = 1.0;
  double capex_per_capacity = 0.0;   // $/kWh
  double opex_per_throughput = 0.0;  // $/kWh released
  double lifespan_years = 10.0;
  double max_capacity = 1e6;         // kWh
};

struct DenseLayer {
  std::vector<std::vector<double>> weights;  // [output][input]
  std::vector<double> biases;

  int inputs() const {
    return weights.empty() ? 0 : static_cast<int>(weights.front().size());
  }
  int outputs() const { return static_cast<int>(weights.size()); }
};

// ReLU on every hidden layer, identity on the last one.
struct ReluNetwork {
  std::vector<DenseLayer> layers;

  int inputs() const { return layers.empty() ? 0 : layers.front().inputs(); }
  int outputs() const { return layers.empty() ? 0 : layers.back().outputs(); }
};

// The EC network with the bundled weights: 4 inputs, 2 hidden ReLU nodes,
// 1 output.
ReluNetwork default_ec_network();

// Elementwise y = scale * x + offset.
struct AffineScaling {
  std::vector<double> scale;
  std::vector<double> offset;

  static AffineScaling identity(int n) {
    return {std::vector<double>(n, 1.0), std::vector<double>(n, 0.0)};
  }
};

struct NominalPoint {
  double wr1 = 0.3113;
  double wr2 = 0.2935;
  double wr3 = 0.1860;
  double wr_sys = 0.6039;
  double qp = 975.0;  // m3/h
};

// Stage k: WR_k = recovery_intercept + recovery_slope * p_feed and
// p_retentate = retentate_intercept + retentate_slope * p_feed [bar].
struct StageAffineMap {
  double recovery_intercept = 0.0;
  double recovery_slope = 0.0;
  double retentate_intercept = 0.0;
  double retentate_slope = 1.0;
  Interval feed_pressure{0.0, 0.0};
};

struct RoPlantParams {
  NominalPoint nominal_point;
  double wr_limit = 0.6;
  Interval qf_bounds{400.0, 2000.0};
  std::array<Interval, 3> wr_stage_bounds{
      Interval{0.2, 0.45}, Interval{0.15, 0.4}, Interval{0.05, 0.3}};
  // Either empty or one map per stage.
  std::vector<StageAffineMap> stage_affine_maps;
  ReluNetwork ec_network = default_ec_network();
  // (WR1, WR2, WR3, Q_f) -> network input
  AffineScaling ec_input_scaling = AffineScaling::identity(4);
  // network output -> EC [kW]
  AffineScaling ec_output_scaling = AffineScaling::identity(1);
  double inv_cost_slope = 1.25e-5;
  double inv_cost_intercept = 10.429e6;
  double op_cost_per_m3 = 0.45;
  double plant_life_years = 20.0;
};

struct DemandSet {
  TimeSeries power_demand;          // P^D(t), kW
  double power_total_target = 0.0;  // kWh over the horizon
  TimeSeries water_demand;          // m3/h
  int greenhouse_count = 0;
  TimeSeries greenhouse_power_profile;  // kW per greenhouse
  TimeSeries greenhouse_water_profile;  // m3/h per greenhouse

  double power_at(int t) const;
  double water_at(int t) const;
};

struct WaterTank {
  double cost_slope = 0.75;     // $/m3
  double cost_intercept = 5000.0;
  double life_years = 30.0;
  double max_volume = 1e5;      // m3
  bool initial_level_free = true;
  double initial_level = 0.0;   // used when the initial level is fixed
};

enum class SolveMode { kSteadyStateWater, kFullTimeDependent };
enum class WaterBasis { kFeed, kPermeate };

std::string to_string(SolveMode mode);
std::string to_string(WaterBasis basis);

struct NexusInstance {
  std::string name = "instance";
  TimeGrid grid;
  std::vector<TechnologySurrogate> technologies;
  std::vector<StorageTech> storage_techs;
  RoPlantParams ro;
  DemandSet demands;
  std::optional<double> epsilon_land;   // ha
  std::optional<double> epsilon_water;  // m3 over the horizon
  WaterBasis epsilon_water_basis = WaterBasis::kFeed;
  WaterTank water_tank;
  SolveMode mode = SolveMode::kFullTimeDependent;
};

struct CostBreakdown {
  std::vector<double> technology;  // per technology
  std::vector<double> storage;     // per storage tech
  double ro_investment = 0.0;      // annualized
  double ro_operation = 0.0;
  double tank = 0.0;               // annualized

  double total() const;
};

struct Solution {
  SolveStatus status = SolveStatus::kIterationLimit;
  double objective = 0.0;
  std::vector<double> unit_counts;         // per technology
  std::vector<double> tech_built;          // 0/1 per technology
  std::vector<double> storage_capacities;  // per storage tech, kWh
  double tank_volume = 0.0;
  double tank_built = 0.0;
  double qp_capacity = 0.0;
  double initial_volume = 0.0;                // V(0)
  std::vector<double> initial_soc;            // SOC_k(0)

  TimeSeries power;  // P(t)
  TimeSeries ec;
  std::vector<TimeSeries> p_stor;  // [k][t]
  std::vector<TimeSeries> p_rel;
  std::vector<TimeSeries> soc;
  TimeSeries q_f;
  TimeSeries q_p;
  std::array<TimeSeries, 3> wr;
  TimeSeries wr_sys;
  TimeSeries q_stor;
  TimeSeries q_rel;
  TimeSeries volume;  // V(t)
  std::vector<TimeSeries> feed_pressure;  // per stage, when maps exist

  CostBreakdown costs;
};

// Every invariant violation found, in a stable order; empty when valid.
std::vector<std::string> validate_instance(const NexusInstance& instance);

class InvalidInstance : public std::invalid_argument {
 public:
  explicit InvalidInstance(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

// Returns `instance` unchanged, or throws InvalidInstance with the full list.
const NexusInstance& require_valid(const NexusInstance& instance);

}  // namespace ewnexus

#endif  // EWNEXUS_MODEL_HPP_
