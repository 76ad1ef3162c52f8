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

#include "ewnexus/model.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <set>

namespace ewnexus {

double PowerCurve::operator()(double x) const {
  if (!covers(x)) {
    throw std::domain_error(fmt::format("power curve undefined at {}", x));
  }
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  if (it == xs.end()) return ys.back();
  std::size_t hi = static_cast<std::size_t>(it - xs.begin());
  std::size_t lo = hi - 1;
  double w = (x - xs[lo]) / (xs[hi] - xs[lo]);
  return ys[lo] + w * (ys[hi] - ys[lo]);
}

bool TechnologyUnitModel::homogeneous() const {
  return std::all_of(unit_derate.begin(), unit_derate.end(),
                     [&](double d) { return d == unit_derate.front(); });
}

double DemandSet::power_at(int t) const {
  double v = power_demand.at(t);
  if (greenhouse_count > 0) v += greenhouse_count * greenhouse_power_profile.at(t);
  return v;
}

double DemandSet::water_at(int t) const {
  double v = water_demand.at(t);
  if (greenhouse_count > 0) v += greenhouse_count * greenhouse_water_profile.at(t);
  return v;
}

std::string to_string(SolveMode mode) {
  return mode == SolveMode::kSteadyStateWater ? "steady" : "full";
}

std::string to_string(WaterBasis basis) {
  return basis == WaterBasis::kFeed ? "feed" : "permeate";
}

double CostBreakdown::total() const {
  double sum = ro_investment + ro_operation + tank;
  for (double c : technology) sum += c;
  for (double c : storage) sum += c;
  return sum;
}

ReluNetwork default_ec_network() {
  DenseLayer hidden;
  hidden.weights = {{1.1556, -0.5436, 0.4116, 0.4630},
                    {0.2843, 0.1137, 0.1071, 1.3843}};
  hidden.biases = {1.0465, -0.3829};
  DenseLayer out;
  out.weights = {{0.4638, 0.5371}};
  out.biases = {-0.9950};
  return {{hidden, out}};
}

namespace {

class Collector {
 public:
  template <typename... Args>
  void add(fmt::format_string<Args...> f, Args&&... args) {
    errors_.push_back(fmt::format(f, std::forward<Args>(args)...));
  }
  void series(const std::string& what, const TimeSeries& s, int steps) {
    if (static_cast<int>(s.size()) != steps) {
      add("{}: length {} does not match the {}-step grid", what, s.size(), steps);
    }
    for (std::size_t t = 0; t < s.size(); ++t) {
      if (!(s[t] >= 0.0) || !std::isfinite(s[t])) {
        add("{}: value {} at step {} must be finite and nonnegative", what, s[t], t);
        break;
      }
    }
  }
  std::vector<std::string> take() { return std::move(errors_); }

 private:
  std::vector<std::string> errors_;
};

void check_network(Collector& out, const ReluNetwork& net) {
  if (net.layers.empty()) {
    out.add("ec_network: no layers");
    return;
  }
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const DenseLayer& layer = net.layers[l];
    if (layer.outputs() == 0 || layer.outputs() != static_cast<int>(layer.biases.size())) {
      out.add("ec_network: layer {} has {} weight rows and {} biases", l,
              layer.outputs(), layer.biases.size());
    }
    for (const auto& row : layer.weights) {
      if (static_cast<int>(row.size()) != layer.inputs()) {
        out.add("ec_network: layer {} has ragged weight rows", l);
        break;
      }
    }
    if (l > 0 && layer.inputs() != net.layers[l - 1].outputs()) {
      out.add("ec_network: layer {} expects {} inputs but layer {} gives {}", l,
              layer.inputs(), l - 1, net.layers[l - 1].outputs());
    }
  }
  if (net.inputs() != 4) out.add("ec_network: expected 4 inputs, got {}", net.inputs());
  if (net.outputs() != 1) out.add("ec_network: expected 1 output, got {}", net.outputs());
}

void check_scaling(Collector& out, const char* what, const AffineScaling& s, int n) {
  if (static_cast<int>(s.scale.size()) != n || static_cast<int>(s.offset.size()) != n) {
    out.add("{}: expected {} scale and offset entries", what, n);
  }
}

}  // namespace

std::vector<std::string> validate_instance(const NexusInstance& inst) {
  Collector out;
  const int steps = inst.grid.horizon_steps;
  if (steps < 1) out.add("grid: horizon_steps must be >= 1, got {}", steps);
  if (!(inst.grid.dt_hours > 0.0)) out.add("grid: dt_hours must be > 0, got {}", inst.grid.dt_hours);

  if (inst.technologies.empty()) out.add("technologies: empty technology set");
  std::set<std::string> names;
  for (const TechnologySurrogate& tech : inst.technologies) {
    std::string p = "technology '" + tech.name + "'";
    if (!is_valid_lp_name(tech.name)) out.add("{}: name must be a plain identifier", p);
    if (!names.insert(tech.name).second) out.add("{}: duplicate name", p);
    if (!(tech.cost_slope >= 0.0)) out.add("{}: cost_slope must be >= 0", p);
    if (!(tech.land_slope >= 0.0)) out.add("{}: land_slope must be >= 0", p);
    if (!(tech.r_squared_cost >= 0.0 && tech.r_squared_cost <= 1.0) ||
        !(tech.r_squared_land >= 0.0 && tech.r_squared_land <= 1.0)) {
      out.add("{}: r_squared values must lie in [0,1]", p);
    }
    if (!(tech.per_unit_energy >= 0.0)) out.add("{}: per_unit_energy must be >= 0", p);
    if (tech.max_units < 0) out.add("{}: max_units must be >= 0", p);
    out.series(p + " per_unit_profile", tech.per_unit_profile, steps);
    if (!tech.water_per_unit.empty()) out.series(p + " water_per_unit", tech.water_per_unit, steps);
  }

  for (const StorageTech& s : inst.storage_techs) {
    std::string p = "storage '" + s.name + "'";
    if (!is_valid_lp_name(s.name)) out.add("{}: name must be a plain identifier", p);
    if (!names.insert(s.name).second) out.add("{}: duplicate name", p);
    if (!(s.efficiency > 0.0 && s.efficiency <= 1.0)) out.add("{}: efficiency must lie in (0,1]", p);
    if (!(s.lifespan_years > 0.0)) out.add("{}: lifespan_years must be > 0", p);
    if (!(s.capex_per_capacity >= 0.0) || !(s.opex_per_throughput >= 0.0)) out.add("{}: costs must be >= 0", p);
    if (!(s.max_capacity >= 0.0) || !std::isfinite(s.max_capacity)) out.add("{}: max_capacity must be finite and >= 0", p);
  }

  const RoPlantParams& ro = inst.ro;
  if (!(ro.wr_limit >= 0.0 && ro.wr_limit < 1.0)) out.add("ro: wr_limit must lie in [0,1), got {}", ro.wr_limit);
  if (!(ro.qf_bounds.lo >= 0.0) || !(ro.qf_bounds.hi >= ro.qf_bounds.lo) || !(ro.qf_bounds.hi > 0.0) ||
      !std::isfinite(ro.qf_bounds.hi)) {
    out.add("ro: qf_bounds must satisfy 0 <= min <= max < inf with max > 0");
  }
  for (int k = 0; k < 3; ++k) {
    const Interval& b = ro.wr_stage_bounds[k];
    if (!(b.lo >= 0.0 && b.lo <= b.hi && b.hi < 1.0)) out.add("ro: stage {} recovery bounds must satisfy 0 <= min <= max < 1", k + 1);
  }
  const NominalPoint& np = ro.nominal_point;
  double cascade = np.wr1 + (1 - np.wr1) * np.wr2 + (1 - np.wr1) * (1 - np.wr2) * np.wr3;
  if (std::fabs(cascade - np.wr_sys) > 1e-3) {
    out.add("ro: nominal wr_sys {} inconsistent with stage recoveries (cascade gives {:.6f})", np.wr_sys, cascade);
  }
  if (!(np.wr_sys > 0.0) || !(np.qp > 0.0)) out.add("ro: nominal wr_sys and qp must be > 0");
  if (!ro.stage_affine_maps.empty()) {
    if (ro.stage_affine_maps.size() != 3) out.add("ro: stage_affine_maps needs 0 or 3 entries");
    for (std::size_t k = 0; k < ro.stage_affine_maps.size(); ++k) {
      const Interval& fp = ro.stage_affine_maps[k].feed_pressure;
      if (!(fp.lo <= fp.hi) || !std::isfinite(fp.lo) || !std::isfinite(fp.hi)) out.add("ro: stage {} feed pressure bounds must be finite and ordered", k + 1);
    }
  }
  check_network(out, ro.ec_network);
  check_scaling(out, "ro: ec_input_scaling", ro.ec_input_scaling, 4);
  check_scaling(out, "ro: ec_output_scaling", ro.ec_output_scaling, 1);
  if (!(ro.inv_cost_slope >= 0.0) || !(ro.inv_cost_intercept >= 0.0) || !(ro.op_cost_per_m3 >= 0.0)) out.add("ro: cost coefficients must be >= 0");
  if (!(ro.plant_life_years > 0.0)) out.add("ro: plant_life_years must be > 0");

  const DemandSet& d = inst.demands;
  out.series("demands power_demand", d.power_demand, steps);
  out.series("demands water_demand", d.water_demand, steps);
  if (!(d.power_total_target >= 0.0)) out.add("demands: power_total_target must be >= 0");
  if (d.greenhouse_count < 0) out.add("demands: greenhouse_count must be >= 0");
  if (d.greenhouse_count > 0) {
    out.series("demands greenhouse_power_profile", d.greenhouse_power_profile, steps);
    out.series("demands greenhouse_water_profile", d.greenhouse_water_profile, steps);
  }

  if (inst.epsilon_land && !(*inst.epsilon_land > 0.0)) out.add("epsilon_land must be > 0");
  if (inst.epsilon_water && !(*inst.epsilon_water > 0.0)) out.add("epsilon_water must be > 0");

  const WaterTank& tank = inst.water_tank;
  if (!(tank.cost_slope >= 0.0) || !(tank.cost_intercept >= 0.0)) out.add("water_tank: costs must be >= 0");
  if (!(tank.life_years > 0.0)) out.add("water_tank: life_years must be > 0");
  if (!(tank.max_volume >= 0.0) || !std::isfinite(tank.max_volume)) out.add("water_tank: max_volume must be finite and >= 0");
  if (!tank.initial_level_free && !(tank.initial_level >= 0.0 && tank.initial_level <= tank.max_volume)) {
    out.add("water_tank: fixed initial_level must lie in [0, max_volume]");
  }
  return out.take();
}

namespace {
std::string join_errors(const std::vector<std::string>& errors) {
  std::string msg = fmt::format("invalid instance ({} problems)", errors.size());
  for (const std::string& e : errors) msg += "\n  " + e;
  return msg;
}
}  // namespace

InvalidInstance::InvalidInstance(std::vector<std::string> errors)
    : std::invalid_argument(join_errors(errors)), errors_(std::move(errors)) {}

const NexusInstance& require_valid(const NexusInstance& instance) {
  std::vector<std::string> errors = validate_instance(instance);
  if (!errors.empty()) throw InvalidInstance(std::move(errors));
  return instance;
}

}  // namespace ewnexus
