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

#include "ewnexus/validator.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <initializer_list>

#include "ewnexus/surrogates.hpp"

namespace ewnexus {
namespace {

constexpr double kAbsoluteFloor = 1e-9;

// Collects residuals. Each check passes its terms so the tolerance can be
// relative to the magnitudes involved.
class Checker {
 public:
  explicit Checker(double tol) : tol_(tol) {}

  // lhs == rhs
  void equal(const std::string& name, int step, double lhs, double rhs,
             std::initializer_list<double> terms = {}) {
    push(name, step, lhs - rhs, scale_of(lhs, rhs, terms));
  }
  // lhs <= rhs
  void at_most(const std::string& name, int step, double lhs, double rhs,
               std::initializer_list<double> terms = {}) {
    push(name, step, std::max(0.0, lhs - rhs), scale_of(lhs, rhs, terms));
  }
  void at_least(const std::string& name, int step, double lhs, double rhs,
                std::initializer_list<double> terms = {}) {
    push(name, step, std::min(0.0, lhs - rhs), scale_of(lhs, rhs, terms));
  }
  void within(const std::string& name, int step, double x, double lo, double hi) {
    at_least(name + "_lo", step, x, lo);
    at_most(name + "_hi", step, x, hi);
  }
  void integral(const std::string& name, int step, double x) {
    push(name, step, x - std::round(x), std::abs(x));
  }

  std::vector<Residual> take() { return std::move(out_); }

 private:
  static double scale_of(double lhs, double rhs, std::initializer_list<double> terms) {
    double s = std::max(std::abs(lhs), std::abs(rhs));
    for (double t : terms) s = std::max(s, std::abs(t));
    return s;
  }

  void push(const std::string& name, int step, double value, double scale) {
    bool bad = !std::isfinite(value) || std::abs(value) > std::max(tol_ * scale, kAbsoluteFloor);
    out_.push_back({name, step, value, scale, bad});
  }

  double tol_;
  std::vector<Residual> out_;
};

void require_length(const char* what, std::size_t got, std::size_t want) {
  if (got != want) {
    throw GridMismatch(fmt::format("{} has {} entries, expected {}", what, got, want));
  }
}

void check_shape(const NexusInstance& inst, const Solution& s) {
  const std::size_t steps = inst.grid.horizon_steps;
  const std::size_t techs = inst.technologies.size();
  const std::size_t stores = inst.storage_techs.size();
  require_length("unit_counts", s.unit_counts.size(), techs);
  require_length("tech_built", s.tech_built.size(), techs);
  require_length("storage_capacities", s.storage_capacities.size(), stores);
  require_length("initial_soc", s.initial_soc.size(), stores);
  require_length("p_stor", s.p_stor.size(), stores);
  require_length("p_rel", s.p_rel.size(), stores);
  require_length("soc", s.soc.size(), stores);
  for (std::size_t k = 0; k < stores; ++k) {
    require_length("p_stor series", s.p_stor[k].size(), steps);
    require_length("p_rel series", s.p_rel[k].size(), steps);
    require_length("soc series", s.soc[k].size(), steps);
  }
  require_length("power", s.power.size(), steps);
  require_length("ec", s.ec.size(), steps);
  require_length("q_f", s.q_f.size(), steps);
  require_length("q_p", s.q_p.size(), steps);
  for (const TimeSeries& w : s.wr) require_length("wr", w.size(), steps);
  require_length("wr_sys", s.wr_sys.size(), steps);
  require_length("q_stor", s.q_stor.size(), steps);
  require_length("q_rel", s.q_rel.size(), steps);
  require_length("volume", s.volume.size(), steps);
  require_length("technology costs", s.costs.technology.size(), techs);
  require_length("storage costs", s.costs.storage.size(), stores);
  if (!inst.ro.stage_affine_maps.empty()) {
    require_length("feed_pressure", s.feed_pressure.size(), 3);
    for (const TimeSeries& p : s.feed_pressure) require_length("feed_pressure series", p.size(), steps);
  }
}

CostBreakdown recompute_costs(const NexusInstance& inst, const Solution& s) {
  const int steps = inst.grid.horizon_steps;
  const double dt = inst.grid.dt_hours;
  const double ann = inst.grid.annualization();
  CostBreakdown c;
  for (std::size_t k = 0; k < inst.technologies.size(); ++k) {
    const TechnologySurrogate& tech = inst.technologies[k];
    // The surrogate line in annual energy; the intercept applies once built.
    c.technology.push_back(tech.cost_slope * tech.per_unit_energy * s.unit_counts[k] +
                           tech.cost_intercept * s.tech_built[k]);
  }
  for (std::size_t k = 0; k < inst.storage_techs.size(); ++k) {
    const StorageTech& st = inst.storage_techs[k];
    double released = 0.0;
    for (int t = 0; t < steps; ++t) released += s.p_rel[k][t] * dt;
    c.storage.push_back(st.capex_per_capacity * s.storage_capacities[k] / st.lifespan_years +
                        st.opex_per_throughput * released * ann);
  }
  const RoPlantParams& ro = inst.ro;
  c.ro_investment =
      (ro.inv_cost_slope * s.qp_capacity + ro.inv_cost_intercept) / ro.plant_life_years;
  double permeate = 0.0;
  for (int t = 0; t < steps; ++t) permeate += s.q_p[t] * dt;
  c.ro_operation = ro.op_cost_per_m3 * permeate * ann;
  const WaterTank& tank = inst.water_tank;
  c.tank = (tank.cost_slope * s.tank_volume + tank.cost_intercept * s.tank_built) /
           tank.life_years;
  return c;
}

}  // namespace

std::vector<Residual> ValidationReport::violations() const {
  std::vector<Residual> out;
  for (const Residual& r : residuals) {
    if (r.violated) out.push_back(r);
  }
  return out;
}

std::string ValidationReport::summary() const {
  std::vector<Residual> bad = violations();
  if (bad.empty()) return fmt::format("PASS ({} checks)", residuals.size());
  std::string out = fmt::format("FAIL ({} of {} checks violated)", bad.size(), residuals.size());
  for (std::size_t i = 0; i < bad.size() && i < 10; ++i) {
    const Residual& r = bad[i];
    out += r.step >= 0 ? fmt::format("\n  {} t={}: {:.6g}", r.check, r.step, r.value)
                       : fmt::format("\n  {}: {:.6g}", r.check, r.value);
  }
  if (bad.size() > 10) out += fmt::format("\n  ... {} more", bad.size() - 10);
  return out;
}

ValidationReport check_solution(const NexusInstance& inst, const Solution& s, double tol) {
  check_shape(inst, s);
  const int steps = inst.grid.horizon_steps;
  const double dt = inst.grid.dt_hours;
  const RoPlantParams& ro = inst.ro;
  const WaterTank& tank = inst.water_tank;
  Checker c(tol);

  // Design variables.
  for (std::size_t k = 0; k < inst.technologies.size(); ++k) {
    const TechnologySurrogate& tech = inst.technologies[k];
    const std::string& name = tech.name;
    c.integral("units_integral_" + name, -1, s.unit_counts[k]);
    c.within("units_" + name, -1, s.unit_counts[k], 0.0, tech.max_units);
    c.integral("built_integral_" + name, -1, s.tech_built[k]);
    c.within("built_" + name, -1, s.tech_built[k], 0.0, 1.0);
    c.at_most("units_need_built_" + name, -1, s.unit_counts[k],
              tech.max_units * s.tech_built[k]);
  }
  c.within("tank_volume", -1, s.tank_volume, 0.0, tank.max_volume);
  c.integral("tank_built_integral", -1, s.tank_built);
  c.within("tank_built", -1, s.tank_built, 0.0, 1.0);
  c.at_most("tank_needs_built", -1, s.tank_volume, tank.max_volume * s.tank_built);
  c.at_least("qp_capacity", -1, s.qp_capacity, 0.0);
  c.at_least("initial_volume", -1, s.initial_volume, 0.0);
  c.at_most("initial_volume_cap", -1, s.initial_volume, s.tank_volume);
  if (!tank.initial_level_free) {
    c.equal("initial_volume_fixed", -1, s.initial_volume, tank.initial_level);
  }

  // Generation.
  for (int t = 0; t < steps; ++t) {
    double p = 0.0;
    for (std::size_t k = 0; k < inst.technologies.size(); ++k) {
      p += s.unit_counts[k] * inst.technologies[k].per_unit_profile[t];
    }
    c.equal("generation", t, s.power[t], p);
  }

  // Storage, lossless apart from the charging efficiency.
  for (std::size_t k = 0; k < inst.storage_techs.size(); ++k) {
    const StorageTech& st = inst.storage_techs[k];
    const std::string& name = st.name;
    double cap = s.storage_capacities[k];
    c.within("storage_capacity_" + name, -1, cap, 0.0, st.max_capacity);
    c.within("initial_soc_" + name, -1, s.initial_soc[k], 0.0, cap);
    double prev = s.initial_soc[k];
    for (int t = 0; t < steps; ++t) {
      double in = st.efficiency * s.p_stor[k][t] * dt;
      double out = s.p_rel[k][t] * dt;
      c.at_least("charge_" + name, t, s.p_stor[k][t], 0.0);
      c.at_least("discharge_" + name, t, s.p_rel[k][t], 0.0);
      c.equal("soc_balance_" + name, t, s.soc[k][t], prev + in - out, {prev, in, out});
      c.within("soc_" + name, t, s.soc[k][t], 0.0, cap);
      prev = s.soc[k][t];
    }
    c.at_most("soc_first_release_" + name, 0, s.p_rel[k][0] * dt, s.soc[k][0]);
    c.at_most("soc_cycle_" + name, -1, s.soc[k][0], s.soc[k][steps - 1]);
    c.at_most("soc_initial_" + name, -1, s.initial_soc[k], s.soc[k][steps - 1]);
  }

  // RO plant: surrogates evaluated directly.
  const NominalPoint& np = ro.nominal_point;
  TaylorSurrogate wr_taylor = build_wr_sys_taylor(np.wr1, np.wr2, np.wr3);
  TaylorSurrogate qp_taylor = build_qp_taylor(np.qp, np.wr_sys);
  for (int t = 0; t < steps; ++t) {
    std::vector<double> wr{s.wr[0][t], s.wr[1][t], s.wr[2][t]};
    c.within("feed_flow", t, s.q_f[t], ro.qf_bounds.lo, ro.qf_bounds.hi);
    for (int k = 0; k < 3; ++k) {
      c.within(fmt::format("stage_recovery{}", k + 1), t, wr[k], ro.wr_stage_bounds[k].lo,
               ro.wr_stage_bounds[k].hi);
    }
    c.equal("system_recovery", t, s.wr_sys[t], wr_taylor.evaluate(wr),
            {wr_taylor.value_at_point});
    c.within("system_recovery_range", t, s.wr_sys[t], ro.wr_limit, 1.0);
    double qp = qp_taylor.evaluate({s.wr_sys[t], s.q_f[t]});
    c.equal("permeate", t, s.q_p[t], qp,
            {qp_taylor.gradient[0] * s.wr_sys[t], qp_taylor.gradient[1] * s.q_f[t],
             qp_taylor.constant()});
    c.at_least("permeate_nonnegative", t, s.q_p[t], 0.0);
    c.at_most("permeate_capacity", t, s.q_p[t], s.qp_capacity);

    std::vector<double> raw{wr[0], wr[1], wr[2], s.q_f[t]};
    std::vector<double> net_in(4);
    for (int i = 0; i < 4; ++i) {
      net_in[i] = ro.ec_input_scaling.scale[i] * raw[i] + ro.ec_input_scaling.offset[i];
    }
    double ec = ro.ec_output_scaling.scale[0] * relu_forward(ro.ec_network, net_in) +
                ro.ec_output_scaling.offset[0];
    c.equal("energy_consumption", t, s.ec[t], ec, {ro.ec_output_scaling.offset[0]});

    if (!ro.stage_affine_maps.empty()) {
      for (int k = 0; k < 3; ++k) {
        const StageAffineMap& map = ro.stage_affine_maps[k];
        double pf = s.feed_pressure[k][t];
        c.within(fmt::format("feed_pressure{}", k + 1), t, pf, map.feed_pressure.lo,
                 map.feed_pressure.hi);
        c.equal(fmt::format("stage_map{}", k + 1), t, wr[k],
                map.recovery_intercept + map.recovery_slope * pf,
                {map.recovery_intercept, map.recovery_slope * pf});
      }
    }
  }
  if (inst.mode == SolveMode::kSteadyStateWater) {
    for (int t = 1; t < steps; ++t) {
      c.equal("steady_feed", t, s.q_f[t], s.q_f[0]);
      c.equal("steady_permeate", t, s.q_p[t], s.q_p[0]);
      c.equal("steady_recovery", t, s.wr_sys[t], s.wr_sys[0]);
      c.equal("steady_consumption", t, s.ec[t], s.ec[0]);
      for (int k = 0; k < 3; ++k) c.equal("steady_stage_recovery", t, s.wr[k][t], s.wr[k][0]);
    }
  }

  // Water supply and tank.
  double prev_volume = s.initial_volume;
  for (int t = 0; t < steps; ++t) {
    double crops = 0.0;
    for (std::size_t k = 0; k < inst.technologies.size(); ++k) {
      const TimeSeries& w = inst.technologies[k].water_per_unit;
      if (!w.empty()) crops += s.unit_counts[k] * w[t];
    }
    double demand = inst.demands.water_at(t);
    c.equal("water_balance", t, s.q_p[t] - s.q_stor[t] + s.q_rel[t], demand + crops,
            {s.q_p[t], s.q_stor[t], s.q_rel[t], crops});
    c.at_least("tank_inflow", t, s.q_stor[t], 0.0);
    c.at_least("tank_outflow", t, s.q_rel[t], 0.0);
    double in = s.q_stor[t] * dt;
    double out = s.q_rel[t] * dt;
    c.equal("tank_balance", t, s.volume[t], prev_volume + in - out, {prev_volume, in, out});
    c.within("tank_level", t, s.volume[t], 0.0, s.tank_volume);
    prev_volume = s.volume[t];
  }
  c.at_most("tank_first_release", 0, s.q_rel[0] * dt, s.volume[0]);
  c.at_most("tank_cycle", -1, s.volume[0], s.volume[steps - 1]);
  c.at_most("tank_initial", -1, s.initial_volume, s.volume[steps - 1]);

  // Power.
  double delivered = 0.0;
  for (int t = 0; t < steps; ++t) {
    double storage_net = 0.0;
    for (std::size_t k = 0; k < inst.storage_techs.size(); ++k) {
      storage_net += s.p_rel[k][t] - s.p_stor[k][t];
    }
    double net = s.power[t] - s.ec[t] + storage_net;
    c.at_least("power_balance", t, net, inst.demands.power_at(t), {s.power[t], s.ec[t]});
    delivered += net * dt;
  }
  c.at_least("energy_target", -1, delivered, inst.demands.power_total_target);

  // Epsilon limits.
  if (inst.epsilon_land) {
    double land = 0.0;
    for (std::size_t k = 0; k < inst.technologies.size(); ++k) {
      const TechnologySurrogate& tech = inst.technologies[k];
      land += tech.land_slope * tech.per_unit_energy * s.unit_counts[k] +
              tech.land_intercept * s.tech_built[k];
    }
    c.at_most("land_limit", -1, land, *inst.epsilon_land);
  }
  if (inst.epsilon_water) {
    const TimeSeries& flow = inst.epsilon_water_basis == WaterBasis::kFeed ? s.q_f : s.q_p;
    double used = 0.0;
    for (double q : flow) used += q * dt;
    c.at_most("water_limit", -1, used, *inst.epsilon_water);
  }

  // Costs.
  ValidationReport report;
  report.recomputed_costs = recompute_costs(inst, s);
  const CostBreakdown& rc = report.recomputed_costs;
  const CostBreakdown& sc = s.costs;
  for (std::size_t k = 0; k < rc.technology.size(); ++k) {
    c.equal("cost_" + inst.technologies[k].name, -1, sc.technology[k], rc.technology[k]);
  }
  for (std::size_t k = 0; k < rc.storage.size(); ++k) {
    c.equal("cost_" + inst.storage_techs[k].name, -1, sc.storage[k], rc.storage[k]);
  }
  c.equal("cost_ro_investment", -1, sc.ro_investment, rc.ro_investment);
  c.equal("cost_ro_operation", -1, sc.ro_operation, rc.ro_operation);
  c.equal("cost_tank", -1, sc.tank, rc.tank);
  report.recomputed_objective = rc.total();
  c.equal("objective", -1, s.objective, report.recomputed_objective);

  report.residuals = c.take();
  report.pass = std::none_of(report.residuals.begin(), report.residuals.end(),
                             [](const Residual& r) { return r.violated; });
  return report;
}

SolutionRejected::SolutionRejected(ValidationReport report)
    : std::runtime_error("solution rejected by check_solution: " + report.summary()),
      report_(std::move(report)) {}

EnergyMixReport energy_mix_report(const NexusInstance& inst, const Solution& s, double tol) {
  ValidationReport check = check_solution(inst, s, tol);
  if (!check.pass) throw SolutionRejected(std::move(check));
  const CostBreakdown& costs = check.recomputed_costs;
  const double total_cost = costs.total();
  const double ann = inst.grid.annualization();
  auto cost_share = [&](double c) { return total_cost != 0.0 ? 100.0 * c / total_cost : 0.0; };

  EnergyMixReport out;
  out.total_cost = total_cost;
  double total_energy = 0.0;
  for (std::size_t k = 0; k < inst.technologies.size(); ++k) {
    const TechnologySurrogate& tech = inst.technologies[k];
    EnergyMixEntry e;
    e.name = tech.name;
    for (double p : tech.per_unit_profile) e.horizon_energy += s.unit_counts[k] * p * inst.grid.dt_hours;
    e.annual_energy = e.horizon_energy * ann;
    e.annual_cost = costs.technology[k];
    e.cost_share = cost_share(e.annual_cost);
    total_energy += e.horizon_energy;
    out.technologies.push_back(e);
  }
  for (EnergyMixEntry& e : out.technologies) {
    e.energy_share = total_energy > 0.0 ? 100.0 * e.horizon_energy / total_energy : 0.0;
  }
  for (std::size_t k = 0; k < inst.storage_techs.size(); ++k) {
    EnergyMixEntry e;
    e.name = inst.storage_techs[k].name;
    e.annual_cost = costs.storage[k];
    e.cost_share = cost_share(e.annual_cost);
    out.storage.push_back(e);
  }
  out.ro_cost_share = cost_share(costs.ro_investment + costs.ro_operation);
  out.tank_cost_share = cost_share(costs.tank);
  return out;
}

}  // namespace ewnexus
