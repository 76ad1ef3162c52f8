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

#include "ewnexus/nexus_builder.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace ewnexus {

std::vector<VarId> Registry::all() const {
  std::vector<VarId> out;
  auto add = [&](const std::vector<VarId>& v) { out.insert(out.end(), v.begin(), v.end()); };
  auto add2 = [&](const std::vector<std::vector<VarId>>& v) {
    for (const auto& row : v) add(row);
  };
  add(power);
  add(ec);
  add(q_f);
  for (const auto& w : wr) add(w);
  add(wr_sys);
  add(q_p);
  add2(feed_pressure);
  add2(retentate_pressure);
  add(q_stor);
  add(q_rel);
  add(volume);
  out.insert(out.end(), {initial_volume, tank_volume, tank_built, qp_capacity});
  add(unit_count);
  add(tech_built);
  add(storage_capacity);
  add2(p_stor);
  add2(p_rel);
  add2(soc);
  add(initial_soc);
  add(tech_cost);
  add(storage_cost);
  out.insert(out.end(), {ro_investment, ro_operation, tank_cost});
  for (const ReluEncoding& e : ec_fragments) {
    add(e.outputs);
    add2(e.hidden);
    add2(e.active);
  }
  return out;
}

namespace {

class Builder {
 public:
  explicit Builder(const NexusInstance& inst)
      : inst_(inst),
        steps_(inst.grid.horizon_steps),
        dt_(inst.grid.dt_hours),
        ann_(inst.grid.annualization()),
        steady_(inst.mode == SolveMode::kSteadyStateWater) {}

  BuildArtifacts run() {
    add_technologies();
    add_storage();
    add_ro_plant();
    add_tank_and_water_balance();
    add_energy_balance();
    add_costs();
    BuildArtifacts art{inst_, std::move(m_), std::move(reg_), {}};
    art.size = art.model.size();
    return art;
  }

 private:
  static std::string at(const char* base, int t) { return fmt::format("{}_t{}", base, t); }

  void add_technologies() {
    for (const TechnologySurrogate& tech : inst_.technologies) {
      VarId n = m_.add_integer("n_" + tech.name, 0.0, tech.max_units);
      VarId y = m_.add_binary("built_" + tech.name);
      m_.add_constraint(LinearExpr().add(n).add(y, -static_cast<double>(tech.max_units)),
                        Sense::kLessEqual, 0.0, "exist_" + tech.name);
      reg_.unit_count.push_back(n);
      reg_.tech_built.push_back(y);
    }
    for (int t = 0; t < steps_; ++t) {
      VarId p = m_.add_continuous(at("P", t));
      LinearExpr def;
      def.add(p);
      for (std::size_t k = 0; k < inst_.technologies.size(); ++k) {
        def.add(reg_.unit_count[k], -inst_.technologies[k].per_unit_profile[t]);
      }
      m_.add_constraint(def, Sense::kEqual, 0.0, at("gen", t));
      reg_.power.push_back(p);
    }
  }

  void add_storage() {
    for (const StorageTech& s : inst_.storage_techs) {
      VarId cap = m_.add_continuous("cap_" + s.name, 0.0, s.max_capacity);
      VarId soc0 = m_.add_continuous("soc0_" + s.name, 0.0, s.max_capacity);
      m_.add_constraint(LinearExpr().add(soc0).add(cap, -1.0), Sense::kLessEqual, 0.0,
                        "soc0cap_" + s.name);
      std::vector<VarId> st, rel, soc;
      for (int t = 0; t < steps_; ++t) {
        st.push_back(m_.add_continuous(fmt::format("pstor_{}_t{}", s.name, t)));
        rel.push_back(m_.add_continuous(fmt::format("prel_{}_t{}", s.name, t)));
        soc.push_back(m_.add_continuous(fmt::format("soc_{}_t{}", s.name, t), 0.0, s.max_capacity));
        VarId prev = t == 0 ? soc0 : soc[t - 1];
        m_.add_constraint(LinearExpr()
                              .add(soc[t])
                              .add(prev, -1.0)
                              .add(st[t], -s.efficiency * dt_)
                              .add(rel[t], dt_),
                          Sense::kEqual, 0.0, fmt::format("socbal_{}_t{}", s.name, t));
        m_.add_constraint(LinearExpr().add(soc[t]).add(cap, -1.0), Sense::kLessEqual, 0.0,
                          fmt::format("soccap_{}_t{}", s.name, t));
      }
      m_.add_constraint(LinearExpr().add(rel[0], dt_).add(soc[0], -1.0), Sense::kLessEqual,
                        0.0, "socfirst_" + s.name);
      m_.add_constraint(LinearExpr().add(soc[0]).add(soc[steps_ - 1], -1.0),
                        Sense::kLessEqual, 0.0, "soccycle_" + s.name);
      m_.add_constraint(LinearExpr().add(soc0).add(soc[steps_ - 1], -1.0),
                        Sense::kLessEqual, 0.0, "socinit_" + s.name);
      reg_.storage_capacity.push_back(cap);
      reg_.initial_soc.push_back(soc0);
      reg_.p_stor.push_back(std::move(st));
      reg_.p_rel.push_back(std::move(rel));
      reg_.soc.push_back(std::move(soc));
    }
  }

  // One operating point of the RO plant: recoveries, feed, permeate, EC.
  void add_ro_copy(const std::string& tag) {
    const RoPlantParams& ro = inst_.ro;
    const NominalPoint& np = ro.nominal_point;
    VarId qf = m_.add_continuous("qf" + tag, ro.qf_bounds.lo, ro.qf_bounds.hi);
    std::array<VarId, 3> wr;
    for (int k = 0; k < 3; ++k) {
      wr[k] = m_.add_continuous(fmt::format("wr{}{}", k + 1, tag), ro.wr_stage_bounds[k].lo,
                                ro.wr_stage_bounds[k].hi);
    }
    VarId wrs = m_.add_continuous("wrsys" + tag, ro.wr_limit, 1.0);
    VarId qp = m_.add_continuous("qp" + tag);
    VarId ec = m_.add_continuous("ec" + tag, -kInf, kInf);

    TaylorSurrogate wr_taylor = build_wr_sys_taylor(np.wr1, np.wr2, np.wr3);
    LinearExpr wdef;
    wdef.add(wrs);
    for (int k = 0; k < 3; ++k) wdef.add(wr[k], -wr_taylor.gradient[k]);
    m_.add_constraint(wdef, Sense::kEqual, wr_taylor.constant(), "wrdef" + tag);

    TaylorSurrogate qp_taylor = build_qp_taylor(np.qp, np.wr_sys);
    m_.add_constraint(LinearExpr()
                          .add(qp)
                          .add(wrs, -qp_taylor.gradient[0])
                          .add(qf, -qp_taylor.gradient[1]),
                      Sense::kEqual, qp_taylor.constant(), "qpdef" + tag);
    m_.add_constraint(LinearExpr().add(qp).add(reg_.qp_capacity, -1.0), Sense::kLessEqual,
                      0.0, "qpcap" + tag);

    if (!ro.stage_affine_maps.empty()) {
      for (int k = 0; k < 3; ++k) {
        const StageAffineMap& map = ro.stage_affine_maps[k];
        VarId pf = m_.add_continuous(fmt::format("pfeed{}{}", k + 1, tag), map.feed_pressure.lo,
                                     map.feed_pressure.hi);
        VarId pr = m_.add_continuous(fmt::format("pret{}{}", k + 1, tag), -kInf, kInf);
        m_.add_constraint(LinearExpr().add(wr[k]).add(pf, -map.recovery_slope), Sense::kEqual,
                          map.recovery_intercept, fmt::format("stagewr{}{}", k + 1, tag));
        m_.add_constraint(LinearExpr().add(pr).add(pf, -map.retentate_slope), Sense::kEqual,
                          map.retentate_intercept, fmt::format("stagepr{}{}", k + 1, tag));
        feed_copy_[k] = pf;
        ret_copy_[k] = pr;
      }
    }

    // Network inputs are the scaled (WR1, WR2, WR3, Q_f).
    const AffineScaling& in = ro.ec_input_scaling;
    std::array<VarId, 4> raw{wr[0], wr[1], wr[2], qf};
    std::array<Interval, 4> raw_bounds{ro.wr_stage_bounds[0], ro.wr_stage_bounds[1],
                                       ro.wr_stage_bounds[2], ro.qf_bounds};
    std::vector<LinearExpr> inputs;
    std::vector<Interval> bounds;
    for (int i = 0; i < 4; ++i) {
      inputs.push_back(LinearExpr(in.offset[i]).add(raw[i], in.scale[i]));
      double a = in.scale[i] * raw_bounds[i].lo + in.offset[i];
      double b = in.scale[i] * raw_bounds[i].hi + in.offset[i];
      bounds.push_back({std::min(a, b), std::max(a, b)});
    }
    ReluEncoding enc = encode_relu_milp(m_, ro.ec_network, inputs, bounds, "ecnet" + tag);
    m_.add_constraint(LinearExpr().add(ec).add(enc.outputs[0], -ro.ec_output_scaling.scale[0]),
                      Sense::kEqual, ro.ec_output_scaling.offset[0], "ecdef" + tag);
    reg_.ec_fragments.push_back(std::move(enc));

    qf_copy_ = qf;
    wr_copy_ = wr;
    wrs_copy_ = wrs;
    qp_copy_ = qp;
    ec_copy_ = ec;
  }

  void push_ro_copy() {
    reg_.q_f.push_back(qf_copy_);
    for (int k = 0; k < 3; ++k) reg_.wr[k].push_back(wr_copy_[k]);
    reg_.wr_sys.push_back(wrs_copy_);
    reg_.q_p.push_back(qp_copy_);
    reg_.ec.push_back(ec_copy_);
    if (!inst_.ro.stage_affine_maps.empty()) {
      reg_.feed_pressure.resize(3);
      reg_.retentate_pressure.resize(3);
      for (int k = 0; k < 3; ++k) {
        reg_.feed_pressure[k].push_back(feed_copy_[k]);
        reg_.retentate_pressure[k].push_back(ret_copy_[k]);
      }
    }
  }

  void add_ro_plant() {
    reg_.qp_capacity = m_.add_continuous("qp_cap");
    if (steady_) {
      add_ro_copy("");
      for (int t = 0; t < steps_; ++t) push_ro_copy();
      return;
    }
    for (int t = 0; t < steps_; ++t) {
      add_ro_copy(fmt::format("_t{}", t));
      push_ro_copy();
    }
  }

  void add_tank_and_water_balance() {
    const WaterTank& tank = inst_.water_tank;
    reg_.tank_volume = m_.add_continuous("tank_vol", 0.0, tank.max_volume);
    reg_.tank_built = m_.add_binary("tank_built");
    m_.add_constraint(LinearExpr().add(reg_.tank_volume).add(reg_.tank_built, -tank.max_volume),
                      Sense::kLessEqual, 0.0, "tank_exist");
    if (tank.initial_level_free) {
      reg_.initial_volume = m_.add_continuous("vol0", 0.0, tank.max_volume);
    } else {
      reg_.initial_volume = m_.add_continuous("vol0", tank.initial_level, tank.initial_level);
    }
    m_.add_constraint(LinearExpr().add(reg_.initial_volume).add(reg_.tank_volume, -1.0),
                      Sense::kLessEqual, 0.0, "vol0cap");
    for (int t = 0; t < steps_; ++t) {
      VarId st = m_.add_continuous(at("qstor", t));
      VarId rel = m_.add_continuous(at("qrel", t));
      VarId v = m_.add_continuous(at("vol", t), 0.0, tank.max_volume);
      VarId prev = t == 0 ? reg_.initial_volume : reg_.volume[t - 1];
      // Permeate plus release covers demand plus what goes into the tank.
      LinearExpr bal;
      bal.add(reg_.q_p[t]).add(st, -1.0).add(rel, 1.0);
      for (std::size_t k = 0; k < inst_.technologies.size(); ++k) {
        const TimeSeries& w = inst_.technologies[k].water_per_unit;
        if (!w.empty() && w[t] != 0.0) bal.add(reg_.unit_count[k], -w[t]);
      }
      m_.add_constraint(bal, Sense::kEqual, inst_.demands.water_at(t), at("water", t));
      m_.add_constraint(LinearExpr().add(v).add(prev, -1.0).add(st, -dt_).add(rel, dt_),
                        Sense::kEqual, 0.0, at("tankbal", t));
      m_.add_constraint(LinearExpr().add(v).add(reg_.tank_volume, -1.0), Sense::kLessEqual, 0.0,
                        at("tankcap", t));
      reg_.q_stor.push_back(st);
      reg_.q_rel.push_back(rel);
      reg_.volume.push_back(v);
    }
    m_.add_constraint(LinearExpr().add(reg_.q_rel[0], dt_).add(reg_.volume[0], -1.0),
                      Sense::kLessEqual, 0.0, "tankfirst");
    m_.add_constraint(LinearExpr().add(reg_.volume[0]).add(reg_.volume[steps_ - 1], -1.0),
                      Sense::kLessEqual, 0.0, "tankcycle");
    m_.add_constraint(LinearExpr().add(reg_.initial_volume).add(reg_.volume[steps_ - 1], -1.0),
                      Sense::kLessEqual, 0.0, "tankinit");
  }

  LinearExpr net_power(int t) const {
    LinearExpr e;
    e.add(reg_.power[t]).add(reg_.ec[t], -1.0);
    for (std::size_t k = 0; k < inst_.storage_techs.size(); ++k) {
      e.add(reg_.p_rel[k][t]).add(reg_.p_stor[k][t], -1.0);
    }
    return e;
  }

  void add_energy_balance() {
    LinearExpr total;
    for (int t = 0; t < steps_; ++t) {
      LinearExpr e = net_power(t);
      m_.add_constraint(e, Sense::kGreaterEqual, inst_.demands.power_at(t), at("power", t));
      total.add(e, dt_);
    }
    m_.add_constraint(total, Sense::kGreaterEqual, inst_.demands.power_total_target,
                      "energy_target");
  }

  void add_costs() {
    LinearExpr objective;
    for (std::size_t k = 0; k < inst_.technologies.size(); ++k) {
      const TechnologySurrogate& tech = inst_.technologies[k];
      VarId c = m_.add_continuous("cost_" + tech.name, -kInf, kInf);
      m_.add_constraint(LinearExpr()
                            .add(c)
                            .add(reg_.unit_count[k], -tech.cost_slope * tech.per_unit_energy)
                            .add(reg_.tech_built[k], -tech.cost_intercept),
                        Sense::kEqual, 0.0, "costdef_" + tech.name);
      reg_.tech_cost.push_back(c);
      objective.add(c);
    }
    for (std::size_t k = 0; k < inst_.storage_techs.size(); ++k) {
      const StorageTech& s = inst_.storage_techs[k];
      VarId c = m_.add_continuous("cost_" + s.name);
      LinearExpr def;
      def.add(c).add(reg_.storage_capacity[k], -s.capex_per_capacity / s.lifespan_years);
      for (int t = 0; t < steps_; ++t) def.add(reg_.p_rel[k][t], -s.opex_per_throughput * dt_ * ann_);
      m_.add_constraint(def, Sense::kEqual, 0.0, "costdef_" + s.name);
      reg_.storage_cost.push_back(c);
      objective.add(c);
    }
    const RoPlantParams& ro = inst_.ro;
    reg_.ro_investment = m_.add_continuous("cost_ro_inv");
    m_.add_constraint(LinearExpr()
                          .add(reg_.ro_investment)
                          .add(reg_.qp_capacity, -ro.inv_cost_slope / ro.plant_life_years),
                      Sense::kEqual, ro.inv_cost_intercept / ro.plant_life_years, "costdef_ro_inv");
    reg_.ro_operation = m_.add_continuous("cost_ro_op");
    LinearExpr op;
    op.add(reg_.ro_operation);
    for (int t = 0; t < steps_; ++t) op.add(reg_.q_p[t], -ro.op_cost_per_m3 * dt_ * ann_);
    m_.add_constraint(op.normalized(), Sense::kEqual, 0.0, "costdef_ro_op");
    const WaterTank& tank = inst_.water_tank;
    reg_.tank_cost = m_.add_continuous("cost_tank");
    m_.add_constraint(LinearExpr()
                          .add(reg_.tank_cost)
                          .add(reg_.tank_volume, -tank.cost_slope / tank.life_years)
                          .add(reg_.tank_built, -tank.cost_intercept / tank.life_years),
                      Sense::kEqual, 0.0, "costdef_tank");
    objective.add(reg_.ro_investment).add(reg_.ro_operation).add(reg_.tank_cost);
    m_.set_objective(ObjectiveSense::kMinimize, objective);
  }

  const NexusInstance& inst_;
  const int steps_;
  const double dt_;
  const double ann_;
  const bool steady_;
  MilpModel m_;
  Registry reg_;

  VarId qf_copy_, wrs_copy_, qp_copy_, ec_copy_;
  std::array<VarId, 3> wr_copy_;
  std::array<VarId, 3> feed_copy_;
  std::array<VarId, 3> ret_copy_;
};

double max_taylor_wr_sys(const RoPlantParams& ro) {
  const NominalPoint& np = ro.nominal_point;
  TaylorSurrogate s = build_wr_sys_taylor(np.wr1, np.wr2, np.wr3);
  std::vector<double> best(3);
  for (int k = 0; k < 3; ++k) {
    best[k] = s.gradient[k] >= 0.0 ? ro.wr_stage_bounds[k].hi : ro.wr_stage_bounds[k].lo;
  }
  return std::min(1.0, s.evaluate(best));
}

void set_row(MilpModel& m, const char* name, const LinearExpr& expr, double rhs) {
  if (auto row = m.find_constraint(name)) {
    m.replace_constraint(*row, expr, Sense::kLessEqual, rhs);
  } else {
    m.add_constraint(expr, Sense::kLessEqual, rhs, name);
  }
}

void drop_row(MilpModel& m, const char* name) {
  if (auto row = m.find_constraint(name)) m.remove_constraint(*row);
}

}  // namespace

BuildArtifacts build(const NexusInstance& instance) {
  require_valid(instance);
  BuildArtifacts art = Builder(instance).run();
  art.instance.epsilon_land.reset();
  art.instance.epsilon_water.reset();
  apply_epsilon(art, instance.epsilon_land, instance.epsilon_water);
  return art;
}

double water_use_lower_bound(const NexusInstance& inst) {
  const int steps = inst.grid.horizon_steps;
  const double dt = inst.grid.dt_hours;
  double demand = 0.0;
  for (int t = 0; t < steps; ++t) demand += inst.demands.water_at(t) * dt;
  if (inst.epsilon_water_basis == WaterBasis::kPermeate) return demand;
  // Feed: sum Q_p >= sum demand over a closed tank cycle, and the permeate
  // surrogate gives Q_f = (Q_p - g_wr * WR_sys - c) / g_qf.
  const NominalPoint& np = inst.ro.nominal_point;
  TaylorSurrogate qp = build_qp_taylor(np.qp, np.wr_sys);
  double per_step = qp.gradient[0] * max_taylor_wr_sys(inst.ro) + qp.constant();
  double from_demand = (demand - per_step * inst.grid.total_hours()) / qp.gradient[1];
  return std::max(inst.ro.qf_bounds.lo * inst.grid.total_hours(), from_demand);
}

void apply_epsilon(BuildArtifacts& art, std::optional<double> epsilon_land,
                   std::optional<double> epsilon_water) {
  for (const auto& eps : {epsilon_land, epsilon_water}) {
    if (eps && !(*eps > 0.0)) {
      throw std::invalid_argument(fmt::format("epsilon must be positive, got {}", *eps));
    }
  }
  const NexusInstance& inst = art.instance;
  const Registry& reg = art.registry;
  if (epsilon_land) {
    if (std::isinf(*epsilon_land)) {
      drop_row(art.model, kLandRowName);
      art.instance.epsilon_land.reset();
    } else {
      LinearExpr land;
      for (std::size_t k = 0; k < inst.technologies.size(); ++k) {
        const TechnologySurrogate& tech = inst.technologies[k];
        land.add(reg.unit_count[k], tech.land_slope * tech.per_unit_energy);
        land.add(reg.tech_built[k], tech.land_intercept);
      }
      set_row(art.model, kLandRowName, land, *epsilon_land);
      art.instance.epsilon_land = epsilon_land;
    }
  }
  if (epsilon_water) {
    if (std::isinf(*epsilon_water)) {
      drop_row(art.model, kWaterRowName);
      art.instance.epsilon_water.reset();
    } else {
      double bound = water_use_lower_bound(inst);
      if (*epsilon_water < bound * (1.0 - 1e-9)) {
        throw GuaranteedInfeasible(
            fmt::format("water limit {} m3 is below the smallest achievable {} use of {} m3",
                        *epsilon_water, to_string(inst.epsilon_water_basis), bound),
            bound);
      }
      const auto& flows = inst.epsilon_water_basis == WaterBasis::kFeed ? reg.q_f : reg.q_p;
      LinearExpr water;
      for (VarId v : flows) water.add(v, inst.grid.dt_hours);
      set_row(art.model, kWaterRowName, water.normalized(), *epsilon_water);
      art.instance.epsilon_water = epsilon_water;
    }
  }
  art.size = art.model.size();
}

Solution extract_solution(const BuildArtifacts& art, const MilpResult& result) {
  Solution s;
  s.status = result.status;
  s.objective = result.objective;
  if (!result.has_solution()) return s;
  const std::vector<double>& x = result.values;
  const Registry& reg = art.registry;
  auto get = [&](VarId v) { return x[v.index]; };
  auto series = [&](const std::vector<VarId>& vars) {
    TimeSeries out;
    for (VarId v : vars) out.push_back(get(v));
    return out;
  };
  for (VarId v : reg.unit_count) s.unit_counts.push_back(get(v));
  for (VarId v : reg.tech_built) s.tech_built.push_back(get(v));
  for (VarId v : reg.storage_capacity) s.storage_capacities.push_back(get(v));
  for (VarId v : reg.initial_soc) s.initial_soc.push_back(get(v));
  s.tank_volume = get(reg.tank_volume);
  s.tank_built = get(reg.tank_built);
  s.qp_capacity = get(reg.qp_capacity);
  s.initial_volume = get(reg.initial_volume);
  s.power = series(reg.power);
  s.ec = series(reg.ec);
  for (std::size_t k = 0; k < reg.p_stor.size(); ++k) {
    s.p_stor.push_back(series(reg.p_stor[k]));
    s.p_rel.push_back(series(reg.p_rel[k]));
    s.soc.push_back(series(reg.soc[k]));
  }
  s.q_f = series(reg.q_f);
  s.q_p = series(reg.q_p);
  for (int k = 0; k < 3; ++k) s.wr[k] = series(reg.wr[k]);
  s.wr_sys = series(reg.wr_sys);
  s.q_stor = series(reg.q_stor);
  s.q_rel = series(reg.q_rel);
  s.volume = series(reg.volume);
  for (const auto& fp : reg.feed_pressure) s.feed_pressure.push_back(series(fp));
  for (VarId v : reg.tech_cost) s.costs.technology.push_back(get(v));
  for (VarId v : reg.storage_cost) s.costs.storage.push_back(get(v));
  s.costs.ro_investment = get(reg.ro_investment);
  s.costs.ro_operation = get(reg.ro_operation);
  s.costs.tank = get(reg.tank_cost);
  return s;
}

double land_use(const NexusInstance& inst, const Solution& s) {
  double land = 0.0;
  for (std::size_t k = 0; k < inst.technologies.size(); ++k) {
    const TechnologySurrogate& tech = inst.technologies[k];
    land += tech.land_slope * s.unit_counts[k] * tech.per_unit_energy +
            tech.land_intercept * s.tech_built[k];
  }
  return land;
}

double water_use(const NexusInstance& inst, const Solution& s) {
  const TimeSeries& flow = inst.epsilon_water_basis == WaterBasis::kFeed ? s.q_f : s.q_p;
  double total = 0.0;
  for (double q : flow) total += q * inst.grid.dt_hours;
  return total;
}

}  // namespace ewnexus
