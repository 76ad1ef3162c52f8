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

#include "ewnexus/surrogates.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace ewnexus {

double TaylorSurrogate::evaluate(const std::vector<double>& x) const {
  if (x.size() != expansion_point.size()) {
    throw std::invalid_argument("Taylor surrogate: dimension mismatch");
  }
  double v = value_at_point;
  for (std::size_t i = 0; i < x.size(); ++i) {
    v += gradient[i] * (x[i] - expansion_point[i]);
  }
  return v;
}

double TaylorSurrogate::constant() const {
  double c = value_at_point;
  for (std::size_t i = 0; i < gradient.size(); ++i) c -= gradient[i] * expansion_point[i];
  return c;
}

namespace {
void check_recovery(double wr, const char* name) {
  if (!(wr >= 0.0 && wr < 1.0)) {
    throw std::domain_error(fmt::format("{} = {} outside [0,1)", name, wr));
  }
}
}  // namespace

double wr_sys_exact(double wr1, double wr2, double wr3) {
  check_recovery(wr1, "wr1");
  check_recovery(wr2, "wr2");
  check_recovery(wr3, "wr3");
  return wr1 + (1 - wr1) * wr2 + (1 - wr1) * (1 - wr2) * wr3;
}

TaylorSurrogate build_wr_sys_taylor(double wr1, double wr2, double wr3) {
  TaylorSurrogate s;
  s.expansion_point = {wr1, wr2, wr3};
  s.value_at_point = wr_sys_exact(wr1, wr2, wr3);
  s.gradient = {1 - wr2 - wr3 + wr2 * wr3, 1 - wr1 - wr3 + wr1 * wr3,
                1 - wr1 - wr2 + wr1 * wr2};
  return s;
}

TaylorSurrogate build_qp_taylor(double nominal_qp, double nominal_wr_sys) {
  if (!(nominal_wr_sys > 0.0)) {
    throw std::domain_error(
        fmt::format("nominal recovery must be positive, got {}", nominal_wr_sys));
  }
  TaylorSurrogate s;
  double qf = nominal_qp / nominal_wr_sys;
  s.expansion_point = {nominal_wr_sys, qf};
  s.value_at_point = nominal_qp;
  s.gradient = {qf, nominal_wr_sys};
  return s;
}

double relu_forward(const ReluNetwork& net, const std::vector<double>& input) {
  if (net.layers.empty()) throw std::invalid_argument("network has no layers");
  if (static_cast<int>(input.size()) != net.inputs()) {
    throw std::invalid_argument(fmt::format(
        "network expects {} inputs, got {}", net.inputs(), input.size()));
  }
  std::vector<double> x = input;
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const DenseLayer& layer = net.layers[l];
    std::vector<double> y(layer.outputs());
    for (int j = 0; j < layer.outputs(); ++j) {
      double a = layer.biases[j];
      for (std::size_t i = 0; i < x.size(); ++i) a += layer.weights[j][i] * x[i];
      y[j] = l + 1 < net.layers.size() ? std::max(0.0, a) : a;
    }
    x = std::move(y);
  }
  if (x.size() != 1) throw std::invalid_argument("network must have one output");
  return x[0];
}

namespace {

std::vector<Interval> affine_bounds(const DenseLayer& layer,
                                    const std::vector<Interval>& in) {
  std::vector<Interval> out(layer.outputs());
  for (int j = 0; j < layer.outputs(); ++j) {
    double lo = layer.biases[j];
    double hi = layer.biases[j];
    for (std::size_t i = 0; i < in.size(); ++i) {
      double w = layer.weights[j][i];
      lo += std::min(w * in[i].lo, w * in[i].hi);
      hi += std::max(w * in[i].lo, w * in[i].hi);
    }
    out[j] = {lo, hi};
  }
  return out;
}

}  // namespace

NetworkBounds propagate_bounds(const ReluNetwork& net,
                               const std::vector<Interval>& input_bounds) {
  if (static_cast<int>(input_bounds.size()) != net.inputs()) {
    throw std::invalid_argument("input bounds do not match the network");
  }
  for (const Interval& b : input_bounds) {
    if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || b.lo > b.hi) {
      throw ModelError("ReLU encoding needs finite, ordered input bounds");
    }
  }
  NetworkBounds nb;
  std::vector<Interval> cur = input_bounds;
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    std::vector<Interval> pre = affine_bounds(net.layers[l], cur);
    if (l + 1 == net.layers.size()) {
      nb.output = pre;
      break;
    }
    nb.hidden.push_back(pre);
    for (Interval& b : pre) b = {std::max(0.0, b.lo), std::max(0.0, b.hi)};
    cur = std::move(pre);
  }
  return nb;
}

ReluEncoding encode_relu_milp(MilpModel& model, const ReluNetwork& net,
                              const std::vector<LinearExpr>& inputs,
                              const std::vector<Interval>& input_bounds,
                              const std::string& prefix) {
  if (static_cast<int>(inputs.size()) != net.inputs()) {
    throw std::invalid_argument("input expressions do not match the network");
  }
  ReluEncoding enc;
  enc.bounds = propagate_bounds(net, input_bounds);
  std::vector<LinearExpr> cur = inputs;
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const DenseLayer& layer = net.layers[l];
    const bool last = l + 1 == net.layers.size();
    std::vector<LinearExpr> next;
    std::vector<VarId> ys;
    std::vector<VarId> zs;
    for (int j = 0; j < layer.outputs(); ++j) {
      LinearExpr a(layer.biases[j]);
      for (std::size_t i = 0; i < cur.size(); ++i) {
        if (layer.weights[j][i] != 0.0) a.add(cur[i], layer.weights[j][i]);
      }
      std::string tag = last ? fmt::format("{}_out{}", prefix, j)
                             : fmt::format("{}_l{}n{}", prefix, l, j);
      if (last) {
        const Interval& b = enc.bounds.output[j];
        VarId out = model.add_continuous(tag, b.lo, b.hi);
        model.add_constraint(LinearExpr().add(out).add(a, -1.0), Sense::kEqual,
                             0.0, tag + "_def");
        enc.outputs.push_back(out);
        continue;
      }
      const Interval& b = enc.bounds.hidden[l][j];
      double m_plus = std::max(0.0, b.hi);
      double m_minus = std::max(0.0, -b.lo);
      VarId y = model.add_continuous(tag + "_y", 0.0, m_plus);
      VarId z = model.add_binary(tag + "_z");
      if (b.lo >= 0.0) {
        model.set_bounds(z, 1.0, 1.0);
        ++enc.fixed_indicators;
      } else if (b.hi <= 0.0) {
        model.set_bounds(z, 0.0, 0.0);
        ++enc.fixed_indicators;
      }
      // y - a >= 0
      model.add_constraint(LinearExpr().add(y).add(a, -1.0),
                           Sense::kGreaterEqual, 0.0, tag + "_lo");
      // y - a + M- z <= M-
      model.add_constraint(LinearExpr().add(y).add(a, -1.0).add(z, m_minus),
                           Sense::kLessEqual, m_minus, tag + "_off");
      // y - M+ z <= 0
      model.add_constraint(LinearExpr().add(y).add(z, -m_plus),
                           Sense::kLessEqual, 0.0, tag + "_on");
      ys.push_back(y);
      zs.push_back(z);
      next.push_back(LinearExpr().add(y));
    }
    if (!last) {
      enc.hidden.push_back(std::move(ys));
      enc.active.push_back(std::move(zs));
      cur = std::move(next);
    }
  }
  return enc;
}

TimeSeries unit_profile(const TechnologyUnitModel& unit,
                        const TimeSeries& resource) {
  TimeSeries p(resource.size());
  for (std::size_t t = 0; t < resource.size(); ++t) {
    if (!unit.power_curve.covers(resource[t])) {
      throw std::invalid_argument(fmt::format(
          "technology '{}': resource value {} at step {} outside the power curve",
          unit.name, resource[t], t));
    }
    p[t] = unit.power_curve(resource[t]);
  }
  return p;
}

namespace {

// Annual energy of each candidate unit.
std::vector<double> unit_energies(const TechnologyUnitModel& unit,
                                  const TimeSeries& resource,
                                  const TimeGrid& grid) {
  if (static_cast<int>(resource.size()) != grid.horizon_steps) {
    throw std::invalid_argument(fmt::format(
        "technology '{}': resource series has {} values for a {}-step grid",
        unit.name, resource.size(), grid.horizon_steps));
  }
  TimeSeries p = unit_profile(unit, resource);
  double base = std::accumulate(p.begin(), p.end(), 0.0) * grid.dt_hours *
                grid.annualization();
  std::vector<double> derate = unit.unit_derate;
  if (derate.empty()) derate.assign(unit.max_units, 1.0);
  std::vector<double> e;
  for (double d : derate) e.push_back(base * d);
  return e;
}

}  // namespace

SubModelResult solve_technology_submodel(const TechnologyUnitModel& unit,
                                         const TimeSeries& resource,
                                         const TimeGrid& grid, double target,
                                         SubModelMethod method,
                                         const SolverConfig& config) {
  std::vector<double> e = unit_energies(unit, resource, grid);
  double max_energy = std::accumulate(e.begin(), e.end(), 0.0);
  if (target > max_energy) {
    throw std::invalid_argument(fmt::format(
        "technology '{}': target {} kWh/yr exceeds the maximum achievable "
        "output of {} kWh/yr",
        unit.name, target, max_energy));
  }
  const double unit_cost = unit.k_tech + unit.k_land * unit.unit_area();
  SubModelResult r;
  if (method == SubModelMethod::kAuto && unit.homogeneous()) {
    double each = e.empty() ? 0.0 : e.front();
    int n = 0;
    if (target > 0.0) {
      n = static_cast<int>(std::ceil(target / each));
      if (n > 0 && (n - 1) * each >= target) --n;
      if (n * each < target) ++n;
    }
    r.units = n;
    r.annual_energy = n * each;
  } else {
    MilpModel m;
    std::vector<VarId> buy;
    std::vector<VarId> op;
    LinearExpr produced;
    LinearExpr cost;
    for (std::size_t n = 0; n < e.size(); ++n) {
      buy.push_back(m.add_binary(fmt::format("buy{}", n)));
      op.push_back(m.add_continuous(fmt::format("op{}", n), 0.0, 1.0));
      m.add_constraint(LinearExpr().add(op[n]).add(buy[n], -1.0),
                       Sense::kLessEqual, 0.0, fmt::format("link{}", n));
      produced.add(op[n], e[n]);
      cost.add(buy[n], unit_cost);
    }
    m.add_constraint(produced, Sense::kGreaterEqual, target, "target");
    m.set_objective(ObjectiveSense::kMinimize, cost);
    MilpResult res = solve_milp(m, config);
    if (res.status != SolveStatus::kOptimal) {
      throw SolverError(fmt::format("technology '{}': sizing problem ended {}",
                                    unit.name, to_string(res.status)));
    }
    for (std::size_t n = 0; n < e.size(); ++n) {
      if (res.values[buy[n].index] > 0.5) {
        ++r.units;
        r.annual_energy += e[n];
      }
    }
  }
  r.cost = unit_cost * r.units;
  r.land = unit.unit_area() * r.units;
  return r;
}

double max_annual_energy(const TechnologyUnitModel& unit, const TimeSeries& resource,
                         const TimeGrid& grid) {
  std::vector<double> e = unit_energies(unit, resource, grid);
  return std::accumulate(e.begin(), e.end(), 0.0);
}

std::vector<double> fitting_targets(const TechnologyUnitModel& unit,
                                    const TimeSeries& resource, const TimeGrid& grid,
                                    const std::vector<double>& fractions) {
  std::vector<double> f = fractions;
  if (f.empty()) {
    for (int i = 1; i <= 10; ++i) f.push_back(0.095 * i);
  }
  double top = max_annual_energy(unit, resource, grid);
  std::vector<double> targets;
  for (double x : f) targets.push_back(x * top);
  return targets;
}

LineFit least_squares_line(const std::vector<double>& x,
                           const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  std::vector<double> pred;
  for (double xi : x) pred.push_back(f.slope * xi + f.intercept);
  f.r_squared = r_squared(y, pred);
  return f;
}

double r_squared(const std::vector<double>& observed,
                 const std::vector<double>& predicted) {
  double mean = std::accumulate(observed.begin(), observed.end(), 0.0) /
                static_cast<double>(observed.size());
  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    ss_res += (observed[i] - predicted[i]) * (observed[i] - predicted[i]);
    ss_tot += (observed[i] - mean) * (observed[i] - mean);
  }
  if (ss_tot == 0.0) return ss_res == 0.0 ? 1.0 : 0.0;
  return 1.0 - ss_res / ss_tot;
}

TechnologySurrogate fit_technology_surrogate(const TechnologyUnitModel& unit,
                                             const TimeSeries& resource,
                                             const TimeGrid& grid,
                                             const std::vector<double>& targets,
                                             const SolverConfig& config) {
  std::set<double> distinct(targets.begin(), targets.end());
  if (distinct.size() < 3) {
    throw std::invalid_argument(fmt::format(
        "technology '{}': fitting needs >= 3 distinct targets, got {}",
        unit.name, distinct.size()));
  }
  std::vector<double> energy;
  std::vector<double> cost;
  std::vector<double> land;
  for (double target : targets) {
    SubModelResult r =
        solve_technology_submodel(unit, resource, grid, target,
                                  SubModelMethod::kAuto, config);
    energy.push_back(r.annual_energy);
    cost.push_back(r.cost);
    land.push_back(r.land);
  }
  LineFit fc = least_squares_line(energy, cost);
  LineFit fl = least_squares_line(energy, land);

  TechnologySurrogate s;
  s.name = unit.name;
  s.cost_slope = fc.slope;
  // A negative fixed charge would pay the model to build; round-off from an
  // exact proportional fit lands here too.
  s.cost_intercept = std::max(0.0, fc.intercept);
  s.land_slope = fl.slope;
  s.land_intercept = std::max(0.0, fl.intercept);
  s.r_squared_cost = std::clamp(fc.r_squared, 0.0, 1.0);
  s.r_squared_land = std::clamp(fl.r_squared, 0.0, 1.0);
  TimeSeries p = unit_profile(unit, resource);
  double derate = 1.0;
  if (!unit.unit_derate.empty()) {
    derate = std::accumulate(unit.unit_derate.begin(), unit.unit_derate.end(), 0.0) /
             static_cast<double>(unit.unit_derate.size());
  }
  for (double& v : p) v *= derate;
  s.per_unit_profile = p;
  s.per_unit_energy = std::accumulate(p.begin(), p.end(), 0.0) * grid.dt_hours *
                      grid.annualization();
  s.max_units = unit.unit_derate.empty()
                    ? unit.max_units
                    : static_cast<int>(unit.unit_derate.size());
  return s;
}

}  // namespace ewnexus
