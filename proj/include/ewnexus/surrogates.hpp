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

#ifndef EWNEXUS_SURROGATES_HPP_
#define EWNEXUS_SURROGATES_HPP_

#include <string>
#include <vector>

#include "ewnexus/milp.hpp"
#include "ewnexus/model.hpp"
#include "ewnexus/solver.hpp"

namespace ewnexus {

// First-order expansion f(x) ~ value_at_point + gradient . (x - point).
struct TaylorSurrogate {
  std::vector<double> expansion_point;
  double value_at_point = 0.0;
  std::vector<double> gradient;

  double evaluate(const std::vector<double>& x) const;
  // value_at_point - gradient . point
  double constant() const;
};

// Cascaded recovery of three stages. Throws std::domain_error unless every
// input lies in [0,1).
double wr_sys_exact(double wr1, double wr2, double wr3);

TaylorSurrogate build_wr_sys_taylor(double wr1, double wr2, double wr3);

// Expansion of Q_p = WR_sys * Q_f over (WR_sys, Q_f) at
// (nominal_wr_sys, nominal_qp / nominal_wr_sys).
TaylorSurrogate build_qp_taylor(double nominal_qp, double nominal_wr_sys);

double relu_forward(const ReluNetwork& net, const std::vector<double>& input);

// Pre-activation bounds of every hidden node and of the outputs, by interval
// arithmetic from `input_bounds`.
struct NetworkBounds {
  std::vector<std::vector<Interval>> hidden;  // [layer][node]
  std::vector<Interval> output;
};
NetworkBounds propagate_bounds(const ReluNetwork& net,
                               const std::vector<Interval>& input_bounds);

struct ReluEncoding {
  std::vector<VarId> outputs;
  std::vector<std::vector<VarId>> hidden;  // post-activation y, [layer][node]
  std::vector<std::vector<VarId>> active;  // indicator z, [layer][node]
  NetworkBounds bounds;
  int fixed_indicators = 0;  // nodes whose sign is known from the bounds
};

// Adds the big-M encoding of `net` applied to `inputs` to `model`. Per hidden
// node: y >= a, y <= a + M-(1 - z), y <= M+ z, 0 <= y <= M+, with M+ and M-
// from interval propagation. Indicators of nodes that are provably always on
// or off keep their rows but get fixed bounds. Names are prefixed by
// `prefix`. Throws ModelError on non-finite input bounds.
ReluEncoding encode_relu_milp(MilpModel& model, const ReluNetwork& net,
                              const std::vector<LinearExpr>& inputs,
                              const std::vector<Interval>& input_bounds,
                              const std::string& prefix);

// Result of the single-technology sizing problem for one power target.
struct SubModelResult {
  int units = 0;
  double cost = 0.0;           // $/yr, technology plus land
  double land = 0.0;           // ha
  double annual_energy = 0.0;  // kWh/yr actually produced
};

enum class SubModelMethod { kAuto, kMilp };

// Per-unit output of `unit` driven by `resource`, in kW, before derating.
TimeSeries unit_profile(const TechnologyUnitModel& unit,
                        const TimeSeries& resource);

// Cheapest set of units whose annual energy reaches `target` (kWh/yr).
// Identical units use the closed form ceil(target / e_unit) unless
// `method` is kMilp. Throws std::invalid_argument if the target exceeds what
// all units together produce.
SubModelResult solve_technology_submodel(const TechnologyUnitModel& unit,
                                         const TimeSeries& resource,
                                         const TimeGrid& grid, double target,
                                         SubModelMethod method = SubModelMethod::kAuto,
                                         const SolverConfig& config = {});

// Solves the sizing problem per target and fits cost and land as lines in the
// achieved annual energy. Needs at least three distinct targets.
TechnologySurrogate fit_technology_surrogate(const TechnologyUnitModel& unit,
                                             const TimeSeries& resource,
                                             const TimeGrid& grid,
                                             const std::vector<double>& targets,
                                             const SolverConfig& config = {});

// Annual energy of all candidate units together (kWh/yr).
double max_annual_energy(const TechnologyUnitModel& unit, const TimeSeries& resource,
                         const TimeGrid& grid);

// Targets at the given fractions of max_annual_energy; the default spans
// 9.5% to 95% in ten steps.
std::vector<double> fitting_targets(const TechnologyUnitModel& unit,
                                    const TimeSeries& resource, const TimeGrid& grid,
                                    const std::vector<double>& fractions = {});

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
};
LineFit least_squares_line(const std::vector<double>& x,
                           const std::vector<double>& y);

// 1 - SS_res / SS_tot; 1 when both are zero.
double r_squared(const std::vector<double>& observed,
                 const std::vector<double>& predicted);

}  // namespace ewnexus

#endif  // EWNEXUS_SURROGATES_HPP_
