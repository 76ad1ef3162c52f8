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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <queue>
#include <stdexcept>

#include "ewnexus/solver.hpp"
#include "simplex.hpp"

namespace ewnexus {

using internal::Basis;
using internal::LpStatus;
using internal::SimplexEngine;

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kFeasible: return "feasible";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kUnbounded: return "unbounded";
    case SolveStatus::kIterationLimit: return "iteration-limit";
  }
  return "unknown";
}

void SolverConfig::check() const {
  if (!(feasibility_tol > 0.0) || !(integrality_tol > 0.0)) {
    throw std::invalid_argument("solver tolerances must be positive");
  }
  if (!(relative_gap >= 0.0)) {
    throw std::invalid_argument("relative gap must be nonnegative");
  }
  if (node_limit <= 0 || iteration_limit <= 0) {
    throw std::invalid_argument("node and iteration limits must be positive");
  }
  if (time_limit_seconds && !(*time_limit_seconds > 0.0)) {
    throw std::invalid_argument("time limit must be positive");
  }
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
}

double MilpResult::relative_gap() const {
  if (!has_solution()) return kInf;
  return std::fabs(objective - best_bound) / std::max(1e-10, std::fabs(objective));
}

LpResult solve_lp(const MilpModel& model, const SolverConfig& config) {
  config.check();
  model.check_consistency();
  SimplexEngine engine(model, config.feasibility_tol, config.iteration_limit);
  LpResult result;
  switch (engine.solve_primal()) {
    case LpStatus::kOptimal: result.status = SolveStatus::kOptimal; break;
    case LpStatus::kInfeasible: result.status = SolveStatus::kInfeasible; break;
    case LpStatus::kUnbounded: result.status = SolveStatus::kUnbounded; break;
    case LpStatus::kCutoff: result.status = SolveStatus::kIterationLimit; break;
  }
  result.iterations = engine.iterations();
  if (result.status == SolveStatus::kOptimal) {
    result.values = engine.values();
    result.objective = model.objective_value(result.values);
    result.row_activity = engine.row_activity();
    result.row_duals = engine.row_duals();
    result.reduced_costs = engine.reduced_costs();
  }
  return result;
}

namespace {

struct BoundChange {
  int var;
  double lower;
  double upper;
};

struct Node {
  double bound;  // minimization sense
  std::int64_t seq;
  std::vector<BoundChange> changes;
  std::shared_ptr<const Basis> basis;
  int branch_var = -1;
  bool branch_up = false;
  double branch_distance = 0.0;
};

// Best bound first; among equal bounds the most recently created node, which
// keeps dives on the warm basis of their parent.
struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.seq < b.seq;
  }
};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class BranchAndBound {
 public:
  BranchAndBound(const MilpModel& model, const SolverConfig& config)
      : model_(model),
        config_(config),
        engine_(model, config.feasibility_tol, config.iteration_limit),
        sign_(model.objective().sense == ObjectiveSense::kMaximize ? -1.0 : 1.0) {
    for (int j = 0; j < model.num_variables(); ++j) {
      const Variable& v = model.variables()[j];
      if (!v.is_integral()) continue;
      if (!std::isfinite(v.lower) || !std::isfinite(v.upper)) {
        throw std::invalid_argument("integer variable '" + v.name +
                                    "' must have finite bounds");
      }
      double lo = std::ceil(v.lower - config.integrality_tol);
      double hi = std::floor(v.upper + config.integrality_tol);
      if (lo > hi) root_infeasible_ = true;
      int_vars_.push_back(j);
      root_lower_.push_back(lo);
      root_upper_.push_back(hi);
      engine_.set_bounds(j, lo, hi);
    }
    current_lower_ = root_lower_;
    current_upper_ = root_upper_;
    slot_.assign(model.num_variables(), -1);
    for (std::size_t k = 0; k < int_vars_.size(); ++k) slot_[int_vars_[k]] = static_cast<int>(k);
    pc_sum_[0].assign(int_vars_.size(), 0.0);
    pc_sum_[1].assign(int_vars_.size(), 0.0);
    pc_count_[0].assign(int_vars_.size(), 0);
    pc_count_[1].assign(int_vars_.size(), 0);
  }

  MilpResult run();

 private:
  double gap_tolerance() const {
    if (!std::isfinite(incumbent_)) return 1e-9;
    return std::max(config_.relative_gap * std::fabs(incumbent_), 1e-9);
  }
  void apply_node_bounds(const Node& node);
  int select_branch_variable(const std::vector<double>& x, double* frac) const;
  void record_pseudo_cost(const Node& node, double child_obj);
  bool out_of_time() const {
    if (!config_.time_limit_seconds) return false;
    std::chrono::duration<double> el = std::chrono::steady_clock::now() - start_;
    return el.count() >= *config_.time_limit_seconds;
  }

  const MilpModel& model_;
  const SolverConfig& config_;
  SimplexEngine engine_;
  double sign_;
  bool root_infeasible_ = false;
  std::vector<int> int_vars_;
  std::vector<int> slot_;
  std::vector<double> root_lower_, root_upper_;
  std::vector<double> current_lower_, current_upper_;
  std::vector<double> pc_sum_[2];
  std::vector<int> pc_count_[2];
  double incumbent_ = kInf;
  std::vector<double> incumbent_values_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void BranchAndBound::apply_node_bounds(const Node& node) {
  std::vector<double> lo = root_lower_;
  std::vector<double> hi = root_upper_;
  for (const BoundChange& c : node.changes) {
    int k = slot_[c.var];
    lo[k] = std::max(lo[k], c.lower);
    hi[k] = std::min(hi[k], c.upper);
  }
  for (std::size_t k = 0; k < int_vars_.size(); ++k) {
    if (lo[k] != current_lower_[k] || hi[k] != current_upper_[k]) {
      engine_.set_bounds(int_vars_[k], lo[k], hi[k]);
      current_lower_[k] = lo[k];
      current_upper_[k] = hi[k];
    }
  }
}

int BranchAndBound::select_branch_variable(const std::vector<double>& x,
                                           double* frac) const {
  int best = -1;
  double best_score = -1.0;
  double avg[2] = {1.0, 1.0};
  if (config_.branching == Branching::kPseudoCost) {
    for (int dir = 0; dir < 2; ++dir) {
      double s = 0.0;
      int c = 0;
      for (std::size_t k = 0; k < int_vars_.size(); ++k) {
        if (pc_count_[dir][k] > 0) {
          s += pc_sum_[dir][k] / pc_count_[dir][k];
          ++c;
        }
      }
      if (c > 0 && s > 0.0) avg[dir] = s / c;
    }
  }
  for (std::size_t k = 0; k < int_vars_.size(); ++k) {
    int j = int_vars_[k];
    double f = x[j] - std::floor(x[j]);
    double dist = std::min(f, 1.0 - f);
    if (dist <= config_.integrality_tol) continue;
    double score;
    if (config_.branching == Branching::kPseudoCost) {
      double down = pc_count_[0][k] ? pc_sum_[0][k] / pc_count_[0][k] : avg[0];
      double up = pc_count_[1][k] ? pc_sum_[1][k] / pc_count_[1][k] : avg[1];
      score = std::max(down * f, 1e-6) * std::max(up * (1.0 - f), 1e-6);
      // Seeded jitter separates exact ties deterministically.
      score *= 1.0 + 1e-9 * static_cast<double>(splitmix64(config_.seed ^ static_cast<std::uint64_t>(j)) >> 11) / 9007199254740992.0;
    } else {
      score = dist;
    }
    if (score > best_score) {
      best_score = score;
      best = j;
      *frac = f;
    }
  }
  return best;
}

void BranchAndBound::record_pseudo_cost(const Node& node, double child_obj) {
  if (node.branch_var < 0 || node.branch_distance <= 0.0) return;
  int k = slot_[node.branch_var];
  int dir = node.branch_up ? 1 : 0;
  double gain = std::max(0.0, child_obj - node.bound) / node.branch_distance;
  pc_sum_[dir][k] += gain;
  pc_count_[dir][k] += 1;
}

MilpResult BranchAndBound::run() {
  MilpResult result;
  result.workers = 1;
  if (root_infeasible_) {
    result.status = SolveStatus::kInfeasible;
    return result;
  }
  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  std::int64_t seq = 0;
  open.push(Node{-kInf, seq++, {}, nullptr});
  std::shared_ptr<const Basis> engine_basis;  // basis the engine currently holds
  bool limit_hit = false;
  bool unbounded = false;

  while (!open.empty()) {
    if (result.nodes >= config_.node_limit || out_of_time()) {
      limit_hit = true;
      break;
    }
    Node node = open.top();
    open.pop();
    if (node.bound >= incumbent_ - gap_tolerance()) continue;
    ++result.nodes;

    apply_node_bounds(node);
    LpStatus status;
    if (!node.basis) {
      status = engine_.solve_primal();
    } else {
      if (node.basis != engine_basis) engine_.load_basis(*node.basis);
      double cutoff = std::isfinite(incumbent_) ? incumbent_ - gap_tolerance() : kInf;
      status = engine_.solve_dual(cutoff);
    }
    engine_basis.reset();

    if (status == LpStatus::kUnbounded) {
      unbounded = true;
      break;
    }
    if (status == LpStatus::kOptimal) {
      double obj = sign_ * engine_.objective();
      record_pseudo_cost(node, obj);
      if (obj < incumbent_ - gap_tolerance()) {
        std::vector<double> x = engine_.values();
        double frac = 0.0;
        int var = select_branch_variable(x, &frac);
        if (var < 0) {
          for (int j : int_vars_) x[j] = std::round(x[j]);
          incumbent_ = sign_ * model_.objective_value(x);
          incumbent_values_ = std::move(x);
        } else {
          auto basis = std::make_shared<const Basis>(engine_.basis());
          engine_basis = basis;
          double down_hi = std::floor(x[var]);
          Node down{obj, seq++, node.changes, basis, var, false, frac};
          down.changes.push_back({var, -kInf, down_hi});
          Node up{obj, seq++, std::move(node.changes), basis, var, true, 1.0 - frac};
          up.changes.push_back({var, down_hi + 1.0, kInf});
          open.push(std::move(down));
          open.push(std::move(up));
        }
      }
    }
    double bound = open.empty() ? incumbent_ : std::min(open.top().bound, incumbent_);
    result.bound_trace.push_back(sign_ * bound);
    if (std::isfinite(incumbent_) && incumbent_ - bound <= gap_tolerance()) {
      // Remaining nodes cannot improve beyond the gap.
      while (!open.empty()) open.pop();
    }
  }

  result.lp_iterations = engine_.iterations();
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  if (unbounded) {
    result.status = SolveStatus::kUnbounded;
    return result;
  }
  double bound = incumbent_;
  if (!open.empty()) bound = std::min(bound, open.top().bound);
  if (std::isfinite(incumbent_)) {
    result.status = limit_hit ? SolveStatus::kFeasible : SolveStatus::kOptimal;
    result.objective = sign_ * incumbent_;
    result.values = std::move(incumbent_values_);
  } else {
    result.status = limit_hit ? SolveStatus::kIterationLimit : SolveStatus::kInfeasible;
  }
  result.best_bound = sign_ * bound;
  return result;
}

}  // namespace

MilpResult solve_milp(const MilpModel& model, const SolverConfig& config) {
  config.check();
  model.check_consistency();
  BranchAndBound bnb(model, config);
  return bnb.run();
}

}  // namespace ewnexus
