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

#ifndef EWNEXUS_SOLVER_HPP_
#define EWNEXUS_SOLVER_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ewnexus/milp.hpp"

namespace ewnexus {

enum class SolveStatus {
  kOptimal,
  kFeasible,  // limit reached with an incumbent
  kInfeasible,
  kUnbounded,
  kIterationLimit,  // limit reached without an incumbent
};

std::string to_string(SolveStatus status);

enum class Branching { kMostFractional, kPseudoCost };

struct SolverConfig {
  double feasibility_tol = 1e-7;
  double integrality_tol = 1e-6;
  double relative_gap = 1e-6;
  std::int64_t node_limit = 1'000'000;
  std::optional<double> time_limit_seconds;
  Branching branching = Branching::kMostFractional;
  std::uint64_t seed = 0;
  int workers = 1;
  // Per LP solve.
  std::int64_t iteration_limit = 1'000'000;

  // Throws std::invalid_argument on nonpositive tolerances or negative gap.
  void check() const;
};

// Raised when the simplex keeps stalling after the anti-cycling fallback or
// the basis cannot be repaired.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LpResult {
  SolveStatus status = SolveStatus::kIterationLimit;
  double objective = 0.0;  // in the model's sense, offset included
  std::vector<double> values;
  std::vector<double> row_activity;
  // Row duals y and reduced costs d = c - A^T y for the model's objective
  // sense. At an optimum of a minimization, y_i > 0 only where the row's lower
  // side is active and y_i < 0 only where its upper side is active.
  std::vector<double> row_duals;
  std::vector<double> reduced_costs;
  std::int64_t iterations = 0;
};

// Solves the continuous relaxation of `model` with the primal simplex.
LpResult solve_lp(const MilpModel& model, const SolverConfig& config = {});

struct MilpResult {
  SolveStatus status = SolveStatus::kIterationLimit;
  double objective = 0.0;   // incumbent, model sense
  double best_bound = 0.0;  // model sense
  std::vector<double> values;
  std::int64_t nodes = 0;
  std::int64_t lp_iterations = 0;
  double seconds = 0.0;
  int workers = 1;
  // Global dual bound after each processed node (model sense).
  std::vector<double> bound_trace;

  bool has_solution() const {
    return status == SolveStatus::kOptimal || status == SolveStatus::kFeasible;
  }
  double relative_gap() const;
};

// Best-bound branch and bound over binary and general-integer variables.
// Every integer variable must have finite bounds.
MilpResult solve_milp(const MilpModel& model, const SolverConfig& config = {});

}  // namespace ewnexus

#endif  // EWNEXUS_SOLVER_HPP_
