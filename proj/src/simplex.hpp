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

// Bounded-variable simplex over a dense explicit basis inverse.
//
// The LP is held as  min c'x  s.t.  A x - r = 0,  lo <= (x, r) <= up, where
// r holds one logical variable per row. Columns and rows are scaled by powers
// of two. The basis inverse is refactored through a sparse LU and then kept
// as a dense matrix updated by rank-one eta steps; everything that touches it
// goes through `ftran`, `refactor` and `pivot`, so a sparse factor can
// replace it without changing the iteration logic.

#ifndef EWNEXUS_SRC_SIMPLEX_HPP_
#define EWNEXUS_SRC_SIMPLEX_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <vector>

#include "ewnexus/milp.hpp"

namespace ewnexus::internal {

enum class VarStatus : std::uint8_t { kBasic, kAtLower, kAtUpper, kFree };

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kCutoff };

struct Basis {
  std::vector<VarStatus> status;
  std::vector<int> head;
};

class SimplexEngine {
 public:
  SimplexEngine(const MilpModel& model, double feasibility_tol,
                std::int64_t iteration_limit);

  int num_structurals() const { return n_; }
  int num_rows() const { return m_; }

  // Bounds in model units.
  void set_bounds(int col, double lower, double upper);
  double lower(int col) const { return lo_[col] * col_scale_[col]; }
  double upper(int col) const { return up_[col] * col_scale_[col]; }

  // Primal simplex (composite phase one) from the current basis.
  LpStatus solve_primal();
  // Dual simplex from the current basis; falls back to the primal simplex
  // when the basis is not dual feasible. Stops with kCutoff once the dual
  // objective exceeds `cutoff`, given in model units with the offset included
  // and negated for maximization.
  LpStatus solve_dual(double cutoff);

  Basis basis() const { return {status_, head_}; }
  void load_basis(const Basis& basis);

  // Results in model units and the model's objective sense.
  std::vector<double> values() const;
  double objective() const;
  std::vector<double> row_activity() const;
  std::vector<double> row_duals();
  std::vector<double> reduced_costs();

  std::int64_t iterations() const { return iterations_; }

 private:
  template <typename Fn>
  void for_column(int j, Fn&& fn) const;
  double dot_column(const Eigen::VectorXd& y, int j) const;
  void ftran(int j, Eigen::VectorXd& out) const;

  void init_slack_basis();
  void place_nonbasic(int j);
  void refactor();
  void repair_basis(const Eigen::MatrixXd& dense_basis);
  void compute_primal();
  void compute_duals();
  bool dual_feasible() const;
  void pivot(int r, int q, const Eigen::VectorXd& alpha);
  double scaled_objective() const;
  void check_iteration_limit() const;

  int m_ = 0;
  int n_ = 0;
  double tol_ = 1e-7;
  double dual_tol_ = 1e-7;
  std::int64_t iteration_limit_ = 0;
  std::int64_t iterations_ = 0;
  int refactor_every_ = 100;
  int updates_ = 0;
  bool maximize_ = false;
  double offset_ = 0.0;
  double cost_scale_ = 1.0;

  // Scaled structural columns (CSC) and scale factors.
  std::vector<int> col_start_;
  std::vector<int> row_index_;
  std::vector<double> value_;
  std::vector<double> col_scale_;  // size n + m; logicals carry 1/row_scale
  std::vector<double> row_scale_;

  std::vector<double> cost_;  // size n + m, scaled, minimization
  std::vector<double> lo_;
  std::vector<double> up_;

  std::vector<VarStatus> status_;
  std::vector<int> head_;
  std::vector<int> pos_;
  std::vector<double> x_;
  std::vector<double> d_;  // reduced costs, maintained by the dual simplex
  Eigen::MatrixXd binv_;
  bool primal_dirty_ = true;
  bool factor_valid_ = false;
};

}  // namespace ewnexus::internal

#endif  // EWNEXUS_SRC_SIMPLEX_HPP_
