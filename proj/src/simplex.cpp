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

#include "simplex.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>

#include "ewnexus/solver.hpp"

namespace ewnexus::internal {
namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kDegenerateStep = 1e-11;
constexpr int kDegenerateStreakForBland = 50;

double pow2_round(double v) {
  if (!(v > 0.0) || !std::isfinite(v)) return 1.0;
  return std::ldexp(1.0, static_cast<int>(std::lround(std::log2(v))));
}

}  // namespace

SimplexEngine::SimplexEngine(const MilpModel& model, double feasibility_tol,
                             std::int64_t iteration_limit)
    : m_(model.num_constraints()),
      n_(model.num_variables()),
      tol_(feasibility_tol),
      dual_tol_(feasibility_tol),
      iteration_limit_(iteration_limit) {
  const int total = n_ + m_;
  refactor_every_ = std::max(100, m_);

  // Row-wise triplets first so scaling can sweep rows and columns.
  std::vector<std::vector<std::pair<int, double>>> cols(n_);
  for (int i = 0; i < m_; ++i) {
    for (const Term& t : model.constraints()[i].terms) {
      cols[t.var.index].push_back({i, t.coef});
    }
  }
  row_scale_.assign(m_, 1.0);
  std::vector<double> cscale(n_, 1.0);
  for (int pass = 0; pass < 4; ++pass) {
    std::vector<double> rmax(m_, 0.0), rmin(m_, kInf);
    for (int j = 0; j < n_; ++j) {
      for (auto [i, a] : cols[j]) {
        double v = std::fabs(a) * row_scale_[i] * cscale[j];
        rmax[i] = std::max(rmax[i], v);
        rmin[i] = std::min(rmin[i], v);
      }
    }
    for (int i = 0; i < m_; ++i) {
      if (rmax[i] > 0.0) row_scale_[i] *= pow2_round(1.0 / std::sqrt(rmax[i] * rmin[i]));
    }
    for (int j = 0; j < n_; ++j) {
      double cmax = 0.0, cmin = kInf;
      for (auto [i, a] : cols[j]) {
        double v = std::fabs(a) * row_scale_[i] * cscale[j];
        cmax = std::max(cmax, v);
        cmin = std::min(cmin, v);
      }
      if (cmax > 0.0) cscale[j] *= pow2_round(1.0 / std::sqrt(cmax * cmin));
    }
  }

  col_start_.assign(n_ + 1, 0);
  for (int j = 0; j < n_; ++j) {
    col_start_[j + 1] = col_start_[j] + static_cast<int>(cols[j].size());
  }
  row_index_.reserve(col_start_[n_]);
  value_.reserve(col_start_[n_]);
  for (int j = 0; j < n_; ++j) {
    for (auto [i, a] : cols[j]) {
      row_index_.push_back(i);
      value_.push_back(a * row_scale_[i] * cscale[j]);
    }
  }

  col_scale_.resize(total);
  for (int j = 0; j < n_; ++j) col_scale_[j] = cscale[j];
  for (int i = 0; i < m_; ++i) col_scale_[n_ + i] = 1.0 / row_scale_[i];

  const Objective& obj = model.objective();
  maximize_ = obj.sense == ObjectiveSense::kMaximize;
  offset_ = obj.offset;
  cost_.assign(total, 0.0);
  for (const Term& t : obj.terms) {
    cost_[t.var.index] += (maximize_ ? -t.coef : t.coef) * cscale[t.var.index];
  }
  double cmax = 0.0;
  for (int j = 0; j < n_; ++j) cmax = std::max(cmax, std::fabs(cost_[j]));
  cost_scale_ = cmax > 0.0 ? pow2_round(1.0 / cmax) : 1.0;
  for (double& c : cost_) c *= cost_scale_;

  lo_.resize(total);
  up_.resize(total);
  for (int j = 0; j < n_; ++j) {
    const Variable& v = model.variables()[j];
    lo_[j] = v.lower / cscale[j];
    up_[j] = v.upper / cscale[j];
  }
  for (int i = 0; i < m_; ++i) {
    const Constraint& c = model.constraints()[i];
    double rs = row_scale_[i];
    switch (c.sense) {
      case Sense::kLessEqual: lo_[n_ + i] = -kInf; up_[n_ + i] = c.rhs * rs; break;
      case Sense::kEqual: lo_[n_ + i] = up_[n_ + i] = c.rhs * rs; break;
      case Sense::kGreaterEqual: lo_[n_ + i] = c.rhs * rs; up_[n_ + i] = kInf; break;
    }
  }
  init_slack_basis();
}

template <typename Fn>
void SimplexEngine::for_column(int j, Fn&& fn) const {
  if (j < n_) {
    for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) fn(row_index_[k], value_[k]);
  } else {
    fn(j - n_, -1.0);
  }
}

double SimplexEngine::dot_column(const Eigen::VectorXd& y, int j) const {
  double s = 0.0;
  for_column(j, [&](int i, double a) { s += y[i] * a; });
  return s;
}

void SimplexEngine::ftran(int j, Eigen::VectorXd& out) const {
  out.setZero(m_);
  for_column(j, [&](int i, double a) { out.noalias() += a * binv_.col(i); });
}

void SimplexEngine::place_nonbasic(int j) {
  if (std::isfinite(lo_[j])) {
    status_[j] = VarStatus::kAtLower;
    x_[j] = lo_[j];
  } else if (std::isfinite(up_[j])) {
    status_[j] = VarStatus::kAtUpper;
    x_[j] = up_[j];
  } else {
    status_[j] = VarStatus::kFree;
    x_[j] = 0.0;
  }
}

void SimplexEngine::init_slack_basis() {
  const int total = n_ + m_;
  status_.assign(total, VarStatus::kBasic);
  x_.assign(total, 0.0);
  d_.assign(total, 0.0);
  pos_.assign(total, -1);
  head_.resize(m_);
  for (int j = 0; j < n_; ++j) place_nonbasic(j);
  for (int i = 0; i < m_; ++i) {
    head_[i] = n_ + i;
    pos_[n_ + i] = i;
  }
  binv_ = -Eigen::MatrixXd::Identity(m_, m_);
  updates_ = 0;
  factor_valid_ = true;
  primal_dirty_ = true;
}

void SimplexEngine::set_bounds(int col, double lower, double upper) {
  lo_[col] = lower / col_scale_[col];
  up_[col] = upper / col_scale_[col];
  if (status_[col] != VarStatus::kBasic) {
    double before = x_[col];
    if (status_[col] == VarStatus::kAtLower && !std::isfinite(lo_[col])) {
      place_nonbasic(col);
    } else if (status_[col] == VarStatus::kAtUpper && !std::isfinite(up_[col])) {
      place_nonbasic(col);
    } else if (status_[col] == VarStatus::kFree) {
      place_nonbasic(col);
    }
    if (status_[col] == VarStatus::kAtLower) x_[col] = lo_[col];
    if (status_[col] == VarStatus::kAtUpper) x_[col] = up_[col];
    if (x_[col] != before) primal_dirty_ = true;
  }
}

void SimplexEngine::load_basis(const Basis& basis) {
  status_ = basis.status;
  head_ = basis.head;
  std::fill(pos_.begin(), pos_.end(), -1);
  for (int i = 0; i < m_; ++i) pos_[head_[i]] = i;
  for (int j = 0; j < n_ + m_; ++j) {
    switch (status_[j]) {
      case VarStatus::kBasic: break;
      case VarStatus::kAtLower:
        if (std::isfinite(lo_[j])) x_[j] = lo_[j]; else place_nonbasic(j);
        break;
      case VarStatus::kAtUpper:
        if (std::isfinite(up_[j])) x_[j] = up_[j]; else place_nonbasic(j);
        break;
      case VarStatus::kFree: place_nonbasic(j); break;
    }
  }
  factor_valid_ = false;
  primal_dirty_ = true;
}

void SimplexEngine::refactor() {
  if (m_ == 0) {
    binv_.resize(0, 0);
    updates_ = 0;
    factor_valid_ = true;
    return;
  }
  for (int attempt = 0; attempt < 3; ++attempt) {
    std::vector<Eigen::Triplet<double>> trips;
    for (int k = 0; k < m_; ++k) {
      for_column(head_[k], [&](int i, double a) { trips.emplace_back(i, k, a); });
    }
    Eigen::SparseMatrix<double> basis_matrix(m_, m_);
    basis_matrix.setFromTriplets(trips.begin(), trips.end());
    basis_matrix.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(basis_matrix);
    bool ok = lu.info() == Eigen::Success;
    if (ok) {
      Eigen::MatrixXd ident = Eigen::MatrixXd::Identity(m_, m_);
      binv_ = lu.solve(ident);
      // Reject near-singular factors: B * Binv must reproduce the identity.
      double err = ((basis_matrix * binv_) - ident).cwiseAbs().maxCoeff();
      ok = std::isfinite(err) && err < 1e-6;
    }
    if (ok) {
      updates_ = 0;
      factor_valid_ = true;
      primal_dirty_ = true;
      return;
    }
    repair_basis(Eigen::MatrixXd(basis_matrix));
  }
  throw SolverError("simplex basis could not be refactored");
}

// Keeps a maximal independent subset of the basic columns (logicals first)
// and fills the remaining positions with logicals of uncovered rows.
void SimplexEngine::repair_basis(const Eigen::MatrixXd& dense_basis) {
  Eigen::MatrixXd work = dense_basis;
  std::vector<int> order(m_);
  for (int k = 0; k < m_; ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return (head_[a] >= n_) > (head_[b] >= n_);
  });
  std::vector<bool> row_used(m_, false);
  std::vector<bool> keep(m_, false);
  for (int oi = 0; oi < m_; ++oi) {
    int k = order[oi];
    int p = -1;
    double best = 1e-9;
    for (int i = 0; i < m_; ++i) {
      if (!row_used[i] && std::fabs(work(i, k)) > best) {
        best = std::fabs(work(i, k));
        p = i;
      }
    }
    if (p < 0) continue;
    keep[k] = true;
    row_used[p] = true;
    for (int oj = oi + 1; oj < m_; ++oj) {
      int l = order[oj];
      double f = work(p, l) / work(p, k);
      if (f != 0.0) work.col(l) -= f * work.col(k);
    }
  }
  int next_row = 0;
  for (int k = 0; k < m_; ++k) {
    if (keep[k]) continue;
    while (row_used[next_row]) ++next_row;
    row_used[next_row] = true;
    int out = head_[k];
    int in = n_ + next_row;
    pos_[out] = -1;
    place_nonbasic(out);
    head_[k] = in;
    pos_[in] = k;
    status_[in] = VarStatus::kBasic;
  }
}

void SimplexEngine::compute_primal() {
  if (m_ > 0) {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m_);
    for (int j = 0; j < n_ + m_; ++j) {
      if (status_[j] == VarStatus::kBasic || x_[j] == 0.0) continue;
      double xj = x_[j];
      for_column(j, [&](int i, double a) { rhs[i] -= a * xj; });
    }
    Eigen::VectorXd xb = binv_ * rhs;
    for (int i = 0; i < m_; ++i) x_[head_[i]] = xb[i];
  }
  primal_dirty_ = false;
}

void SimplexEngine::compute_duals() {
  Eigen::VectorXd cb(m_);
  for (int i = 0; i < m_; ++i) cb[i] = cost_[head_[i]];
  Eigen::VectorXd y = binv_.transpose() * cb;
  for (int j = 0; j < n_ + m_; ++j) {
    d_[j] = status_[j] == VarStatus::kBasic ? 0.0 : cost_[j] - dot_column(y, j);
  }
}

bool SimplexEngine::dual_feasible() const {
  for (int j = 0; j < n_ + m_; ++j) {
    if (lo_[j] == up_[j]) continue;
    switch (status_[j]) {
      case VarStatus::kBasic: break;
      case VarStatus::kAtLower: if (d_[j] < -dual_tol_) return false; break;
      case VarStatus::kAtUpper: if (d_[j] > dual_tol_) return false; break;
      case VarStatus::kFree: if (std::fabs(d_[j]) > dual_tol_) return false; break;
    }
  }
  return true;
}

void SimplexEngine::pivot(int r, int q, const Eigen::VectorXd& alpha) {
  Eigen::RowVectorXd pr = binv_.row(r) / alpha[r];
  binv_.noalias() -= alpha * pr;
  binv_.row(r) = pr;
  int leaving = head_[r];
  pos_[leaving] = -1;
  head_[r] = q;
  pos_[q] = r;
  status_[q] = VarStatus::kBasic;
  ++updates_;
}

double SimplexEngine::scaled_objective() const {
  double s = 0.0;
  for (int j = 0; j < n_; ++j) s += cost_[j] * x_[j];
  return s;
}

void SimplexEngine::check_iteration_limit() const {
  if (iterations_ >= iteration_limit_) {
    throw SolverError("simplex iteration limit reached");
  }
}

LpStatus SimplexEngine::solve_primal() {
  if (!factor_valid_) refactor();
  if (primal_dirty_) compute_primal();
  Eigen::VectorXd cb(m_), y(m_), alpha(m_);
  int degenerate = 0;
  bool bland = false;
  int verify_rounds = 0;
  for (;;) {
    check_iteration_limit();
    if (updates_ >= refactor_every_) {
      refactor();
      compute_primal();
    }
    bool phase1 = false;
    for (int i = 0; i < m_; ++i) {
      int j = head_[i];
      if (x_[j] < lo_[j] - tol_) {
        cb[i] = -1.0;
        phase1 = true;
      } else if (x_[j] > up_[j] + tol_) {
        cb[i] = 1.0;
        phase1 = true;
      } else {
        cb[i] = 0.0;
      }
    }
    if (!phase1) {
      for (int i = 0; i < m_; ++i) cb[i] = cost_[head_[i]];
    }
    y.noalias() = binv_.transpose() * cb;

    int q = -1;
    double best = 0.0;
    double dq = 0.0;
    for (int j = 0; j < n_ + m_; ++j) {
      VarStatus s = status_[j];
      if (s == VarStatus::kBasic || lo_[j] == up_[j]) continue;
      double dj = (phase1 ? 0.0 : cost_[j]) - dot_column(y, j);
      bool eligible = (s == VarStatus::kAtLower && dj < -dual_tol_) ||
                      (s == VarStatus::kAtUpper && dj > dual_tol_) ||
                      (s == VarStatus::kFree && std::fabs(dj) > dual_tol_);
      if (!eligible) continue;
      if (bland) {
        q = j;
        dq = dj;
        break;
      }
      if (std::fabs(dj) > best) {
        best = std::fabs(dj);
        q = j;
        dq = dj;
      }
    }

    if (q < 0) {
      if (updates_ > 0 && verify_rounds < 3) {
        // Confirm with a fresh factorization before declaring the result.
        ++verify_rounds;
        refactor();
        compute_primal();
        continue;
      }
      return phase1 ? LpStatus::kInfeasible : LpStatus::kOptimal;
    }

    const double dir = dq < 0.0 ? 1.0 : -1.0;
    ftran(q, alpha);

    // Harris two-pass ratio test; in phase one an infeasible basic may move
    // up to the bound it violates.
    auto bound_distance = [&](int i, double rate, bool relaxed,
                              double& dist) -> bool {
      int j = head_[i];
      double xv = x_[j];
      double pad = relaxed ? tol_ : 0.0;
      if (phase1 && xv < lo_[j] - tol_) {
        if (rate <= 0.0) return false;
        dist = lo_[j] - xv + pad;
        return true;
      }
      if (phase1 && xv > up_[j] + tol_) {
        if (rate >= 0.0) return false;
        dist = xv - up_[j] + pad;
        return true;
      }
      if (rate < 0.0 && std::isfinite(lo_[j])) {
        dist = std::max(0.0, xv - lo_[j]) + pad;
        return true;
      }
      if (rate > 0.0 && std::isfinite(up_[j])) {
        dist = std::max(0.0, up_[j] - xv) + pad;
        return true;
      }
      return false;
    };

    double theta_max = kInf;
    for (int i = 0; i < m_; ++i) {
      double rate = -dir * alpha[i];
      if (std::fabs(alpha[i]) <= kPivotTol) continue;
      double dist;
      if (bound_distance(i, rate, true, dist)) {
        theta_max = std::min(theta_max, dist / std::fabs(rate));
      }
    }
    int r = -1;
    double theta = kInf;
    double best_pivot = 0.0;
    if (std::isfinite(theta_max)) {
      for (int i = 0; i < m_; ++i) {
        double rate = -dir * alpha[i];
        if (std::fabs(alpha[i]) <= kPivotTol) continue;
        double dist;
        if (!bound_distance(i, rate, false, dist)) continue;
        double ratio = dist / std::fabs(rate);
        if (ratio > theta_max) continue;
        bool take;
        if (bland) {
          take = r < 0 || ratio < theta - 1e-12 ||
                 (ratio <= theta + 1e-12 && head_[i] < head_[r]);
        } else {
          take = std::fabs(alpha[i]) > best_pivot;
        }
        if (take) {
          r = i;
          theta = ratio;
          best_pivot = std::fabs(alpha[i]);
        }
      }
    }

    double range = up_[q] - lo_[q];
    if (r < 0 && !std::isfinite(range)) {
      if (phase1) throw SolverError("phase one ray without a blocking row");
      return LpStatus::kUnbounded;
    }
    ++iterations_;
    if (std::isfinite(range) && range <= theta) {
      // Bound flip; the basis is unchanged.
      double step = dir * range;
      for (int i = 0; i < m_; ++i) x_[head_[i]] -= step * alpha[i];
      if (status_[q] == VarStatus::kAtLower) {
        status_[q] = VarStatus::kAtUpper;
        x_[q] = up_[q];
      } else {
        status_[q] = VarStatus::kAtLower;
        x_[q] = lo_[q];
      }
      degenerate = 0;
      bland = false;
      continue;
    }

    double step = dir * theta;
    for (int i = 0; i < m_; ++i) x_[head_[i]] -= step * alpha[i];
    x_[q] += step;
    int leaving = head_[r];
    double rate = -dir * alpha[r];
    bool to_lower;
    if (phase1 && x_[leaving] + step * alpha[r] < lo_[leaving] - tol_) {
      to_lower = true;
    } else if (phase1 && x_[leaving] + step * alpha[r] > up_[leaving] + tol_) {
      to_lower = false;
    } else {
      to_lower = rate < 0.0;
    }
    pivot(r, q, alpha);
    if (to_lower) {
      status_[leaving] = VarStatus::kAtLower;
      x_[leaving] = lo_[leaving];
    } else {
      status_[leaving] = VarStatus::kAtUpper;
      x_[leaving] = up_[leaving];
    }
    if (lo_[leaving] == up_[leaving]) status_[leaving] = VarStatus::kAtLower;

    if (theta < kDegenerateStep) {
      if (++degenerate > kDegenerateStreakForBland) bland = true;
    } else {
      degenerate = 0;
      bland = false;
    }
  }
}

LpStatus SimplexEngine::solve_dual(double cutoff) {
  if (!factor_valid_) refactor();
  if (primal_dirty_) compute_primal();
  compute_duals();
  if (!dual_feasible()) return solve_primal();

  const double min_sense_offset = maximize_ ? -offset_ : offset_;
  const double scaled_cutoff =
      std::isfinite(cutoff) ? (cutoff - min_sense_offset) * cost_scale_ : kInf;
  Eigen::VectorXd alpha(m_);
  Eigen::RowVectorXd rho(m_);
  std::vector<double> arow(n_ + m_, 0.0);
  int verify_rounds = 0;
  int degenerate = 0;
  bool bland = false;
  for (;;) {
    check_iteration_limit();
    if (updates_ >= refactor_every_) {
      refactor();
      compute_primal();
      compute_duals();
      if (!dual_feasible()) return solve_primal();
    }
    if (std::isfinite(scaled_cutoff)) {
      double obj = scaled_objective();
      if (obj > scaled_cutoff + tol_ * std::max(1.0, std::fabs(obj))) {
        return LpStatus::kCutoff;
      }
    }

    int r = -1;
    double worst = 0.0;
    for (int i = 0; i < m_; ++i) {
      int j = head_[i];
      double viol = 0.0;
      if (x_[j] < lo_[j] - tol_) viol = lo_[j] - x_[j];
      else if (x_[j] > up_[j] + tol_) viol = x_[j] - up_[j];
      if (viol <= 0.0) continue;
      if (bland ? (r < 0 || j < head_[r]) : viol > worst) {
        worst = viol;
        r = i;
      }
    }
    if (r < 0) {
      if (updates_ > 0 && verify_rounds < 3) {
        ++verify_rounds;
        refactor();
        compute_primal();
        compute_duals();
        if (!dual_feasible()) return solve_primal();
        continue;
      }
      return LpStatus::kOptimal;
    }

    const int leaving = head_[r];
    const bool to_lower = x_[leaving] < lo_[leaving];
    rho = binv_.row(r);
    Eigen::VectorXd rho_col = rho.transpose();

    auto eligible = [&](int j, double a) {
      VarStatus s = status_[j];
      if (s == VarStatus::kFree) return true;
      bool at_lower = s == VarStatus::kAtLower;
      return to_lower ? (at_lower ? a < 0.0 : a > 0.0)
                      : (at_lower ? a > 0.0 : a < 0.0);
    };
    auto slack_of = [&](int j) {
      switch (status_[j]) {
        case VarStatus::kAtLower: return std::max(d_[j], 0.0);
        case VarStatus::kAtUpper: return std::max(-d_[j], 0.0);
        default: return std::fabs(d_[j]);
      }
    };

    double theta_max = kInf;
    for (int j = 0; j < n_ + m_; ++j) {
      arow[j] = 0.0;
      if (status_[j] == VarStatus::kBasic || lo_[j] == up_[j]) continue;
      double a = dot_column(rho_col, j);
      arow[j] = a;
      if (std::fabs(a) <= kPivotTol || !eligible(j, a)) continue;
      theta_max = std::min(theta_max, (slack_of(j) + dual_tol_) / std::fabs(a));
    }
    if (!std::isfinite(theta_max)) return LpStatus::kInfeasible;

    int q = -1;
    double best_pivot = 0.0;
    double best_ratio = kInf;
    for (int j = 0; j < n_ + m_; ++j) {
      double a = arow[j];
      if (a == 0.0 || std::fabs(a) <= kPivotTol) continue;
      if (status_[j] == VarStatus::kBasic || lo_[j] == up_[j]) continue;
      if (!eligible(j, a)) continue;
      double ratio = slack_of(j) / std::fabs(a);
      if (ratio > theta_max) continue;
      bool take = bland ? (q < 0 || ratio < best_ratio - 1e-12 ||
                           (ratio <= best_ratio + 1e-12 && j < q))
                        : std::fabs(a) > best_pivot;
      if (take) {
        q = j;
        best_pivot = std::fabs(a);
        best_ratio = ratio;
      }
    }
    if (q < 0) return LpStatus::kInfeasible;

    ftran(q, alpha);
    const double arq = alpha[r];
    if (std::fabs(arq - arow[q]) > 1e-6 * std::max(1.0, std::fabs(arq))) {
      // Row and column disagree: the eta updates have drifted.
      refactor();
      compute_primal();
      compute_duals();
      if (!dual_feasible()) return solve_primal();
      continue;
    }
    ++iterations_;
    const double theta_d = d_[q] / arq;
    for (int j = 0; j < n_ + m_; ++j) {
      if (arow[j] != 0.0) d_[j] -= theta_d * arow[j];
    }
    const double target = to_lower ? lo_[leaving] : up_[leaving];
    const double t = (x_[leaving] - target) / arq;
    for (int i = 0; i < m_; ++i) x_[head_[i]] -= t * alpha[i];
    x_[q] += t;
    pivot(r, q, alpha);
    d_[q] = 0.0;
    d_[leaving] = -theta_d;
    status_[leaving] = to_lower ? VarStatus::kAtLower : VarStatus::kAtUpper;
    x_[leaving] = target;
    if (lo_[leaving] == up_[leaving]) status_[leaving] = VarStatus::kAtLower;

    if (std::fabs(theta_d) < kDegenerateStep) {
      if (++degenerate > kDegenerateStreakForBland) bland = true;
    } else {
      degenerate = 0;
      bland = false;
    }
  }
}

std::vector<double> SimplexEngine::values() const {
  std::vector<double> out(n_);
  for (int j = 0; j < n_; ++j) out[j] = x_[j] * col_scale_[j];
  return out;
}

double SimplexEngine::objective() const {
  double s = 0.0;
  for (int j = 0; j < n_; ++j) s += cost_[j] * x_[j];
  s /= cost_scale_;
  return (maximize_ ? -s : s) + offset_;
}

std::vector<double> SimplexEngine::row_activity() const {
  std::vector<double> out(m_, 0.0);
  for (int j = 0; j < n_; ++j) {
    double xj = x_[j];
    for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
      out[row_index_[k]] += value_[k] * xj;
    }
  }
  for (int i = 0; i < m_; ++i) out[i] /= row_scale_[i];
  return out;
}

std::vector<double> SimplexEngine::row_duals() {
  Eigen::VectorXd cb(m_);
  for (int i = 0; i < m_; ++i) cb[i] = cost_[head_[i]];
  Eigen::VectorXd y = binv_.transpose() * cb;
  std::vector<double> out(m_);
  const double sign = maximize_ ? -1.0 : 1.0;
  for (int i = 0; i < m_; ++i) out[i] = sign * y[i] * row_scale_[i] / cost_scale_;
  return out;
}

std::vector<double> SimplexEngine::reduced_costs() {
  compute_duals();
  std::vector<double> out(n_);
  const double sign = maximize_ ? -1.0 : 1.0;
  for (int j = 0; j < n_; ++j) out[j] = sign * d_[j] / (cost_scale_ * col_scale_[j]);
  return out;
}

}  // namespace ewnexus::internal
