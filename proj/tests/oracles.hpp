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

// Test-only oracles. Nothing here calls into the solver, so the checks they
// back stay independent of the simplex and branch-and-bound code paths.

#ifndef EWNEXUS_TESTS_ORACLES_HPP_
#define EWNEXUS_TESTS_ORACLES_HPP_

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ewnexus/milp.hpp"

namespace ewnexus::testing {

// min c^T x  s.t.  A x <= b,  x >= 0.
struct DenseLp {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
};

inline MilpModel to_model(const DenseLp& lp) {
  MilpModel model;
  std::vector<VarId> x;
  for (int j = 0; j < lp.c.size(); ++j) x.push_back(model.add_continuous("x" + std::to_string(j)));
  for (int i = 0; i < lp.a.rows(); ++i) {
    LinearExpr e;
    for (int j = 0; j < lp.a.cols(); ++j) e.add(x[j], lp.a(i, j));
    model.add_constraint(e, Sense::kLessEqual, lp.b[i], "r" + std::to_string(i));
  }
  LinearExpr obj;
  for (int j = 0; j < lp.c.size(); ++j) obj.add(x[j], lp.c[j]);
  model.set_objective(ObjectiveSense::kMinimize, obj);
  return model;
}

// Random bounded LP: the last row caps the sum of all variables, and b >= 0
// keeps the origin feasible.
inline DenseLp random_lp(std::mt19937_64& rng, int rows, int cols) {
  std::uniform_int_distribution<int> coef(-5, 9);
  std::uniform_int_distribution<int> rhs(1, 20);
  std::uniform_int_distribution<int> cost(-9, 9);
  DenseLp lp{Eigen::MatrixXd(rows, cols), Eigen::VectorXd(rows), Eigen::VectorXd(cols)};
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) lp.a(i, j) = i + 1 == rows ? 1.0 : coef(rng);
    lp.b[i] = i + 1 == rows ? 25.0 : rhs(rng);
  }
  for (int j = 0; j < cols; ++j) lp.c[j] = cost(rng);
  return lp;
}

// Enumerates every basic solution: choose `n` active constraints among the
// rows and the nonnegativity bounds, solve the square system, keep the
// feasible ones.
inline std::optional<double> vertex_enumeration_optimum(const DenseLp& lp) {
  const int m = static_cast<int>(lp.a.rows());
  const int n = static_cast<int>(lp.a.cols());
  const int total = m + n;
  std::optional<double> best;
  std::vector<int> pick(n);
  for (int k = 0; k < n; ++k) pick[k] = k;
  Eigen::MatrixXd sys(n, n);
  Eigen::VectorXd rhs(n);
  for (;;) {
    for (int k = 0; k < n; ++k) {
      int c = pick[k];
      if (c < m) {
        sys.row(k) = lp.a.row(c);
        rhs[k] = lp.b[c];
      } else {
        sys.row(k).setZero();
        sys(k, c - m) = 1.0;
        rhs[k] = 0.0;
      }
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(sys);
    if (lu.isInvertible()) {
      Eigen::VectorXd x = lu.solve(rhs);
      bool feasible = (x.array() >= -1e-9).all() &&
                      ((lp.a * x - lp.b).array() <= 1e-9).all();
      if (feasible) {
        double v = lp.c.dot(x);
        if (!best || v < *best) best = v;
      }
    }
    int k = n - 1;
    while (k >= 0 && pick[k] == total - n + k) --k;
    if (k < 0) break;
    ++pick[k];
    for (int l = k + 1; l < n; ++l) pick[l] = pick[l - 1] + 1;
  }
  return best;
}

// Pure binary program: objective sense, integer data, mixed row senses.
struct BinaryProgram {
  ObjectiveSense sense = ObjectiveSense::kMaximize;
  std::vector<double> c;
  std::vector<std::vector<double>> rows;
  std::vector<Sense> senses;
  std::vector<double> rhs;
};

inline BinaryProgram random_binary_program(std::mt19937_64& rng, int vars, int rows) {
  std::uniform_int_distribution<int> coef(-4, 9);
  std::uniform_int_distribution<int> cost(-6, 10);
  std::uniform_int_distribution<int> pick(0, 5);
  BinaryProgram bp;
  bp.sense = pick(rng) % 2 ? ObjectiveSense::kMaximize : ObjectiveSense::kMinimize;
  for (int j = 0; j < vars; ++j) bp.c.push_back(cost(rng));
  for (int i = 0; i < rows; ++i) {
    std::vector<double> row;
    double pos = 0.0;
    for (int j = 0; j < vars; ++j) {
      row.push_back(coef(rng));
      pos += std::max(0.0, row.back());
    }
    int s = pick(rng);
    if (s == 0) {
      bp.senses.push_back(Sense::kGreaterEqual);
      bp.rhs.push_back(std::floor(pos * 0.2));
    } else if (s == 1 && vars <= 6) {
      bp.senses.push_back(Sense::kEqual);
      bp.rhs.push_back(std::floor(pos * 0.4));
    } else {
      bp.senses.push_back(Sense::kLessEqual);
      bp.rhs.push_back(std::floor(pos * 0.5));
    }
    bp.rows.push_back(std::move(row));
  }
  return bp;
}

inline MilpModel to_model(const BinaryProgram& bp) {
  MilpModel model;
  std::vector<VarId> x;
  for (std::size_t j = 0; j < bp.c.size(); ++j) x.push_back(model.add_binary("y" + std::to_string(j)));
  for (std::size_t i = 0; i < bp.rows.size(); ++i) {
    LinearExpr e;
    for (std::size_t j = 0; j < x.size(); ++j) e.add(x[j], bp.rows[i][j]);
    model.add_constraint(e, bp.senses[i], bp.rhs[i], "r" + std::to_string(i));
  }
  LinearExpr obj;
  for (std::size_t j = 0; j < x.size(); ++j) obj.add(x[j], bp.c[j]);
  model.set_objective(bp.sense, obj);
  return model;
}

// Exhaustive 2^n enumeration; nullopt when infeasible.
inline std::optional<double> enumerate_binary_optimum(const BinaryProgram& bp) {
  const int n = static_cast<int>(bp.c.size());
  std::optional<double> best;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    bool ok = true;
    for (std::size_t i = 0; i < bp.rows.size() && ok; ++i) {
      double lhs = 0.0;
      for (int j = 0; j < n; ++j) if (mask >> j & 1u) lhs += bp.rows[i][j];
      switch (bp.senses[i]) {
        case Sense::kLessEqual: ok = lhs <= bp.rhs[i]; break;
        case Sense::kEqual: ok = lhs == bp.rhs[i]; break;
        case Sense::kGreaterEqual: ok = lhs >= bp.rhs[i]; break;
      }
    }
    if (!ok) continue;
    double v = 0.0;
    for (int j = 0; j < n; ++j) if (mask >> j & 1u) v += bp.c[j];
    bool better = !best || (bp.sense == ObjectiveSense::kMaximize ? v > *best : v < *best);
    if (better) best = v;
  }
  return best;
}

// Minimal reader for the LP dialect produced by export_lp, used to check that
// the written file reproduces the model's coefficient data.
struct ParsedLp {
  bool minimize = true;
  std::map<std::string, double> objective;
  double objective_constant = 0.0;
  struct Row {
    std::string name;
    std::map<std::string, double> coefs;
    std::string sense;
    double rhs = 0.0;
  };
  std::vector<Row> rows;
  std::map<std::string, std::pair<double, double>> bounds;
  std::vector<std::string> general;
  std::vector<std::string> binary;
};

inline double parse_lp_number(const std::string& tok) {
  if (tok == "+inf" || tok == "inf") return kInf;
  if (tok == "-inf") return -kInf;
  return std::stod(tok);
}

// Reads "<coef> <name>" terms joined by +/-; a trailing bare number is a
// constant.
inline void parse_lp_terms(std::istringstream& in, std::map<std::string, double>& out,
                           double* constant, std::string* stop_token) {
  std::string tok;
  double sign = 1.0;
  while (in >> tok) {
    if (tok == "+") { sign = 1.0; continue; }
    if (tok == "-") { sign = -1.0; continue; }
    if (tok == "<=" || tok == ">=" || tok == "=") {
      *stop_token = tok;
      return;
    }
    double coef = std::stod(tok) * sign;
    std::string name;
    std::streampos pos = in.tellg();
    if (in >> name && name != "+" && name != "-" && name != "<=" && name != ">=" && name != "=") {
      out[name] += coef;
    } else {
      if (constant) *constant += coef;
      in.clear();
      in.seekg(pos);
    }
    sign = 1.0;
  }
}

inline ParsedLp read_lp(const std::string& text) {
  ParsedLp lp;
  std::istringstream lines(text);
  std::string line;
  std::string section;
  while (std::getline(lines, line)) {
    if (line == "Minimize" || line == "Maximize") {
      lp.minimize = line == "Minimize";
      section = "obj";
      continue;
    }
    if (line == "Subject To" || line == "Bounds" || line == "General" ||
        line == "Binary" || line == "End") {
      section = line;
      continue;
    }
    std::istringstream in(line);
    if (section == "obj") {
      std::string label;
      in >> label;
      std::string stop;
      parse_lp_terms(in, lp.objective, &lp.objective_constant, &stop);
    } else if (section == "Subject To") {
      ParsedLp::Row row;
      in >> row.name;
      row.name.pop_back();
      parse_lp_terms(in, row.coefs, nullptr, &row.sense);
      std::string rhs;
      in >> rhs;
      row.rhs = parse_lp_number(rhs);
      lp.rows.push_back(std::move(row));
    } else if (section == "Bounds") {
      std::vector<std::string> tok;
      std::string t;
      while (in >> t) tok.push_back(t);
      if (tok.size() == 2 && tok[1] == "free") {
        lp.bounds[tok[0]] = {-kInf, kInf};
      } else if (tok.size() == 3 && tok[1] == "=") {
        double v = parse_lp_number(tok[2]);
        lp.bounds[tok[0]] = {v, v};
      } else if (tok.size() == 3 && tok[1] == ">=") {
        lp.bounds[tok[0]] = {parse_lp_number(tok[2]), kInf};
      } else if (tok.size() == 5) {
        lp.bounds[tok[2]] = {parse_lp_number(tok[0]), parse_lp_number(tok[4])};
      }
    } else if (section == "General") {
      std::string name;
      in >> name;
      lp.general.push_back(name);
    } else if (section == "Binary") {
      std::string name;
      in >> name;
      lp.binary.push_back(name);
    }
  }
  return lp;
}

}  // namespace ewnexus::testing

#endif  // EWNEXUS_TESTS_ORACLES_HPP_
