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

#include "ewnexus/milp.hpp"

#include <cmath>
#include <cstring>
#include <utility>

namespace ewnexus {

LinearExpr& LinearExpr::add(const LinearExpr& other, double scale) {
  for (const Term& t : other.terms_) terms_.push_back({t.var, t.coef * scale});
  constant_ += other.constant_ * scale;
  return *this;
}

LinearExpr LinearExpr::normalized() const {
  LinearExpr out(constant_);
  std::unordered_map<int, std::size_t> slot;
  for (const Term& t : terms_) {
    auto [it, inserted] = slot.try_emplace(t.var.index, out.terms_.size());
    if (inserted) {
      out.terms_.push_back(t);
    } else {
      out.terms_[it->second].coef += t.coef;
    }
  }
  std::erase_if(out.terms_, [](const Term& t) { return t.coef == 0.0; });
  return out;
}

double LinearExpr::evaluate(const std::vector<double>& values) const {
  double sum = constant_;
  for (const Term& t : terms_) sum += t.coef * values.at(t.var.index);
  return sum;
}

bool is_valid_lp_name(std::string_view name) {
  if (name.empty() || name.size() > 255) return false;
  static constexpr const char* kSymbols = "_!\"#$%&()/,;?@`'{}|~";
  auto is_symbol = [](char c) {
    return c != '\0' && std::strchr(kSymbols, c) != nullptr;
  };
  auto is_alpha = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
  };
  char first = name.front();
  if (!is_alpha(first) && !is_symbol(first)) return false;
  for (char c : name) {
    bool ok = is_alpha(c) || (c >= '0' && c <= '9') || c == '.' || is_symbol(c);
    if (!ok) return false;
  }
  return true;
}

VarId MilpModel::add_variable(std::string name, VarKind kind, double lower,
                              double upper) {
  if (!is_valid_lp_name(name)) {
    throw ModelError("invalid variable name '" + name + "'");
  }
  if (var_index_.contains(name)) {
    throw ModelError("duplicate variable name '" + name + "'");
  }
  if (std::isnan(lower) || std::isnan(upper) || lower > upper) {
    throw ModelError("inverted or NaN bounds for variable '" + name + "'");
  }
  if (kind == VarKind::kBinary && (lower < 0.0 || upper > 1.0)) {
    throw ModelError("binary variable '" + name + "' must lie within [0,1]");
  }
  VarId id{static_cast<int>(variables_.size())};
  var_index_.emplace(name, id.index);
  variables_.push_back({std::move(name), kind, lower, upper});
  return id;
}

void MilpModel::check_terms(const std::vector<Term>& terms) const {
  for (const Term& t : terms) {
    if (t.var.index < 0 || t.var.index >= num_variables()) {
      throw ModelError("term references unknown variable index " +
                       std::to_string(t.var.index));
    }
    if (!std::isfinite(t.coef)) {
      throw ModelError("non-finite coefficient on variable '" +
                       variables_[t.var.index].name + "'");
    }
  }
}

RowId MilpModel::add_constraint(const LinearExpr& expr, Sense sense,
                                double rhs, std::string name) {
  if (!is_valid_lp_name(name)) {
    throw ModelError("invalid constraint name '" + name + "'");
  }
  if (row_index_.contains(name)) {
    throw ModelError("duplicate constraint name '" + name + "'");
  }
  check_terms(expr.terms());
  LinearExpr norm = expr.normalized();
  RowId id{num_constraints()};
  row_index_.emplace(name, id.index);
  constraints_.push_back(
      {std::move(name), norm.terms(), sense, rhs - norm.constant()});
  return id;
}

void MilpModel::replace_constraint(RowId row, const LinearExpr& expr,
                                   Sense sense, double rhs) {
  check_terms(expr.terms());
  LinearExpr norm = expr.normalized();
  Constraint& c = constraints_.at(row.index);
  c.terms = norm.terms();
  c.sense = sense;
  c.rhs = rhs - norm.constant();
}

void MilpModel::remove_constraint(RowId row) {
  constraints_.erase(constraints_.begin() + row.index);
  row_index_.clear();
  for (int i = 0; i < num_constraints(); ++i) {
    row_index_.emplace(constraints_[i].name, i);
  }
}

void MilpModel::set_objective(ObjectiveSense sense, const LinearExpr& expr) {
  check_terms(expr.terms());
  LinearExpr norm = expr.normalized();
  objective_ = {sense, norm.terms(), norm.constant()};
}

void MilpModel::set_bounds(VarId var, double lower, double upper) {
  Variable& v = variables_.at(var.index);
  if (std::isnan(lower) || std::isnan(upper) || lower > upper) {
    throw ModelError("inverted or NaN bounds for variable '" + v.name + "'");
  }
  if (v.kind == VarKind::kBinary && (lower < 0.0 || upper > 1.0)) {
    throw ModelError("binary variable '" + v.name + "' must lie within [0,1]");
  }
  v.lower = lower;
  v.upper = upper;
}

std::optional<VarId> MilpModel::find_variable(std::string_view name) const {
  auto it = var_index_.find(std::string(name));
  if (it == var_index_.end()) return std::nullopt;
  return VarId{it->second};
}

std::optional<RowId> MilpModel::find_constraint(std::string_view name) const {
  auto it = row_index_.find(std::string(name));
  if (it == row_index_.end()) return std::nullopt;
  return RowId{it->second};
}

ModelSize MilpModel::size() const {
  ModelSize s;
  s.rows = num_constraints();
  for (const Variable& v : variables_) {
    switch (v.kind) {
      case VarKind::kContinuous: ++s.continuous; break;
      case VarKind::kBinary: ++s.binaries; break;
      case VarKind::kInteger: ++s.integers; break;
    }
  }
  return s;
}

double MilpModel::objective_value(const std::vector<double>& values) const {
  double sum = objective_.offset;
  for (const Term& t : objective_.terms) sum += t.coef * values.at(t.var.index);
  return sum;
}

void MilpModel::check_consistency() const {
  std::unordered_map<std::string, int> seen;
  for (const Variable& v : variables_) {
    if (!seen.emplace(v.name, 0).second) {
      throw ModelError("duplicate variable name '" + v.name + "'");
    }
    if (v.lower > v.upper) {
      throw ModelError("inverted bounds for variable '" + v.name + "'");
    }
    if (v.kind == VarKind::kBinary && (v.lower < 0.0 || v.upper > 1.0)) {
      throw ModelError("binary variable '" + v.name + "' outside [0,1]");
    }
  }
  seen.clear();
  for (const Constraint& c : constraints_) {
    if (!seen.emplace(c.name, 0).second) {
      throw ModelError("duplicate constraint name '" + c.name + "'");
    }
    check_terms(c.terms);
    if (!std::isfinite(c.rhs)) {
      throw ModelError("non-finite right-hand side in '" + c.name + "'");
    }
  }
  check_terms(objective_.terms);
}

std::vector<std::string> MilpModel::lint() const {
  std::vector<std::string> notes;
  for (const Constraint& c : constraints_) {
    if (c.terms.empty()) {
      notes.push_back("vacuous row '" + c.name + "' has no terms");
    }
  }
  return notes;
}

}  // namespace ewnexus
