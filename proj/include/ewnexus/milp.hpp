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

#ifndef EWNEXUS_MILP_HPP_
#define EWNEXUS_MILP_HPP_

#include <compare>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ewnexus {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Raised for malformed model construction: duplicate names, inverted bounds,
// dangling variable references.
class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class VarKind { kContinuous, kBinary, kInteger };
enum class Sense { kLessEqual, kEqual, kGreaterEqual };
enum class ObjectiveSense { kMinimize, kMaximize };

// Handle to a variable. Stable for the lifetime of the owning model.
struct VarId {
  int index = -1;
  bool valid() const { return index >= 0; }
  auto operator<=>(const VarId&) const = default;
};

// Handle to a constraint row. Indices after a removed row shift down by one.
struct RowId {
  int index = -1;
  auto operator<=>(const RowId&) const = default;
};

struct Term {
  VarId var;
  double coef = 0.0;
};

// Sum of coefficient * variable terms plus a constant. Terms are kept in
// insertion order; repeated variables are not merged until `normalized()`.
class LinearExpr {
 public:
  LinearExpr() = default;
  explicit LinearExpr(double constant) : constant_(constant) {}

  LinearExpr& add(VarId var, double coef = 1.0) {
    terms_.push_back({var, coef});
    return *this;
  }
  LinearExpr& add(const LinearExpr& other, double scale = 1.0);
  LinearExpr& add_constant(double value) {
    constant_ += value;
    return *this;
  }

  const std::vector<Term>& terms() const { return terms_; }
  double constant() const { return constant_; }
  bool empty() const { return terms_.empty(); }

  // Merges duplicate variables (first-occurrence order) and drops zeros.
  LinearExpr normalized() const;

  double evaluate(const std::vector<double>& values) const;

 private:
  std::vector<Term> terms_;
  double constant_ = 0.0;
};

struct Variable {
  std::string name;
  VarKind kind = VarKind::kContinuous;
  double lower = 0.0;
  double upper = kInf;

  bool is_integral() const { return kind != VarKind::kContinuous; }
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;  // normalized, constant folded into rhs
  Sense sense = Sense::kLessEqual;
  double rhs = 0.0;
};

struct Objective {
  ObjectiveSense sense = ObjectiveSense::kMinimize;
  std::vector<Term> terms;
  double offset = 0.0;
};

struct ModelSize {
  int rows = 0;
  int continuous = 0;
  int binaries = 0;
  int integers = 0;

  auto operator<=>(const ModelSize&) const = default;
};

// Names must be usable verbatim in LP files: start with a letter or one of
// "_!\"#$%&()/,;?@`'{}|~" and contain only those, digits and '.'.
bool is_valid_lp_name(std::string_view name);

class MilpModel {
 public:
  MilpModel() = default;

  VarId add_variable(std::string name, VarKind kind, double lower,
                     double upper);
  VarId add_continuous(std::string name, double lower = 0.0,
                       double upper = kInf) {
    return add_variable(std::move(name), VarKind::kContinuous, lower, upper);
  }
  VarId add_binary(std::string name) {
    return add_variable(std::move(name), VarKind::kBinary, 0.0, 1.0);
  }
  VarId add_integer(std::string name, double lower, double upper) {
    return add_variable(std::move(name), VarKind::kInteger, lower, upper);
  }

  // The constant part of `expr` is moved to the right-hand side.
  RowId add_constraint(const LinearExpr& expr, Sense sense, double rhs,
                       std::string name);
  void replace_constraint(RowId row, const LinearExpr& expr, Sense sense,
                          double rhs);
  void remove_constraint(RowId row);

  void set_objective(ObjectiveSense sense, const LinearExpr& expr);
  void set_bounds(VarId var, double lower, double upper);

  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const Objective& objective() const { return objective_; }
  const Variable& variable(VarId id) const { return variables_.at(id.index); }
  const Constraint& constraint(RowId id) const {
    return constraints_.at(id.index);
  }
  int num_variables() const { return static_cast<int>(variables_.size()); }
  int num_constraints() const { return static_cast<int>(constraints_.size()); }

  std::optional<VarId> find_variable(std::string_view name) const;
  std::optional<RowId> find_constraint(std::string_view name) const;

  ModelSize size() const;

  // Objective value (with offset) at `values`.
  double objective_value(const std::vector<double>& values) const;

  // Throws ModelError if any term references a missing variable, a binary
  // has bounds outside [0,1], or a name is duplicated.
  void check_consistency() const;

  // Non-fatal observations, e.g. vacuous rows with no terms.
  std::vector<std::string> lint() const;

 private:
  void check_terms(const std::vector<Term>& terms) const;

  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  Objective objective_;
  std::unordered_map<std::string, int> var_index_;
  std::unordered_map<std::string, int> row_index_;
};

}  // namespace ewnexus

#endif  // EWNEXUS_MILP_HPP_
