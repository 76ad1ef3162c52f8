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

#include "ewnexus/lp_format.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>

namespace ewnexus {
namespace {

std::string num(double v) { return fmt::format("{:.17g}", v); }

void append_terms(std::string& out, const MilpModel& model,
                  const std::vector<Term>& terms) {
  bool first = true;
  for (const Term& t : terms) {
    const std::string& name = model.variable(t.var).name;
    if (first) {
      out += num(t.coef);
      first = false;
    } else {
      out += t.coef < 0.0 ? " - " : " + ";
      out += num(std::fabs(t.coef));
    }
    out += ' ';
    out += name;
  }
}

void append_bound_line(std::string& out, const Variable& v) {
  out += ' ';
  if (v.lower == v.upper) {
    out += v.name + " = " + num(v.lower);
  } else if (v.lower == -kInf && v.upper == kInf) {
    out += v.name + " free";
  } else if (v.upper == kInf) {
    out += v.name + " >= " + num(v.lower);
  } else if (v.lower == -kInf) {
    out += "-inf <= " + v.name + " <= " + num(v.upper);
  } else {
    out += num(v.lower) + " <= " + v.name + " <= " + num(v.upper);
  }
  out += '\n';
}

const char* sense_token(Sense s) {
  switch (s) {
    case Sense::kLessEqual: return "<=";
    case Sense::kEqual: return "=";
    case Sense::kGreaterEqual: return ">=";
  }
  return "?";
}

}  // namespace

std::string export_lp(const MilpModel& model) {
  model.check_consistency();
  std::string out;
  const Objective& obj = model.objective();
  out += obj.sense == ObjectiveSense::kMinimize ? "Minimize\n" : "Maximize\n";
  out += " obj: ";
  if (obj.terms.empty()) {
    out += num(obj.offset);
  } else {
    append_terms(out, model, obj.terms);
    if (obj.offset != 0.0) {
      out += obj.offset < 0.0 ? " - " : " + ";
      out += num(std::fabs(obj.offset));
    }
  }
  out += "\nSubject To\n";
  for (const Constraint& c : model.constraints()) {
    out += ' ';
    out += c.name;
    out += ": ";
    if (c.terms.empty()) {
      if (model.num_variables() == 0) {
        throw ModelError("cannot export vacuous row '" + c.name +
                         "' from a model without variables");
      }
      out += "0 " + model.variables().front().name;
    } else {
      append_terms(out, model, c.terms);
    }
    out += ' ';
    out += sense_token(c.sense);
    out += ' ';
    out += num(c.rhs);
    out += '\n';
  }
  out += "Bounds\n";
  bool has_general = false;
  bool has_binary = false;
  for (const Variable& v : model.variables()) {
    if (v.kind == VarKind::kBinary) {
      has_binary = true;
      if (v.lower == 0.0 && v.upper == 1.0) continue;
    }
    if (v.kind == VarKind::kInteger) has_general = true;
    append_bound_line(out, v);
  }
  if (has_general) {
    out += "General\n";
    for (const Variable& v : model.variables()) {
      if (v.kind == VarKind::kInteger) out += ' ' + v.name + '\n';
    }
  }
  if (has_binary) {
    out += "Binary\n";
    for (const Variable& v : model.variables()) {
      if (v.kind == VarKind::kBinary) out += ' ' + v.name + '\n';
    }
  }
  out += "End\n";
  return out;
}

std::vector<double> import_solution(const MilpModel& model,
                                    std::string_view text) {
  std::vector<double> values;
  values.reserve(model.num_variables());
  for (const Variable& v : model.variables()) {
    double def = v.lower;
    if (def == -kInf) def = std::min(0.0, v.upper);
    values.push_back(def);
  }
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos || line[first] == '#') continue;
    line.remove_prefix(first);
    std::size_t split = line.find_first_of(" \t");
    if (split == std::string_view::npos) {
      throw SolutionParseError(line_no, "expected '<name> <value>'");
    }
    std::string_view name = line.substr(0, split);
    std::string_view rest = line.substr(split);
    rest.remove_prefix(std::min(rest.find_first_not_of(" \t"), rest.size()));
    std::size_t last = rest.find_last_not_of(" \t");
    rest = rest.substr(0, last == std::string_view::npos ? 0 : last + 1);
    auto id = model.find_variable(name);
    if (!id) {
      throw SolutionParseError(line_no,
                               "unknown variable '" + std::string(name) + "'");
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(),
                                     value);
    if (ec != std::errc() || ptr != rest.data() + rest.size() || rest.empty()) {
      throw SolutionParseError(line_no, "unparseable numeral '" +
                                            std::string(rest) + "'");
    }
    values[id->index] = value;
  }
  return values;
}

std::string format_solution(const MilpModel& model,
                            const std::vector<double>& values) {
  std::string out;
  for (int i = 0; i < model.num_variables(); ++i) {
    out += model.variables()[i].name + ' ' + num(values.at(i)) + '\n';
  }
  return out;
}

}  // namespace ewnexus
