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

// LP-format export and "name value" solution import for interop with external
// MILP solvers.
//
// Export layout, in this order:
//
//   Minimize | Maximize
//    obj: <terms> [+|- <constant>]
//   Subject To
//    <name>: <terms> <=|=|>= <rhs>        one row per line, insertion order
//   Bounds
//    <one line per non-binary variable, and per binary fixed inside [0,1]>
//   General                                only when integers exist
//    <name>
//   Binary                                 only when binaries exist
//    <name>
//   End
//
// Numbers are printed with 17 significant digits ("%.17g"). A term is
// "<coef> <name>"; later terms are joined with " + " or " - " and the absolute
// coefficient. Bound lines use "x = v", "x free", "x >= lo",
// "-inf <= x <= hi" or "lo <= x <= hi".

#ifndef EWNEXUS_LP_FORMAT_HPP_
#define EWNEXUS_LP_FORMAT_HPP_

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ewnexus/milp.hpp"

namespace ewnexus {

class SolutionParseError : public std::runtime_error {
 public:
  SolutionParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

std::string export_lp(const MilpModel& model);

// Parses "name value" lines. Blank lines and lines starting with '#' are
// skipped. Variables not mentioned take their lower bound (zero when the lower
// bound is -inf and zero is admissible). Result is indexed by VarId.
std::vector<double> import_solution(const MilpModel& model,
                                    std::string_view text);

// Inverse of import_solution for a complete assignment.
std::string format_solution(const MilpModel& model,
                            const std::vector<double>& values);

}  // namespace ewnexus

#endif  // EWNEXUS_LP_FORMAT_HPP_
