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

// Re-evaluates a Solution against its NexusInstance from first principles.
// Nothing here looks at the MILP; balances, surrogates and costs are
// recomputed from the instance data.

#ifndef EWNEXUS_VALIDATOR_HPP_
#define EWNEXUS_VALIDATOR_HPP_

#include <stdexcept>
#include <string>
#include <vector>

#include "ewnexus/model.hpp"

namespace ewnexus {

struct Residual {
  std::string check;  // e.g. "tank_balance"
  int step = -1;      // -1 for horizon-level checks
  double value = 0.0;   // signed violation, 0 when satisfied
  double scale = 0.0;   // magnitude the tolerance is relative to
  bool violated = false;
};

struct ValidationReport {
  bool pass = false;
  std::vector<Residual> residuals;  // every check performed
  double recomputed_objective = 0.0;
  CostBreakdown recomputed_costs;

  std::vector<Residual> violations() const;
  std::string summary() const;
};

class GridMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Relative tolerance `tol` with an absolute floor of 1e-9. Throws
// GridMismatch when the solution's series do not cover the instance grid.
ValidationReport check_solution(const NexusInstance& instance,
                                const Solution& solution, double tol = 1e-6);

struct EnergyMixEntry {
  std::string name;
  double horizon_energy = 0.0;  // kWh over the horizon
  double annual_energy = 0.0;   // kWh/yr
  double energy_share = 0.0;    // percent
  double annual_cost = 0.0;
  double cost_share = 0.0;      // percent of total cost
};

struct EnergyMixReport {
  std::vector<EnergyMixEntry> technologies;
  std::vector<EnergyMixEntry> storage;  // cost only
  double ro_cost_share = 0.0;
  double tank_cost_share = 0.0;
  double total_cost = 0.0;
};

class SolutionRejected : public std::runtime_error {
 public:
  explicit SolutionRejected(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

// Throws SolutionRejected if check_solution fails at `tol`.
EnergyMixReport energy_mix_report(const NexusInstance& instance,
                                  const Solution& solution, double tol = 1e-6);

}  // namespace ewnexus

#endif  // EWNEXUS_VALIDATOR_HPP_
