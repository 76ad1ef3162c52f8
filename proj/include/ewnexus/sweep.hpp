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

// Run orchestration on top of build/solve/validate: single solves, epsilon
// grids and the full-versus-steady tank comparison.

#ifndef EWNEXUS_SWEEP_HPP_
#define EWNEXUS_SWEEP_HPP_

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ewnexus/model.hpp"
#include "ewnexus/solver.hpp"
#include "ewnexus/validator.hpp"

namespace ewnexus {

// Solver settings used for nexus models unless the caller overrides them.
// Pseudo-cost branching keeps the ReLU indicators, which rarely move the
// bound, from being branched on ahead of the unit counts.
SolverConfig default_nexus_solver_config();

struct NexusRun {
  SolveStatus status = SolveStatus::kIterationLimit;
  Solution solution;                    // meaningful when has_solution()
  std::optional<ValidationReport> validation;
  ModelSize size;
  std::int64_t nodes = 0;
  double seconds = 0.0;
  std::string note;  // e.g. why a point was skipped

  bool has_solution() const {
    return status == SolveStatus::kOptimal || status == SolveStatus::kFeasible;
  }
};

// Builds, applies the instance's epsilons, solves and validates.
// GuaranteedInfeasible from the epsilon check becomes status infeasible.
NexusRun solve_nexus(const NexusInstance& instance, const SolverConfig& config,
                     double validation_tol = 1e-6);

struct SweepRow {
  double land_fraction = 1.0;
  double water_fraction = 1.0;
  double epsilon_land = 0.0;
  double epsilon_water = 0.0;
  SolveStatus status = SolveStatus::kIterationLimit;
  double objective = 0.0;
  double land_use = 0.0;
  double water_use = 0.0;
  bool validated = false;
  std::optional<EnergyMixReport> mix;
  std::int64_t nodes = 0;
  std::string note;
};

struct SweepTable {
  double baseline_objective = 0.0;
  double baseline_land = 0.0;
  double baseline_water = 0.0;
  std::vector<SweepRow> rows;  // land-major grid order
};

class SweepAborted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Solves the instance with both limits removed, then once per grid point
// with eps = fraction * baseline use. Fractions must lie in (0, 1].
// `workers` > 1 solves grid points in parallel; the table order is fixed.
SweepTable epsilon_sweep(const NexusInstance& instance,
                         const std::vector<double>& land_fractions,
                         const std::vector<double>& water_fractions,
                         const SolverConfig& config, int workers = 1);

// Objective of row (i, j) must not drop when either fraction decreases.
// Infeasible rows count as +inf. Returns the offending pairs as text.
std::vector<std::string> monotonicity_violations(const SweepTable& table,
                                                 std::size_t land_count,
                                                 std::size_t water_count,
                                                 double rel_tol = 1e-6);

struct StorageStudy {
  double epsilon_water = 0.0;  // absolute limit applied to both modes
  double baseline_water = 0.0;
  NexusRun full;
  NexusRun steady;
  double full_max_volume = 0.0;
  double steady_max_volume = 0.0;
  bool storage_used = false;        // full mode keeps water in the tank
  std::optional<double> upper_bound_gap;  // steady minus full objective
};

// Sets eps_W = water_fraction * (unrestricted full-mode use), drops the land
// limit, and solves the instance in full and in steady-state water mode.
// Throws SweepAborted if the baseline or both solves fail.
StorageStudy storage_phenomenon_study(const NexusInstance& instance,
                                      double water_fraction,
                                      const SolverConfig& config);

inline constexpr double kTankUseThreshold = 1e-6;  // m3

}  // namespace ewnexus

#endif  // EWNEXUS_SWEEP_HPP_
