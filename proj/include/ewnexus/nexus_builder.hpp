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

#ifndef EWNEXUS_NEXUS_BUILDER_HPP_
#define EWNEXUS_NEXUS_BUILDER_HPP_

#include <array>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ewnexus/milp.hpp"
#include "ewnexus/model.hpp"
#include "ewnexus/solver.hpp"
#include "ewnexus/surrogates.hpp"

namespace ewnexus {

// Variable handles by meaning. Time-indexed entries always have one handle
// per step; in steady-state water mode the RO entries repeat one handle.
struct Registry {
  std::vector<VarId> power;  // P(t)
  std::vector<VarId> ec;
  std::vector<VarId> q_f;
  std::array<std::vector<VarId>, 3> wr;
  std::vector<VarId> wr_sys;
  std::vector<VarId> q_p;
  std::vector<std::vector<VarId>> feed_pressure;       // [stage][t]
  std::vector<std::vector<VarId>> retentate_pressure;  // [stage][t]
  std::vector<VarId> q_stor;
  std::vector<VarId> q_rel;
  std::vector<VarId> volume;  // V(t)
  VarId initial_volume;
  VarId tank_volume;
  VarId tank_built;
  VarId qp_capacity;

  std::vector<VarId> unit_count;  // n per technology
  std::vector<VarId> tech_built;
  std::vector<VarId> storage_capacity;
  std::vector<std::vector<VarId>> p_stor;  // [k][t]
  std::vector<std::vector<VarId>> p_rel;
  std::vector<std::vector<VarId>> soc;
  std::vector<VarId> initial_soc;

  std::vector<VarId> tech_cost;
  std::vector<VarId> storage_cost;
  VarId ro_investment;
  VarId ro_operation;
  VarId tank_cost;

  std::vector<ReluEncoding> ec_fragments;

  // Every handle above, for liveness checks.
  std::vector<VarId> all() const;
};

struct BuildArtifacts {
  NexusInstance instance;  // copy, with the epsilon values currently applied
  MilpModel model;
  Registry registry;
  ModelSize size;
};

inline constexpr const char* kLandRowName = "eps_land";
inline constexpr const char* kWaterRowName = "eps_water";

// Raised when an epsilon limit is below a bound every feasible point must
// exceed.
class GuaranteedInfeasible : public std::invalid_argument {
 public:
  GuaranteedInfeasible(const std::string& what, double bound)
      : std::invalid_argument(what), bound_(bound) {}
  double bound() const { return bound_; }

 private:
  double bound_;
};

BuildArtifacts build(const NexusInstance& instance);

// Smallest horizon water use (m3, on the instance's basis) any feasible
// point can have.
double water_use_lower_bound(const NexusInstance& instance);

// Sets, replaces or removes the epsilon rows. nullopt leaves a limit as it
// is; +inf removes the row. Throws std::invalid_argument on a nonpositive
// value and GuaranteedInfeasible when the water limit is provably too small.
void apply_epsilon(BuildArtifacts& artifacts, std::optional<double> epsilon_land,
                   std::optional<double> epsilon_water);

// Maps a solver result back onto the domain quantities.
Solution extract_solution(const BuildArtifacts& artifacts,
                          const MilpResult& result);

// Horizon land use and water use (on the instance's basis) of a solution.
double land_use(const NexusInstance& instance, const Solution& solution);
double water_use(const NexusInstance& instance, const Solution& solution);

}  // namespace ewnexus

#endif  // EWNEXUS_NEXUS_BUILDER_HPP_
