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

#include "ewnexus/nexus_builder.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "ewnexus/sweep.hpp"
#include "ewnexus/synthetic.hpp"
#include "ewnexus/validator.hpp"

namespace ewnexus {
namespace {

NexusInstance day(int steps = 24, SolveMode mode = SolveMode::kFullTimeDependent) {
  SyntheticOptions o;
  o.horizon_steps = steps;
  o.mode = mode;
  return make_synthetic_instance(o);
}

int count_rows(const MilpModel& m, const std::string& name) {
  return static_cast<int>(std::count_if(m.constraints().begin(), m.constraints().end(),
                                        [&](const Constraint& c) { return c.name == name; }));
}

TEST(BuildTest, SizeScalesWithHorizon) {
  ModelSize a = build(day(24)).size;
  ModelSize b = build(day(336)).size;
  for (auto [small, large] : {std::pair{a.rows, b.rows}, std::pair{a.continuous, b.continuous},
                              std::pair{a.binaries, b.binaries}}) {
    double ratio = static_cast<double>(large) / small;
    EXPECT_NEAR(ratio, 14.0, 1.4) << small << " -> " << large;
  }
}

TEST(BuildTest, CountsAreAffineInHorizon) {
  ModelSize s1 = build(day(24)).size;
  ModelSize s2 = build(day(48)).size;
  ModelSize s3 = build(day(72)).size;
  EXPECT_EQ(s2.rows - s1.rows, s3.rows - s2.rows);
  EXPECT_EQ(s2.continuous - s1.continuous, s3.continuous - s2.continuous);
  EXPECT_EQ(s2.binaries - s1.binaries, s3.binaries - s2.binaries);
  EXPECT_EQ(s1.integers, s3.integers);
}

TEST(BuildTest, BinaryAudit) {
  NexusInstance full = day(24);
  BuildArtifacts f = build(full);
  const int techs = static_cast<int>(full.technologies.size());
  // Existence per technology, one tank, one indicator per hidden node per step.
  EXPECT_EQ(f.size.binaries, techs + 1 + 2 * 24);
  EXPECT_EQ(f.size.integers, techs);

  for (int steps : {24, 48}) {
    BuildArtifacts s = build(day(steps, SolveMode::kSteadyStateWater));
    ASSERT_EQ(s.registry.ec_fragments.size(), 1u);
    int node_binaries = 0;
    for (const auto& layer : s.registry.ec_fragments[0].active) node_binaries += layer.size();
    EXPECT_EQ(node_binaries, 2);
    EXPECT_EQ(s.size.binaries, techs + 1 + node_binaries);
  }
}

TEST(BuildTest, SteadyModeSharesOneOperatingPoint) {
  BuildArtifacts s = build(day(24, SolveMode::kSteadyStateWater));
  const Registry& r = s.registry;
  for (const auto* v : {&r.q_f, &r.q_p, &r.wr_sys, &r.ec, &r.wr[0], &r.wr[2]}) {
    ASSERT_EQ(v->size(), 24u);
    EXPECT_TRUE(std::all_of(v->begin(), v->end(), [&](VarId id) { return id == v->front(); }));
  }
  EXPECT_NE(r.power[0], r.power[1]);
  EXPECT_NE(r.volume[0], r.volume[1]);
}

TEST(BuildTest, RegistryHandlesAreLive) {
  for (SolveMode mode : {SolveMode::kFullTimeDependent, SolveMode::kSteadyStateWater}) {
    BuildArtifacts a = build(day(24, mode));
    for (VarId v : a.registry.all()) {
      ASSERT_TRUE(v.valid());
      ASSERT_LT(v.index, a.model.num_variables());
    }
    EXPECT_EQ(a.size, a.model.size());
    EXPECT_NO_THROW(a.model.check_consistency());
    EXPECT_TRUE(a.model.lint().empty());
  }
}

TEST(BuildTest, InvalidInstanceRejected) {
  NexusInstance inst = day();
  inst.demands.water_demand.pop_back();
  EXPECT_THROW(build(inst), InvalidInstance);
}

TEST(EpsilonTest, ReplacementSemantics) {
  BuildArtifacts a = build(day());
  EXPECT_EQ(count_rows(a.model, kLandRowName), 0);
  EXPECT_EQ(count_rows(a.model, kWaterRowName), 0);
  apply_epsilon(a, 50.0, 20000.0);
  apply_epsilon(a, 40.0, 18000.0);
  EXPECT_EQ(count_rows(a.model, kLandRowName), 1);
  EXPECT_EQ(count_rows(a.model, kWaterRowName), 1);
  EXPECT_DOUBLE_EQ(a.model.constraint(*a.model.find_constraint(kLandRowName)).rhs, 40.0);
  EXPECT_DOUBLE_EQ(*a.instance.epsilon_land, 40.0);
  EXPECT_DOUBLE_EQ(*a.instance.epsilon_water, 18000.0);

  apply_epsilon(a, std::nullopt, kInf);  // land untouched, water removed
  EXPECT_EQ(count_rows(a.model, kLandRowName), 1);
  EXPECT_EQ(count_rows(a.model, kWaterRowName), 0);
  EXPECT_FALSE(a.instance.epsilon_water.has_value());
  apply_epsilon(a, kInf, std::nullopt);
  EXPECT_EQ(count_rows(a.model, kLandRowName), 0);
  EXPECT_EQ(a.model.num_constraints(), build(day()).model.num_constraints());
}

TEST(EpsilonTest, InfiniteLimitAddsNoRow) {
  NexusInstance inst = day();
  BuildArtifacts a = build(inst);
  apply_epsilon(a, kInf, kInf);
  EXPECT_EQ(a.model.num_constraints(), build(inst).model.num_constraints());
}

TEST(EpsilonTest, NonpositiveRejected) {
  BuildArtifacts a = build(day());
  EXPECT_THROW(apply_epsilon(a, 0.0, std::nullopt), std::invalid_argument);
  EXPECT_THROW(apply_epsilon(a, std::nullopt, -5.0), std::invalid_argument);
}

// The analytic water floor must sit below the LP-relaxation minimum of water
// use, and limits under it must be reported before any solve.
TEST(EpsilonTest, GuaranteedInfeasibleBelowWaterFloor) {
  for (WaterBasis basis : {WaterBasis::kFeed, WaterBasis::kPermeate}) {
    NexusInstance inst = day();
    inst.epsilon_water_basis = basis;
    double floor = water_use_lower_bound(inst);
    BuildArtifacts a = build(inst);
    MilpModel probe = a.model;
    LinearExpr use;
    const auto& flow = basis == WaterBasis::kFeed ? a.registry.q_f : a.registry.q_p;
    for (VarId v : flow) use.add(v, inst.grid.dt_hours);
    probe.set_objective(ObjectiveSense::kMinimize, use);
    LpResult lp = solve_lp(probe);
    ASSERT_EQ(lp.status, SolveStatus::kOptimal);
    EXPECT_GE(lp.objective, floor * (1 - 1e-9)) << to_string(basis);

    double demand = 0;
    for (int t = 0; t < 24; ++t) demand += inst.demands.water_at(t);
    if (basis == WaterBasis::kPermeate) EXPECT_NEAR(floor, demand, 1e-9);

    try {
      apply_epsilon(a, std::nullopt, 0.99 * floor);
      FAIL() << "expected GuaranteedInfeasible";
    } catch (const GuaranteedInfeasible& e) {
      EXPECT_DOUBLE_EQ(e.bound(), floor);
    }
    inst.epsilon_water = 0.5 * floor;
    EXPECT_THROW(build(inst), GuaranteedInfeasible);
  }
}

TEST(SolveTest, ZeroWaterDemandIdlesPlant) {
  SyntheticOptions o;
  o.water_demand = 0.0;
  o.greenhouse_count = 0;
  NexusInstance inst = make_synthetic_instance(o);
  inst.ro.wr_limit = 0.0;
  NexusRun run = solve_nexus(inst, default_nexus_solver_config());
  ASSERT_EQ(run.status, SolveStatus::kOptimal);
  ASSERT_TRUE(run.validation->pass) << run.validation->summary();
  const Solution& s = run.solution;
  for (int t = 0; t < 24; ++t) {
    EXPECT_NEAR(s.q_p[t], s.q_stor[t] - s.q_rel[t], 1e-6);
    EXPECT_NEAR(s.q_f[t], inst.ro.qf_bounds.lo, 1e-6);
  }
}

TEST(SolveTest, SteadyModeBoundsFullMode) {
  NexusRun full = solve_nexus(day(24), default_nexus_solver_config());
  NexusRun steady = solve_nexus(day(24, SolveMode::kSteadyStateWater), default_nexus_solver_config());
  ASSERT_EQ(full.status, SolveStatus::kOptimal);
  ASSERT_EQ(steady.status, SolveStatus::kOptimal);
  EXPECT_TRUE(full.validation->pass) << full.validation->summary();
  EXPECT_TRUE(steady.validation->pass) << steady.validation->summary();
  EXPECT_GE(steady.solution.objective, full.solution.objective * (1 - 1e-6));
  for (int t = 1; t < 24; ++t) EXPECT_EQ(steady.solution.q_f[t], steady.solution.q_f[0]);
}

TEST(SolveTest, ExtractedCostsMatchObjective) {
  NexusRun run = solve_nexus(day(24, SolveMode::kSteadyStateWater), default_nexus_solver_config());
  ASSERT_TRUE(run.has_solution());
  EXPECT_NEAR(run.solution.costs.total(), run.solution.objective,
              1e-6 * std::fabs(run.solution.objective));
  EXPECT_NEAR(run.validation->recomputed_objective, run.solution.objective,
              1e-6 * std::fabs(run.solution.objective));
}

}  // namespace
}  // namespace ewnexus
