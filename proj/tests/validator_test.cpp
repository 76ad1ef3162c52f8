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

#include "ewnexus/validator.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "ewnexus/surrogates.hpp"
#include "ewnexus/sweep.hpp"
#include "ewnexus/synthetic.hpp"
#include "perturbation.hpp"

namespace ewnexus {
namespace {

// No demands, identity EC scaling, plant allowed to stand still.
NexusInstance quiet_instance() {
  SyntheticOptions o;
  o.base_power = 0.0;
  o.water_demand = 0.0;
  o.greenhouse_count = 0;
  NexusInstance inst = make_synthetic_instance(o);
  inst.ro.qf_bounds.lo = 0.0;
  inst.ro.wr_limit = 0.0;
  inst.ro.ec_input_scaling = AffineScaling::identity(4);
  inst.ro.ec_output_scaling = AffineScaling::identity(1);
  return inst;
}

// Every flow zero. Stage recoveries are set so the recovery line gives the
// nominal system recovery exactly, where the permeate line passes through
// zero feed.
Solution idle_solution(const NexusInstance& inst) {
  const std::size_t T = inst.grid.horizon_steps;
  const std::size_t techs = inst.technologies.size();
  const std::size_t stores = inst.storage_techs.size();
  const NominalPoint& np = inst.ro.nominal_point;
  Solution s;
  s.status = SolveStatus::kOptimal;
  s.unit_counts.assign(techs, 0.0);
  s.tech_built.assign(techs, 0.0);
  s.storage_capacities.assign(stores, 0.0);
  s.initial_soc.assign(stores, 0.0);
  s.p_stor.assign(stores, TimeSeries(T, 0.0));
  s.p_rel = s.p_stor;
  s.soc = s.p_stor;
  s.power.assign(T, 0.0);
  s.q_f.assign(T, 0.0);
  s.q_p.assign(T, 0.0);
  TaylorSurrogate line = build_wr_sys_taylor(np.wr1, np.wr2, np.wr3);
  double wr3 = np.wr3 - (line.value_at_point - np.wr_sys) / line.gradient[2];
  s.wr = {TimeSeries(T, np.wr1), TimeSeries(T, np.wr2), TimeSeries(T, wr3)};
  s.wr_sys.assign(T, np.wr_sys);
  s.ec.assign(T, relu_forward(inst.ro.ec_network, {np.wr1, np.wr2, wr3, 0.0}));
  s.q_stor.assign(T, 0.0);
  s.q_rel.assign(T, 0.0);
  s.volume.assign(T, 0.0);
  s.costs.technology.assign(techs, 0.0);
  s.costs.storage.assign(stores, 0.0);
  s.costs.ro_investment = inst.ro.inv_cost_intercept / inst.ro.plant_life_years;
  s.objective = s.costs.total();
  return s;
}

std::vector<Residual> violations_named(const ValidationReport& r, const std::string& name) {
  std::vector<Residual> out;
  for (const Residual& x : r.violations()) {
    if (x.check == name) out.push_back(x);
  }
  return out;
}

class SolvedDay : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    instance_ = new NexusInstance(make_synthetic_instance(SyntheticOptions{}));
    NexusRun run = solve_nexus(*instance_, default_nexus_solver_config());
    ASSERT_EQ(run.status, SolveStatus::kOptimal);
    solution_ = new Solution(run.solution);
  }
  static void TearDownTestSuite() {
    delete instance_;
    delete solution_;
  }
  static NexusInstance* instance_;
  static Solution* solution_;
};
NexusInstance* SolvedDay::instance_ = nullptr;
Solution* SolvedDay::solution_ = nullptr;

TEST(CheckSolutionTest, IdleSolutionPasses) {
  NexusInstance inst = quiet_instance();
  EXPECT_TRUE(validate_instance(inst).empty());
  Solution s = idle_solution(inst);
  ValidationReport r = check_solution(inst, s);
  EXPECT_TRUE(r.pass) << r.summary();
  EXPECT_NEAR(r.recomputed_objective, s.objective, 1e-9);
  for (const Residual& x : r.residuals) EXPECT_LE(std::abs(x.value), 1e-9) << x.check;
}

TEST(CheckSolutionTest, WaterBalanceAtCaseStudyDemand) {
  NexusInstance inst = quiet_instance();
  inst.demands.water_demand.assign(24, 570.0);
  inst.demands.greenhouse_count = 2;
  inst.demands.greenhouse_water_profile.assign(24, 15.0);
  Solution s = idle_solution(inst);
  s.q_f.assign(24, 600.0 / inst.ro.nominal_point.wr_sys);
  s.q_p.assign(24, 600.0);
  ValidationReport r = check_solution(inst, s);
  int seen = 0;
  for (const Residual& x : r.residuals) {
    if (x.check == "water_balance") {
      ++seen;
      EXPECT_NEAR(x.value, 0.0, 1e-12);
      EXPECT_FALSE(x.violated);
    }
    if (x.check == "permeate") EXPECT_FALSE(x.violated) << x.value;
  }
  EXPECT_EQ(seen, 24);
}

TEST(CheckSolutionTest, GridMismatchThrows) {
  NexusInstance inst = quiet_instance();
  Solution s = idle_solution(inst);
  s.volume.pop_back();
  EXPECT_THROW(check_solution(inst, s), GridMismatch);
  s = idle_solution(inst);
  s.costs.technology.push_back(0.0);
  EXPECT_THROW(check_solution(inst, s), GridMismatch);
}

TEST(CheckSolutionTest, AbsoluteFloorForTinyValues) {
  NexusInstance inst = quiet_instance();
  Solution s = idle_solution(inst);
  s.q_stor[3] = 5e-10;
  s.volume[3] = 5e-10;
  s.tank_volume = 5e-10;
  s.tank_built = 1.0;
  s.costs.tank = (inst.water_tank.cost_slope * 5e-10 + inst.water_tank.cost_intercept) /
                 inst.water_tank.life_years;
  s.objective = s.costs.total();
  // Water balance is off by 5e-10, under the 1e-9 floor.
  EXPECT_TRUE(check_solution(inst, s).pass) << check_solution(inst, s).summary();
  s.q_stor[3] = 2e-9;
  s.volume[3] = 2e-9;
  EXPECT_FALSE(check_solution(inst, s).pass);
}

TEST_F(SolvedDay, OptimalSolutionPasses) {
  ValidationReport r = check_solution(*instance_, *solution_);
  EXPECT_TRUE(r.pass) << r.summary();
  EXPECT_NEAR(r.recomputed_objective, solution_->objective, 1e-6 * solution_->objective);
}

TEST_F(SolvedDay, EcMatchesForwardPassInSitu) {
  const RoPlantParams& ro = instance_->ro;
  for (int t = 0; t < 24; ++t) {
    std::vector<double> in = {solution_->wr[0][t], solution_->wr[1][t], solution_->wr[2][t],
                              solution_->q_f[t]};
    for (int i = 0; i < 4; ++i) in[i] = ro.ec_input_scaling.scale[i] * in[i] + ro.ec_input_scaling.offset[i];
    double ec = ro.ec_output_scaling.scale[0] * relu_forward(ro.ec_network, in) +
                ro.ec_output_scaling.offset[0];
    EXPECT_NEAR(solution_->ec[t], ec, 1e-6) << "step " << t;
  }
}

TEST_F(SolvedDay, VolumePerturbationFlagsTwoTankRows) {
  Solution s = *solution_;
  s.volume[7] += 1.0;
  ValidationReport r = check_solution(*instance_, s);
  std::vector<Residual> bad = violations_named(r, "tank_balance");
  ASSERT_EQ(bad.size(), 2u) << r.summary();
  EXPECT_EQ(bad[0].step, 7);
  EXPECT_EQ(bad[1].step, 8);
  EXPECT_NEAR(bad[0].value, 1.0, 1e-9);
  EXPECT_NEAR(bad[1].value, -1.0, 1e-9);
}

TEST_F(SolvedDay, SmallPerturbationsDetected) {
  std::vector<testing::Perturbation> cases = testing::balance_perturbations(*instance_, *solution_);
  ASSERT_GT(cases.size(), 100u);
  for (const testing::Perturbation& p : cases) {
    Solution s = *solution_;
    p.apply(s);
    EXPECT_FALSE(check_solution(*instance_, s).pass) << p.label;
  }
}

TEST_F(SolvedDay, EnergyMixSharesAndCosts) {
  EnergyMixReport mix = energy_mix_report(*instance_, *solution_);
  double energy = 0, cost = 0;
  for (const EnergyMixEntry& e : mix.technologies) {
    energy += e.energy_share;
    cost += e.cost_share;
  }
  for (const EnergyMixEntry& e : mix.storage) cost += e.cost_share;
  cost += mix.ro_cost_share + mix.tank_cost_share;
  EXPECT_NEAR(energy, 100.0, 0.01);
  EXPECT_NEAR(cost, 100.0, 0.01);

  const CostBreakdown& c = solution_->costs;
  EXPECT_NEAR(mix.total_cost, c.total(), 1e-6 * c.total());
  for (std::size_t k = 0; k < mix.technologies.size(); ++k) {
    EXPECT_NEAR(mix.technologies[k].annual_cost, c.technology[k], 1e-6 * c.total());
    const TechnologySurrogate& tech = instance_->technologies[k];
    double horizon = solution_->unit_counts[k] *
                     std::accumulate(tech.per_unit_profile.begin(), tech.per_unit_profile.end(), 0.0);
    EXPECT_NEAR(mix.technologies[k].horizon_energy, horizon, 1e-9 * std::max(1.0, horizon));
    EXPECT_NEAR(mix.technologies[k].annual_energy, horizon * instance_->grid.annualization(),
                1e-6 * std::max(1.0, horizon));
  }
  EXPECT_NEAR(mix.ro_cost_share, 100.0 * (c.ro_investment + c.ro_operation) / c.total(), 1e-6);
  EXPECT_NEAR(mix.tank_cost_share, 100.0 * c.tank / c.total(), 1e-6);
}

TEST_F(SolvedDay, EnergyMixRefusesFailingSolution) {
  Solution s = *solution_;
  s.power[2] *= 1.01;
  try {
    energy_mix_report(*instance_, s);
    FAIL() << "expected SolutionRejected";
  } catch (const SolutionRejected& e) {
    EXPECT_FALSE(e.report().pass);
    EXPECT_FALSE(violations_named(e.report(), "generation").empty());
  }
}

TEST(EnergyMixTest, SingleTechnologyTakesEverything) {
  SyntheticOptions o;
  o.include_solar = false;
  NexusInstance inst = make_synthetic_instance(o);
  NexusRun run = solve_nexus(inst, default_nexus_solver_config());
  ASSERT_EQ(run.status, SolveStatus::kOptimal);
  EnergyMixReport mix = energy_mix_report(inst, run.solution);
  ASSERT_EQ(mix.technologies.size(), 1u);
  EXPECT_DOUBLE_EQ(mix.technologies[0].energy_share, 100.0);
}

TEST(EnergyMixTest, WindDominatesWhenSolarIsDear) {
  SyntheticOptions o;
  o.solar_cost_factor = 25.0;
  NexusInstance inst = make_synthetic_instance(o);
  NexusRun run = solve_nexus(inst, default_nexus_solver_config());
  ASSERT_EQ(run.status, SolveStatus::kOptimal);
  ASSERT_TRUE(run.validation->pass) << run.validation->summary();
  EnergyMixReport mix = energy_mix_report(inst, run.solution);
  ASSERT_EQ(mix.technologies[0].name, "wind");
  EXPECT_GE(mix.technologies[0].energy_share, 99.0);
}

}  // namespace
}  // namespace ewnexus
