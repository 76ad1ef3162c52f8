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

#include "ewnexus/sweep.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "ewnexus/nexus_builder.hpp"

namespace ewnexus {

SolverConfig default_nexus_solver_config() {
  SolverConfig c;
  c.branching = Branching::kPseudoCost;
  return c;
}

NexusRun solve_nexus(const NexusInstance& instance, const SolverConfig& config,
                     double validation_tol) {
  NexusRun run;
  BuildArtifacts art;
  try {
    art = build(instance);
  } catch (const GuaranteedInfeasible& e) {
    run.status = SolveStatus::kInfeasible;
    run.note = e.what();
    return run;
  }
  run.size = art.size;
  MilpResult result = solve_milp(art.model, config);
  run.status = result.status;
  run.nodes = result.nodes;
  run.seconds = result.seconds;
  run.solution = extract_solution(art, result);
  if (run.has_solution()) {
    run.validation = check_solution(art.instance, run.solution, validation_tol);
  }
  return run;
}

namespace {

void check_fractions(const std::vector<double>& f, const char* what) {
  if (f.empty()) throw std::invalid_argument(fmt::format("{} fractions are empty", what));
  for (double x : f) {
    if (!(x > 0.0 && x <= 1.0)) {
      throw std::invalid_argument(fmt::format("{} fraction {} outside (0, 1]", what, x));
    }
  }
}

// Runs body(i) for i in [0, n) on up to `workers` threads.
template <typename F>
void parallel_for(std::size_t n, int workers, F body) {
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < std::min<int>(workers, static_cast<int>(n)); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) body(i);
    });
  }
  for (std::thread& t : pool) t.join();
}

NexusRun unrestricted(const NexusInstance& instance, const SolverConfig& config) {
  NexusInstance open = instance;
  open.epsilon_land.reset();
  open.epsilon_water.reset();
  NexusRun run = solve_nexus(open, config);
  if (run.status != SolveStatus::kOptimal) {
    throw SweepAborted(fmt::format("unrestricted instance '{}' ended {}{}", instance.name,
                                   to_string(run.status),
                                   run.note.empty() ? "" : ": " + run.note));
  }
  if (!run.validation->pass) {
    throw SweepAborted(fmt::format("unrestricted solution of '{}' failed validation: {}",
                                   instance.name, run.validation->summary()));
  }
  return run;
}

}  // namespace

SweepTable epsilon_sweep(const NexusInstance& instance, const std::vector<double>& land_fractions,
                         const std::vector<double>& water_fractions, const SolverConfig& config,
                         int workers) {
  check_fractions(land_fractions, "land");
  check_fractions(water_fractions, "water");
  NexusRun base = unrestricted(instance, config);
  SweepTable table;
  table.baseline_objective = base.solution.objective;
  table.baseline_land = land_use(instance, base.solution);
  table.baseline_water = water_use(instance, base.solution);

  for (double fl : land_fractions) {
    for (double fw : water_fractions) {
      SweepRow row;
      row.land_fraction = fl;
      row.water_fraction = fw;
      row.epsilon_land = fl * table.baseline_land;
      row.epsilon_water = fw * table.baseline_water;
      table.rows.push_back(row);
    }
  }
  parallel_for(table.rows.size(), workers, [&](std::size_t i) {
    SweepRow& row = table.rows[i];
    NexusInstance inst = instance;
    // A zero baseline leaves nothing to restrict.
    inst.epsilon_land = row.epsilon_land > 0.0 ? std::optional(row.epsilon_land) : std::nullopt;
    inst.epsilon_water = row.epsilon_water > 0.0 ? std::optional(row.epsilon_water) : std::nullopt;
    NexusRun run = solve_nexus(inst, config);
    row.status = run.status;
    row.nodes = run.nodes;
    row.note = run.note;
    if (!run.has_solution()) return;
    row.objective = run.solution.objective;
    row.land_use = land_use(inst, run.solution);
    row.water_use = water_use(inst, run.solution);
    row.validated = run.validation->pass;
    if (row.validated) row.mix = energy_mix_report(inst, run.solution);
  });
  return table;
}

std::vector<std::string> monotonicity_violations(const SweepTable& table, std::size_t land_count,
                                                 std::size_t water_count, double rel_tol) {
  auto value = [&](std::size_t i, std::size_t j) {
    const SweepRow& r = table.rows.at(i * water_count + j);
    return r.status == SolveStatus::kOptimal ? r.objective : kInf;
  };
  auto fraction = [&](std::size_t i, std::size_t j) { return table.rows.at(i * water_count + j); };
  std::vector<std::string> out;
  for (std::size_t a = 0; a < land_count * water_count; ++a) {
    for (std::size_t b = 0; b < land_count * water_count; ++b) {
      std::size_t ia = a / water_count, ja = a % water_count;
      std::size_t ib = b / water_count, jb = b % water_count;
      const SweepRow& ra = fraction(ia, ja);
      const SweepRow& rb = fraction(ib, jb);
      // b is looser than a in both limits.
      if (a == b || rb.land_fraction < ra.land_fraction || rb.water_fraction < ra.water_fraction) {
        continue;
      }
      double va = value(ia, ja);
      double vb = value(ib, jb);
      if (std::isinf(vb)) {
        if (!std::isinf(va)) {
          out.push_back(fmt::format("({}, {}) solved but looser ({}, {}) did not", ra.land_fraction,
                                    ra.water_fraction, rb.land_fraction, rb.water_fraction));
        }
        continue;
      }
      if (vb > va + rel_tol * std::max(1.0, std::fabs(va))) {
        out.push_back(fmt::format("objective {} at ({}, {}) exceeds {} at tighter ({}, {})", vb,
                                  rb.land_fraction, rb.water_fraction, va, ra.land_fraction,
                                  ra.water_fraction));
      }
    }
  }
  return out;
}

StorageStudy storage_phenomenon_study(const NexusInstance& instance, double water_fraction,
                                      const SolverConfig& config) {
  if (!(water_fraction > 0.0 && water_fraction <= 1.0)) {
    throw std::invalid_argument(fmt::format("water fraction {} outside (0, 1]", water_fraction));
  }
  NexusInstance full = instance;
  full.mode = SolveMode::kFullTimeDependent;
  NexusRun base = unrestricted(full, config);

  StorageStudy study;
  study.baseline_water = water_use(full, base.solution);
  study.epsilon_water = water_fraction * study.baseline_water;
  full.epsilon_land.reset();
  full.epsilon_water = study.epsilon_water;
  NexusInstance steady = full;
  steady.mode = SolveMode::kSteadyStateWater;

  study.full = solve_nexus(full, config);
  study.steady = solve_nexus(steady, config);
  if (!study.full.has_solution() && !study.steady.has_solution()) {
    throw SweepAborted(fmt::format("storage study: full mode ended {}, steady mode ended {}",
                                   to_string(study.full.status), to_string(study.steady.status)));
  }
  auto peak = [](const NexusRun& r) {
    if (!r.has_solution() || r.solution.volume.empty()) return 0.0;
    return *std::max_element(r.solution.volume.begin(), r.solution.volume.end());
  };
  study.full_max_volume = peak(study.full);
  study.steady_max_volume = peak(study.steady);
  study.storage_used = study.full.has_solution() && study.full_max_volume > kTankUseThreshold;
  if (study.full.status == SolveStatus::kOptimal && study.steady.status == SolveStatus::kOptimal) {
    study.upper_bound_gap = study.steady.solution.objective - study.full.solution.objective;
  }
  return study;
}

}  // namespace ewnexus
