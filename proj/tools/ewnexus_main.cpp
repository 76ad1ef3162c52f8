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

// ewnexus command-line driver. Every flag can also come from the environment
// as EWNEXUS_<FLAG>, e.g. EWNEXUS_TIME_LIMIT=30.

#include <fmt/format.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "ewnexus/io.hpp"
#include "ewnexus/lp_format.hpp"
#include "ewnexus/nexus_builder.hpp"
#include "ewnexus/sweep.hpp"
#include "ewnexus/validator.hpp"

namespace fs = std::filesystem;
using namespace ewnexus;

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kConfig = 2, kInfeasible = 3, kLimit = 4 };

struct Options {
  std::string config;
  std::string out = "results";
  std::string mode;
  std::string basis;
  std::string branching = "pseudo-cost";
  int horizon_steps = 0;
  std::uint64_t seed = 0;
  double time_limit = 0.0;
  double gap = 1e-6;
  int workers = 1;
  std::optional<double> epsilon_land;
  std::optional<double> epsilon_water;
  std::vector<double> land = {1.0};
  std::vector<double> water = {1.0};
  double water_fraction = 0.99;
  std::string solution;
};

std::string env_name(const std::string& flag) {
  std::string out = "EWNEXUS_";
  for (char c : flag) out += c == '-' ? '_' : static_cast<char>(std::toupper(c));
  return out;
}

template <typename T>
CLI::Option* flag(CLI::App* app, const std::string& name, T& target, const std::string& help) {
  return app->add_option("--" + name, target, help)->envname(env_name(name));
}

void add_common(CLI::App* app, Options& o) {
  flag(app, "config", o.config, "instance config (JSON)")->required()->check(CLI::ExistingFile);
  flag(app, "mode", o.mode, "full | steady (overrides the config)")
      ->check(CLI::IsMember({"full", "steady"}));
  flag(app, "horizon-steps", o.horizon_steps, "override the number of time steps")
      ->check(CLI::PositiveNumber);
  flag(app, "epsilon-water-basis", o.basis, "feed | permeate")
      ->check(CLI::IsMember({"feed", "permeate"}));
  flag(app, "out", o.out, "output directory");
  flag(app, "seed", o.seed, "solver tie-break seed");
  flag(app, "time-limit", o.time_limit, "seconds per MILP solve, 0 = none")
      ->check(CLI::NonNegativeNumber);
  flag(app, "gap", o.gap, "relative optimality gap")->check(CLI::NonNegativeNumber);
  flag(app, "workers", o.workers, "parallel grid points (1 = deterministic)")
      ->check(CLI::PositiveNumber);
  flag(app, "branching", o.branching, "most-fractional | pseudo-cost")
      ->check(CLI::IsMember({"most-fractional", "pseudo-cost"}));
  flag(app, "epsilon-land", o.epsilon_land, "absolute land limit [ha]");
  flag(app, "epsilon-water", o.epsilon_water, "absolute water limit [m3 per horizon]");
}

LoadedConfig load(const Options& o) {
  LoadOptions lo;
  if (o.horizon_steps > 0) lo.horizon_steps = o.horizon_steps;
  if (o.mode == "full") lo.mode = SolveMode::kFullTimeDependent;
  if (o.mode == "steady") lo.mode = SolveMode::kSteadyStateWater;
  if (o.basis == "feed") lo.water_basis = WaterBasis::kFeed;
  if (o.basis == "permeate") lo.water_basis = WaterBasis::kPermeate;
  LoadedConfig c = load_config(o.config, lo);
  if (o.epsilon_land) c.instance.epsilon_land = *o.epsilon_land;
  if (o.epsilon_water) c.instance.epsilon_water = *o.epsilon_water;
  return c;
}

SolverConfig solver_config(const Options& o) {
  SolverConfig c = default_nexus_solver_config();
  c.seed = o.seed;
  c.relative_gap = o.gap;
  c.workers = 1;
  if (o.time_limit > 0.0) c.time_limit_seconds = o.time_limit;
  c.branching = o.branching == "most-fractional" ? Branching::kMostFractional
                                                  : Branching::kPseudoCost;
  return c;
}

void write(const Options& o, const std::string& name, const std::string& text) {
  fs::create_directories(o.out);
  std::ofstream f(fs::path(o.out) / name, std::ios::binary);
  f << text;
  if (!f) throw std::runtime_error("cannot write " + (fs::path(o.out) / name).string());
}

int status_exit(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return kOk;
    case SolveStatus::kInfeasible:
    case SolveStatus::kUnbounded: return kInfeasible;
    default: return kLimit;
  }
}

int run_fit(const Options& o) {
  LoadedConfig c = load(o);
  std::string csv = surrogates_csv(c.instance);
  write(o, "surrogates.csv", csv);
  std::cout << csv;
  return kOk;
}

int run_build(const Options& o) {
  LoadedConfig c = load(o);
  BuildArtifacts art = build(c.instance);
  std::string size = size_report_json(art.size, c.instance.grid.horizon_steps);
  write(o, "model.lp", export_lp(art.model));
  write(o, "size.json", size);
  std::cout << fmt::format("rows {} continuous {} binaries {} integers {}\n", art.size.rows,
                           art.size.continuous, art.size.binaries, art.size.integers);
  return kOk;
}

int run_solve(const Options& o) {
  LoadedConfig c = load(o);
  const NexusInstance& inst = c.instance;
  NexusRun run = solve_nexus(inst, solver_config(o));
  std::cout << fmt::format("status {} nodes {} seconds {:.2f}\n", to_string(run.status), run.nodes,
                           run.seconds);
  if (!run.note.empty()) std::cout << run.note << "\n";
  if (!run.has_solution()) return status_exit(run.status);
  const ValidationReport& rep = *run.validation;
  write(o, "solution.json", solution_to_json(run.solution, &rep));
  write(o, "timeseries.csv", timeseries_csv(inst, run.solution));
  write(o, "cost_breakdown.csv", cost_breakdown_csv(inst, run.solution.costs));
  write(o, "tank_level.csv", tank_level_csv(inst.grid, {"volume"}, {run.solution.volume}));
  write(o, "validation.txt", rep.summary() + "\n");
  std::cout << fmt::format("objective {:.6f}\nvalidation {}\n", run.solution.objective,
                           rep.summary());
  if (!rep.pass) return kFailure;
  write(o, "energy_mix.csv", energy_mix_csv(energy_mix_report(inst, run.solution)));
  return status_exit(run.status);
}

int run_sweep(const Options& o) {
  LoadedConfig c = load(o);
  SweepTable table;
  try {
    table = epsilon_sweep(c.instance, o.land, o.water, solver_config(o), o.workers);
  } catch (const SweepAborted& e) {
    std::cerr << e.what() << "\n";
    return kInfeasible;
  }
  std::string csv = sweep_csv(table);
  write(o, "sweep.csv", csv);
  std::cout << fmt::format("baseline objective {:.6f} land {:.6f} water {:.6f}\n",
                           table.baseline_objective, table.baseline_land, table.baseline_water);
  std::cout << csv;
  auto bad = monotonicity_violations(table, o.land.size(), o.water.size());
  for (const std::string& b : bad) std::cerr << "non-monotone: " << b << "\n";
  return bad.empty() ? kOk : kFailure;
}

int run_study(const Options& o) {
  LoadedConfig c = load(o);
  StorageStudy s;
  try {
    s = storage_phenomenon_study(c.instance, o.water_fraction, solver_config(o));
  } catch (const SweepAborted& e) {
    std::cerr << e.what() << "\n";
    return kInfeasible;
  }
  nlohmann::ordered_json j;
  j["water_fraction"] = o.water_fraction;
  j["baseline_water"] = s.baseline_water;
  j["epsilon_water"] = s.epsilon_water;
  auto side = [](const NexusRun& r, double peak) {
    nlohmann::ordered_json x;
    x["status"] = to_string(r.status);
    if (r.has_solution()) {
      x["objective"] = r.solution.objective;
      x["tank_volume"] = r.solution.tank_volume;
      x["validated"] = r.validation->pass;
    }
    x["max_volume"] = peak;
    return x;
  };
  j["full"] = side(s.full, s.full_max_volume);
  j["steady"] = side(s.steady, s.steady_max_volume);
  j["storage_used"] = s.storage_used;
  if (s.upper_bound_gap) j["upper_bound_gap"] = *s.upper_bound_gap;
  write(o, "study.json", j.dump(2) + "\n");
  write(o, "tank_level.csv",
        tank_level_csv(c.instance.grid, {"full", "steady"},
                       {s.full.solution.volume, s.steady.solution.volume}));
  std::cout << j.dump(2) << "\n";
  return kOk;
}

int run_validate(const Options& o) {
  LoadedConfig c = load(o);
  std::ifstream f(o.solution, std::ios::binary);
  if (!f) throw ConfigError(o.solution, 0, 0, "", "cannot open file");
  std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  Solution s = solution_from_json(text, o.solution);
  ValidationReport rep = check_solution(c.instance, s);
  std::cout << rep.summary() << "\n";
  return rep.pass ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-water supply planning with a built-in MILP solver"};
  app.require_subcommand(1);
  Options o;

  CLI::App* fit = app.add_subcommand("fit-surrogates", "fit technology cost/land lines");
  CLI::App* bld = app.add_subcommand("build", "write the LP file and size report");
  CLI::App* slv = app.add_subcommand("solve", "solve, validate and write results");
  CLI::App* swp = app.add_subcommand("sweep", "epsilon grid over land and water limits");
  CLI::App* std_ = app.add_subcommand("study-storage", "full vs steady-state tank comparison");
  CLI::App* val = app.add_subcommand("validate", "check a solution file against a config");
  val->group("");
  for (CLI::App* a : {fit, bld, slv, swp, std_, val}) add_common(a, o);
  flag(swp, "land", o.land, "land fractions of the unrestricted use")->delimiter(',');
  flag(swp, "water", o.water, "water fractions of the unrestricted use")->delimiter(',');
  flag(std_, "water-fraction", o.water_fraction, "water limit as a fraction of baseline use");
  flag(val, "solution", o.solution, "solution.json to check")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }
  try {
    if (*fit) return run_fit(o);
    if (*bld) return run_build(o);
    if (*slv) return run_solve(o);
    if (*swp) return run_sweep(o);
    if (*std_) return run_study(o);
    if (*val) return run_validate(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const InvalidInstance& e) {
    std::cerr << "invalid instance:\n";
    for (const std::string& err : e.errors()) std::cerr << "  " << err << "\n";
    return kConfig;
  } catch (const GuaranteedInfeasible& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}
