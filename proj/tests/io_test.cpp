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

#include "ewnexus/io.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <nlohmann/json.hpp>
#include <sstream>

#include "ewnexus/synthetic.hpp"

namespace ewnexus {
namespace {

using nlohmann::json;

const std::string kData = EWNEXUS_DATA;

ConfigError csv_error(const std::string& text) {
  try {
    parse_csv_series(text, "t.csv");
  } catch (const ConfigError& e) {
    return e;
  }
  ADD_FAILURE() << "no error for: " << text;
  return ConfigError("", 0, 0, "", "");
}

ConfigError config_error(const std::string& text) {
  try {
    parse_config(text, "c.json", kData);
  } catch (const ConfigError& e) {
    return e;
  }
  ADD_FAILURE() << "no error for: " << text;
  return ConfigError("", 0, 0, "", "");
}

// A small config with inline series and a ready surrogate.
json inline_config() {
  return json::parse(R"({
    "grid": {"horizon_steps": 4},
    "technologies": [{
      "name": "pv",
      "surrogate": {"cost_slope": 0.05, "per_unit_profile": [0, 20, 30, 0], "max_units": 50}
    }],
    "demands": {"power": [5, 5, 5, 5], "water": [100, 100, 100, 100]}
  })");
}

TEST(CsvTest, ParsesAfterHeader) {
  TimeSeries s = parse_csv_series("step,value\n0,1.5\n1, 2\n\n2,-3e2\r\n", "t.csv");
  EXPECT_EQ(s, (TimeSeries{1.5, 2.0, -300.0}));
}

TEST(CsvTest, ErrorsCarryLineAndColumn) {
  ConfigError e = csv_error("step,value\n0,1\n1,abc\n");
  EXPECT_EQ(e.line(), 3);
  EXPECT_EQ(e.column(), 3);
  EXPECT_EQ(e.source(), "t.csv");
  EXPECT_NE(std::string(e.what()).find("abc"), std::string::npos);

  e = csv_error("step,value\n0,   7x\n");
  EXPECT_EQ(e.line(), 2);
  EXPECT_EQ(e.column(), 6);

  e = csv_error("step,value\n0,1\n12\n");
  EXPECT_EQ(e.line(), 3);

  e = csv_error("step,value\n0,1,2\n");
  EXPECT_EQ(e.line(), 2);
  EXPECT_EQ(e.column(), 4);

  e = csv_error("");
  EXPECT_EQ(e.line(), 1);
  EXPECT_NE(std::string(e.what()).find("header"), std::string::npos);

  e = csv_error("step,value\n0,inf\n");
  EXPECT_EQ(e.line(), 2);
}

TEST(CsvTest, FitToHorizonRepeatsOrTruncates) {
  EXPECT_EQ(fit_to_horizon({1, 2, 3}, 7), (TimeSeries{1, 2, 3, 1, 2, 3, 1}));
  EXPECT_EQ(fit_to_horizon({1, 2, 3}, 2), (TimeSeries{1, 2}));
  EXPECT_TRUE(fit_to_horizon({}, 4).empty());
}

TEST(ConfigTest, InlineConfigLoads) {
  LoadedConfig c = parse_config(inline_config().dump(), "c.json", kData);
  const NexusInstance& inst = c.instance;
  EXPECT_EQ(inst.grid.horizon_steps, 4);
  ASSERT_EQ(inst.technologies.size(), 1u);
  EXPECT_EQ(inst.technologies[0].per_unit_profile, (TimeSeries{0, 20, 30, 0}));
  EXPECT_DOUBLE_EQ(inst.technologies[0].per_unit_energy, 50.0 * 8760.0 / 4.0);
  // Defaults to the summed hourly demand.
  EXPECT_DOUBLE_EQ(inst.demands.power_total_target, 20.0);
  EXPECT_TRUE(inst.storage_techs.empty());
  EXPECT_FALSE(c.technologies[0].unit.has_value());
  EXPECT_EQ(inst.mode, SolveMode::kFullTimeDependent);
}

TEST(ConfigTest, OptionsOverrideConfig) {
  LoadOptions o;
  o.horizon_steps = 6;
  o.mode = SolveMode::kSteadyStateWater;
  o.water_basis = WaterBasis::kPermeate;
  LoadedConfig c = parse_config(inline_config().dump(), "c.json", kData, o);
  EXPECT_EQ(c.instance.grid.horizon_steps, 6);
  EXPECT_EQ(c.instance.technologies[0].per_unit_profile, (TimeSeries{0, 20, 30, 0, 0, 20}));
  EXPECT_EQ(c.instance.mode, SolveMode::kSteadyStateWater);
  EXPECT_EQ(c.instance.epsilon_water_basis, WaterBasis::kPermeate);
}

TEST(ConfigTest, SyntaxErrorPosition) {
  std::string text = "{\n  \"grid\": {\"horizon_steps\": 4},\n  \"mode\": full\n}\n";
  ConfigError e = config_error(text);
  EXPECT_EQ(e.line(), 3);
  EXPECT_EQ(e.column(), 12);  // the "u": "f" could still start "false"
  EXPECT_EQ(e.source(), "c.json");
}

TEST(ConfigTest, SchemaErrorsNamePath) {
  json j = inline_config();
  j["technologies"][0]["colour"] = "red";
  ConfigError e = config_error(j.dump());
  EXPECT_EQ(e.where(), "/technologies/0/colour");
  EXPECT_EQ(e.line(), 0);

  j = inline_config();
  j["demands"].erase("water");
  EXPECT_EQ(config_error(j.dump()).where(), "/demands/water");

  j = inline_config();
  j["grid"]["horizon_steps"] = "four";
  EXPECT_EQ(config_error(j.dump()).where(), "/grid/horizon_steps");

  j = inline_config();
  j["mode"] = "hourly";
  EXPECT_EQ(config_error(j.dump()).where(), "/mode");

  j = inline_config();
  j["technologies"][0]["unit"] = json::object();
  EXPECT_NE(std::string(config_error(j.dump()).what()).find("exactly one"), std::string::npos);
}

TEST(ConfigTest, MissingCsvReported) {
  json j = inline_config();
  j["demands"]["water"] = "no_such_file.csv";
  ConfigError e = config_error(j.dump());
  EXPECT_NE(e.source().find("no_such_file.csv"), std::string::npos);
}

TEST(ConfigTest, InvalidInstanceSurfaces) {
  json j = inline_config();
  j["ro"] = {{"wr_limit", 1.5}};
  EXPECT_THROW(parse_config(j.dump(), "c.json", kData), InvalidInstance);
}

TEST(ConfigTest, InitialLevelFixesTank) {
  json j = inline_config();
  j["water_tank"] = {{"initial_level", 250.0}};
  LoadedConfig c = parse_config(j.dump(), "c.json", kData);
  EXPECT_FALSE(c.instance.water_tank.initial_level_free);
  EXPECT_EQ(c.instance.water_tank.initial_level, 250.0);
}

void expect_close(const TimeSeries& a, const TimeSeries& b, const char* what) {
  ASSERT_EQ(a.size(), b.size()) << what;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(a[i], b[i], 1e-9 * std::max(1.0, std::abs(b[i]))) << what << "[" << i << "]";
  }
}

TEST(BundledDataTest, DayConfigMatchesGenerator) {
  LoadedConfig c = load_config(kData + "/day.json");
  NexusInstance want = make_synthetic_instance(SyntheticOptions{});
  const NexusInstance& got = c.instance;
  EXPECT_EQ(got.grid.horizon_steps, want.grid.horizon_steps);
  ASSERT_EQ(got.technologies.size(), want.technologies.size());
  for (std::size_t k = 0; k < want.technologies.size(); ++k) {
    const TechnologySurrogate& a = got.technologies[k];
    const TechnologySurrogate& b = want.technologies[k];
    EXPECT_EQ(a.name, b.name);
    EXPECT_NEAR(a.cost_slope, b.cost_slope, 1e-9 * b.cost_slope);
    EXPECT_NEAR(a.cost_intercept, b.cost_intercept, 1e-6 * std::max(1.0, b.cost_intercept));
    EXPECT_NEAR(a.land_slope, b.land_slope, 1e-9 * b.land_slope);
    EXPECT_EQ(a.max_units, b.max_units);
    expect_close(a.per_unit_profile, b.per_unit_profile, "profile");
  }
  expect_close(got.demands.power_demand, want.demands.power_demand, "power");
  expect_close(got.demands.water_demand, want.demands.water_demand, "water");
  expect_close(got.demands.greenhouse_power_profile, want.demands.greenhouse_power_profile, "gh power");
  EXPECT_NEAR(got.demands.power_total_target, want.demands.power_total_target, 1e-6);
  EXPECT_EQ(got.storage_techs.size(), 1u);
  EXPECT_EQ(got.ro.ec_input_scaling.scale, want.ro.ec_input_scaling.scale);
  EXPECT_EQ(got.ro.ec_output_scaling.offset, want.ro.ec_output_scaling.offset);
}

TEST(BundledDataTest, TightWaterConfigLoads) {
  LoadedConfig c = load_config(kData + "/tight_water.json");
  EXPECT_EQ(c.instance.grid.horizon_steps, 48);
  EXPECT_EQ(c.instance.technologies.size(), 1u);
  EXPECT_TRUE(validate_instance(c.instance).empty());
}

Solution sample_solution() {
  Solution s;
  s.status = SolveStatus::kOptimal;
  s.objective = 1234.5678901234567;
  s.unit_counts = {3, 0};
  s.tech_built = {1, 0};
  s.storage_capacities = {12.25};
  s.initial_soc = {1.0 / 3.0};
  s.tank_volume = 800;
  s.tank_built = 1;
  s.qp_capacity = 975.125;
  s.initial_volume = 10;
  s.power = {1, 2};
  s.ec = {0.1, 0.2};
  s.p_stor = {{0, 1}};
  s.p_rel = {{1, 0}};
  s.soc = {{2, 3}};
  s.q_f = {1000, 1001};
  s.q_p = {600, 601};
  s.wr = {TimeSeries{0.3, 0.31}, TimeSeries{0.29, 0.28}, TimeSeries{0.18, 0.17}};
  s.wr_sys = {0.6, 0.61};
  s.q_stor = {0, 5};
  s.q_rel = {5, 0};
  s.volume = {5, 10};
  s.feed_pressure = {TimeSeries{10, 11}, TimeSeries{9, 9}, TimeSeries{8, 7}};
  s.costs.technology = {100.5, 0};
  s.costs.storage = {7};
  s.costs.ro_investment = 1e6;
  s.costs.ro_operation = 2.5e5;
  s.costs.tank = 200;
  return s;
}

TEST(SolutionJsonTest, RoundTrip) {
  Solution s = sample_solution();
  Solution back = solution_from_json(solution_to_json(s, nullptr), "s.json");
  EXPECT_EQ(back.status, s.status);
  EXPECT_EQ(back.objective, s.objective);
  EXPECT_EQ(back.unit_counts, s.unit_counts);
  EXPECT_EQ(back.initial_soc, s.initial_soc);
  EXPECT_EQ(back.qp_capacity, s.qp_capacity);
  EXPECT_EQ(back.soc, s.soc);
  EXPECT_EQ(back.wr, s.wr);
  EXPECT_EQ(back.volume, s.volume);
  EXPECT_EQ(back.feed_pressure, s.feed_pressure);
  EXPECT_EQ(back.costs.technology, s.costs.technology);
  EXPECT_EQ(back.costs.ro_operation, s.costs.ro_operation);
  EXPECT_EQ(solution_to_json(back, nullptr), solution_to_json(s, nullptr));
}

TEST(SolutionJsonTest, MalformedRejected) {
  EXPECT_THROW(solution_from_json("{\"status\": \"optimal\"", "s.json"), ConfigError);
  EXPECT_THROW(solution_from_json("{\"status\": \"optimal\"}", "s.json"), ConfigError);
}

int count_lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

TEST(CsvOutputTest, ShapesAndHeaders) {
  TimeGrid g{2, 1.0};
  std::string tank = tank_level_csv(g, {"full", "steady"}, {{1, 2}, {0, 0}});
  EXPECT_EQ(tank.substr(0, tank.find('\n')), "hour,full,steady");
  EXPECT_EQ(count_lines(tank), 3);

  SweepTable t;
  t.rows.resize(4);
  EXPECT_EQ(count_lines(sweep_csv(t)), 5);

  std::string size = size_report_json(ModelSize{10, 8, 3, 1}, 24);
  json j = json::parse(size);
  EXPECT_EQ(j["rows"], 10);
  EXPECT_EQ(j["binaries"], 3);
  EXPECT_EQ(size, size_report_json(ModelSize{10, 8, 3, 1}, 24));
}

}  // namespace
}  // namespace ewnexus
