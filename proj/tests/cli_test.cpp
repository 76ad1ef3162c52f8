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

// Runs the built binary as a user would.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

const std::string kCli = EWNEXUS_CLI;
const std::string kData = EWNEXUS_DATA;

struct Invocation {
  int code = -1;
  std::string out;  // stdout and stderr
};

Invocation run(const std::string& args, const std::string& env = "") {
  std::string cmd = env + " " + kCli + " " + args + " 2>&1";
  Invocation r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ewnexus_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string out(const std::string& sub) const { return (dir_ / sub).string(); }
  fs::path dir_;
};

const std::string kDay = kData + "/day.json";

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("solve").code, 2);
  EXPECT_EQ(run("solve --config /no/such/file.json").code, 2);
  EXPECT_EQ(run("solve --config " + kDay + " --mode hourly").code, 2);
  EXPECT_EQ(run("--help").code, 0);
}

TEST_F(CliTest, ConfigSyntaxErrorShowsPosition) {
  fs::path bad = dir_ / "bad.json";
  std::ofstream(bad) << "{\n  \"grid\": {\"horizon_steps\": 4,}\n}\n";
  Invocation r = run("build --config " + bad.string() + " --out " + out("o"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("bad.json:2:"), std::string::npos) << r.out;
}

TEST_F(CliTest, BuildIsByteIdentical) {
  ASSERT_EQ(run("build --config " + kDay + " --out " + out("a")).code, 0);
  ASSERT_EQ(run("build --config " + kDay + " --out " + out("b")).code, 0);
  for (const char* f : {"model.lp", "size.json"}) {
    std::string a = slurp(dir_ / "a" / f);
    EXPECT_FALSE(a.empty()) << f;
    EXPECT_EQ(a, slurp(dir_ / "b" / f)) << f;
  }
  auto size = nlohmann::json::parse(slurp(dir_ / "a" / "size.json"));
  EXPECT_EQ(size["rows"], 450);
  EXPECT_EQ(size["binaries"], 51);
}

TEST_F(CliTest, SolveThenValidate) {
  Invocation r = run("solve --config " + kDay + " --mode steady --out " + out("s"));
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("validation PASS"), std::string::npos) << r.out;
  for (const char* f : {"solution.json", "timeseries.csv", "cost_breakdown.csv", "tank_level.csv",
                        "validation.txt", "energy_mix.csv"}) {
    EXPECT_TRUE(fs::exists(dir_ / "s" / f)) << f;
  }
  std::string solution = out("s/solution.json");
  r = run("validate --config " + kDay + " --mode steady --solution " + solution);
  EXPECT_EQ(r.code, 0) << r.out;

  // Same solution against full mode still passes: it is feasible there too.
  EXPECT_EQ(run("validate --config " + kDay + " --mode full --solution " + solution).code, 0);

  auto j = nlohmann::json::parse(slurp(solution));
  j["objective"] = j["objective"].get<double>() * 1.01;
  std::ofstream(dir_ / "tampered.json") << j.dump();
  r = run("validate --config " + kDay + " --mode steady --solution " + out("tampered.json"));
  EXPECT_EQ(r.code, 1) << r.out;
  EXPECT_NE(r.out.find("objective"), std::string::npos);
}

TEST_F(CliTest, EnvironmentOverridesFlags) {
  Invocation r = run("solve --config " + kDay + " --out " + out("e"), "EWNEXUS_MODE=steady EWNEXUS_GAP=1e-4");
  ASSERT_EQ(r.code, 0) << r.out;
  auto j = nlohmann::json::parse(slurp(dir_ / "e" / "solution.json"));
  const auto& qf = j["q_f"];
  for (const auto& v : qf) EXPECT_EQ(v, qf[0]);
}

TEST_F(CliTest, InfeasibleExitsThree) {
  Invocation r = run("solve --config " + kDay + " --mode steady --epsilon-water 100 --out " + out("i"));
  EXPECT_EQ(r.code, 3) << r.out;
  r = run("sweep --config " + kDay + " --mode steady --water 1,0.3 --out " + out("w"));
  EXPECT_EQ(r.code, 0) << r.out;
  std::string csv = slurp(dir_ / "w" / "sweep.csv");
  EXPECT_NE(csv.find("infeasible"), std::string::npos) << csv;
}

TEST_F(CliTest, TimeLimitExitsFour) {
  Invocation r = run("solve --config " + kDay + " --time-limit 0.000001 --out " + out("t"));
  EXPECT_EQ(r.code, 4) << r.out;
}

TEST_F(CliTest, FitSurrogatesWritesTable) {
  Invocation r = run("fit-surrogates --config " + kDay + " --out " + out("f"));
  ASSERT_EQ(r.code, 0) << r.out;
  std::string csv = slurp(dir_ / "f" / "surrogates.csv");
  EXPECT_NE(csv.find("wind"), std::string::npos);
  EXPECT_NE(csv.find("solar"), std::string::npos);
}

}  // namespace
