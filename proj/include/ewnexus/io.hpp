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

// Instance configuration (JSON referencing CSV time series) and result
// files. The schema is documented in the README.

#ifndef EWNEXUS_IO_HPP_
#define EWNEXUS_IO_HPP_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ewnexus/model.hpp"
#include "ewnexus/sweep.hpp"
#include "ewnexus/validator.hpp"

namespace ewnexus {

// `line`/`column` are 1-based, 0 when the error has no text position (a
// missing key, say); `where` then holds the JSON path.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string source, int line, int column, std::string where,
              const std::string& message);
  const std::string& source() const { return source_; }
  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& where() const { return where_; }

 private:
  std::string source_;
  int line_;
  int column_;
  std::string where_;
};

// Two columns, "index,value", after a mandatory header row.
TimeSeries parse_csv_series(std::string_view text, const std::string& source);
TimeSeries read_csv_series(const std::string& path);

// Repeats `series` cyclically (or truncates it) to `steps` values.
TimeSeries fit_to_horizon(const TimeSeries& series, int steps);

struct LoadOptions {
  std::optional<int> horizon_steps;
  std::optional<SolveMode> mode;
  std::optional<WaterBasis> water_basis;
};

// Technology as configured: either raw unit data to be fitted or a ready
// surrogate.
struct ConfiguredTechnology {
  std::optional<TechnologyUnitModel> unit;
  TimeSeries resource;
  std::vector<double> targets;  // kWh/yr, for fitting
};

struct LoadedConfig {
  NexusInstance instance;
  std::vector<ConfiguredTechnology> technologies;  // parallel to instance
};

// Reads and validates the config; CSV paths are relative to the config file.
// Unit models are fitted into surrogates here. Throws ConfigError on syntax or
// schema problems and InvalidInstance when the assembled instance is invalid.
LoadedConfig load_config(const std::string& path, const LoadOptions& options = {});
LoadedConfig parse_config(std::string_view text, const std::string& source,
                          const std::string& base_dir, const LoadOptions& options = {});

std::string solution_to_json(const Solution& solution, const ValidationReport* report);
Solution solution_from_json(std::string_view text, const std::string& source);

std::string timeseries_csv(const NexusInstance& instance, const Solution& solution);
// Per-technology annual energy and cost.
std::string energy_mix_csv(const EnergyMixReport& mix);
// Tank level per hour; one column per named trace.
std::string tank_level_csv(const TimeGrid& grid, const std::vector<std::string>& names,
                           const std::vector<TimeSeries>& traces);
std::string cost_breakdown_csv(const NexusInstance& instance, const CostBreakdown& costs);
std::string sweep_csv(const SweepTable& table);
std::string surrogates_csv(const NexusInstance& instance);
std::string size_report_json(const ModelSize& size, int horizon_steps);

}  // namespace ewnexus

#endif  // EWNEXUS_IO_HPP_
