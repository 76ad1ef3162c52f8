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

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "ewnexus/surrogates.hpp"

namespace ewnexus {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

ConfigError::ConfigError(std::string source, int line, int column, std::string where,
                         const std::string& message)
    : std::runtime_error([&] {
        std::string pos = source;
        if (line > 0) pos += fmt::format(":{}:{}", line, column);
        if (!where.empty()) pos += fmt::format(" ({})", where);
        return pos + ": " + message;
      }()),
      source_(std::move(source)),
      line_(line),
      column_(column),
      where_(std::move(where)) {}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path, 0, 0, "", "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Strict JSON-path-aware reader over one object.
class Obj {
 public:
  Obj(const json& j, std::string path, const std::string& source)
      : j_(j), path_(std::move(path)), source_(source) {
    if (!j_.is_object()) fail("expected an object");
  }

  [[noreturn]] void fail(const std::string& msg, const std::string& key = "") const {
    throw ConfigError(source_, 0, 0, key.empty() ? path_ : path_ + "/" + key, msg);
  }

  bool has(const std::string& key) const {
    used_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }
  const json& at(const std::string& key) const {
    if (!has(key)) fail("missing required key", key);
    return j_.at(key);
  }
  std::string child(const std::string& key) const { return path_ + "/" + key; }

  double num(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_number()) fail("expected a number", key);
    return v.get<double>();
  }
  double num(const std::string& key, double fallback) const {
    return has(key) ? num(key) : fallback;
  }
  int integer(const std::string& key, int fallback) const {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_number_integer()) fail("expected an integer", key);
    return v.get<int>();
  }
  std::string str(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_string()) fail("expected a string", key);
    return v.get<std::string>();
  }
  std::string str(const std::string& key, const std::string& fallback) const {
    return has(key) ? str(key) : fallback;
  }
  std::vector<double> numbers(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_array()) fail("expected an array of numbers", key);
    std::vector<double> out;
    for (const json& x : v) {
      if (!x.is_number()) fail("expected an array of numbers", key);
      out.push_back(x.get<double>());
    }
    return out;
  }
  Obj object(const std::string& key) const { return Obj(at(key), child(key), source_); }

  // Call once every key has been read.
  void no_unknown_keys() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!used_.count(it.key())) fail("unknown key", it.key());
    }
  }

 private:
  const json& j_;
  std::string path_;
  const std::string& source_;
  mutable std::set<std::string> used_;
};

class ConfigReader {
 public:
  ConfigReader(const std::string& source, std::string base_dir, const LoadOptions& options)
      : source_(source), base_dir_(std::move(base_dir)), options_(options) {}

  LoadedConfig read(const json& root) {
    Obj top(root, "", source_);
    LoadedConfig out;
    NexusInstance& inst = out.instance;
    inst.name = top.str("name", "instance");
    if (top.has("grid")) {
      Obj g = top.object("grid");
      inst.grid.horizon_steps = g.integer("horizon_steps", 24);
      inst.grid.dt_hours = g.num("dt_hours", 1.0);
      g.no_unknown_keys();
    }
    if (options_.horizon_steps) inst.grid.horizon_steps = *options_.horizon_steps;
    if (inst.grid.horizon_steps <= 0) top.fail("horizon_steps must be positive", "grid");
    steps_ = inst.grid.horizon_steps;

    std::string mode = top.str("mode", "full");
    if (mode == "full") {
      inst.mode = SolveMode::kFullTimeDependent;
    } else if (mode == "steady") {
      inst.mode = SolveMode::kSteadyStateWater;
    } else {
      top.fail("mode must be \"full\" or \"steady\"", "mode");
    }
    if (options_.mode) inst.mode = *options_.mode;

    if (top.has("epsilon")) {
      Obj e = top.object("epsilon");
      if (e.has("land")) inst.epsilon_land = e.num("land");
      if (e.has("water")) inst.epsilon_water = e.num("water");
      std::string basis = e.str("water_basis", "feed");
      if (basis == "feed") {
        inst.epsilon_water_basis = WaterBasis::kFeed;
      } else if (basis == "permeate") {
        inst.epsilon_water_basis = WaterBasis::kPermeate;
      } else {
        e.fail("water_basis must be \"feed\" or \"permeate\"", "water_basis");
      }
      e.no_unknown_keys();
    }
    if (options_.water_basis) inst.epsilon_water_basis = *options_.water_basis;

    const json& techs = top.at("technologies");
    if (!techs.is_array()) top.fail("expected an array", "technologies");
    for (std::size_t i = 0; i < techs.size(); ++i) {
      Obj t(techs[i], fmt::format("/technologies/{}", i), source_);
      read_technology(t, inst, out.technologies);
    }
    if (top.has("storage")) {
      const json& st = top.at("storage");
      if (!st.is_array()) top.fail("expected an array", "storage");
      for (std::size_t i = 0; i < st.size(); ++i) {
        Obj s(st[i], fmt::format("/storage/{}", i), source_);
        StorageTech tech;
        tech.name = s.str("name");
        tech.efficiency = s.num("efficiency", tech.efficiency);
        tech.capex_per_capacity = s.num("capex_per_capacity");
        tech.opex_per_throughput = s.num("opex_per_throughput", 0.0);
        tech.lifespan_years = s.num("lifespan_years", tech.lifespan_years);
        tech.max_capacity = s.num("max_capacity", tech.max_capacity);
        s.no_unknown_keys();
        inst.storage_techs.push_back(tech);
      }
    }
    if (top.has("ro")) read_ro(top.object("ro"), inst.ro);
    read_demands(top.object("demands"), inst);
    if (top.has("water_tank")) {
      Obj w = top.object("water_tank");
      WaterTank& tank = inst.water_tank;
      tank.cost_slope = w.num("cost_slope", tank.cost_slope);
      tank.cost_intercept = w.num("cost_intercept", tank.cost_intercept);
      tank.life_years = w.num("life_years", tank.life_years);
      tank.max_volume = w.num("max_volume", tank.max_volume);
      if (w.has("initial_level")) {
        tank.initial_level_free = false;
        tank.initial_level = w.num("initial_level");
      }
      w.no_unknown_keys();
    }
    top.no_unknown_keys();
    require_valid(inst);
    return out;
  }

 private:
  // A series is a CSV path (relative to the config) or an inline array.
  TimeSeries series(const Obj& o, const std::string& key) {
    const json& v = o.at(key);
    TimeSeries raw;
    if (v.is_string()) {
      fs::path p = fs::path(base_dir_) / v.get<std::string>();
      raw = read_csv_series(p.string());
    } else {
      raw = o.numbers(key);
    }
    if (raw.empty()) o.fail("series is empty", key);
    return fit_to_horizon(raw, steps_);
  }

  void read_technology(const Obj& t, NexusInstance& inst,
                       std::vector<ConfiguredTechnology>& configured) {
    ConfiguredTechnology c;
    std::string name = t.str("name");
    bool has_unit = t.has("unit");
    bool has_surrogate = t.has("surrogate");
    if (has_unit == has_surrogate) t.fail("give exactly one of \"unit\" and \"surrogate\"");
    TechnologySurrogate s;
    if (has_unit) {
      Obj u = t.object("unit");
      TechnologyUnitModel unit;
      unit.name = name;
      unit.k_tech = u.num("k_tech");
      unit.k_land = u.num("k_land", 0.0);
      unit.area_tech = u.num("area_tech", 0.0);
      unit.area_spacing = u.num("area_spacing", 0.0);
      unit.max_units = u.integer("max_units", unit.max_units);
      if (u.has("unit_derate")) unit.unit_derate = u.numbers("unit_derate");
      Obj curve = u.object("power_curve");
      unit.power_curve.xs = curve.numbers("x");
      unit.power_curve.ys = curve.numbers("y");
      curve.no_unknown_keys();
      u.no_unknown_keys();
      const PowerCurve& pc = unit.power_curve;
      if (pc.xs.size() < 2 || pc.xs.size() != pc.ys.size() ||
          !std::is_sorted(pc.xs.begin(), pc.xs.end(), std::less_equal<>())) {
        t.fail("power_curve needs >= 2 strictly increasing x values and matching y", "unit");
      }
      c.resource = series(t, "resource");
      if (t.has("targets") && t.has("target_fractions")) {
        t.fail("give at most one of \"targets\" and \"target_fractions\"");
      }
      try {
        if (t.has("targets")) {
          c.targets = t.numbers("targets");
        } else {
          std::vector<double> f;
          if (t.has("target_fractions")) f = t.numbers("target_fractions");
          c.targets = fitting_targets(unit, c.resource, inst.grid, f);
        }
        s = fit_technology_surrogate(unit, c.resource, inst.grid, c.targets);
      } catch (const std::invalid_argument& e) {
        t.fail(e.what());
      }
      c.unit = unit;
    } else {
      Obj g = t.object("surrogate");
      s.name = name;
      s.cost_slope = g.num("cost_slope");
      s.cost_intercept = g.num("cost_intercept", 0.0);
      s.land_slope = g.num("land_slope", 0.0);
      s.land_intercept = g.num("land_intercept", 0.0);
      s.r_squared_cost = g.num("r_squared_cost", 1.0);
      s.r_squared_land = g.num("r_squared_land", 1.0);
      s.max_units = g.integer("max_units", s.max_units);
      s.per_unit_profile = series(g, "per_unit_profile");
      double e = 0.0;
      for (double p : s.per_unit_profile) e += p * inst.grid.dt_hours;
      s.per_unit_energy = e * inst.grid.annualization();
      g.no_unknown_keys();
    }
    s.name = name;
    if (t.has("water_per_unit")) s.water_per_unit = series(t, "water_per_unit");
    t.no_unknown_keys();
    inst.technologies.push_back(std::move(s));
    configured.push_back(std::move(c));
  }

  Interval pair(const Obj& o, const std::string& key) {
    std::vector<double> v = o.numbers(key);
    if (v.size() != 2) o.fail("expected [lo, hi]", key);
    return {v[0], v[1]};
  }

  AffineScaling scaling(const Obj& o) {
    AffineScaling s{o.numbers("scale"), o.numbers("offset")};
    o.no_unknown_keys();
    return s;
  }

  void read_ro(const Obj& r, RoPlantParams& ro) {
    if (r.has("nominal_point")) {
      Obj n = r.object("nominal_point");
      NominalPoint& np = ro.nominal_point;
      np.wr1 = n.num("wr1", np.wr1);
      np.wr2 = n.num("wr2", np.wr2);
      np.wr3 = n.num("wr3", np.wr3);
      np.wr_sys = n.num("wr_sys", np.wr_sys);
      np.qp = n.num("qp", np.qp);
      n.no_unknown_keys();
    }
    ro.wr_limit = r.num("wr_limit", ro.wr_limit);
    if (r.has("qf_bounds")) ro.qf_bounds = pair(r, "qf_bounds");
    if (r.has("wr_stage_bounds")) {
      const json& b = r.at("wr_stage_bounds");
      if (!b.is_array() || b.size() != 3) r.fail("expected three [lo, hi] pairs", "wr_stage_bounds");
      for (int k = 0; k < 3; ++k) {
        if (!b[k].is_array() || b[k].size() != 2 || !b[k][0].is_number() || !b[k][1].is_number()) {
          r.fail("expected three [lo, hi] pairs", "wr_stage_bounds");
        }
        ro.wr_stage_bounds[k] = {b[k][0].get<double>(), b[k][1].get<double>()};
      }
    }
    if (r.has("stage_affine_maps")) {
      const json& maps = r.at("stage_affine_maps");
      if (!maps.is_array()) r.fail("expected an array", "stage_affine_maps");
      ro.stage_affine_maps.clear();
      for (std::size_t k = 0; k < maps.size(); ++k) {
        Obj m(maps[k], fmt::format("{}/{}", r.child("stage_affine_maps"), k), source_);
        StageAffineMap map;
        map.recovery_intercept = m.num("recovery_intercept");
        map.recovery_slope = m.num("recovery_slope");
        map.retentate_intercept = m.num("retentate_intercept", 0.0);
        map.retentate_slope = m.num("retentate_slope", 1.0);
        map.feed_pressure = pair(m, "feed_pressure");
        m.no_unknown_keys();
        ro.stage_affine_maps.push_back(map);
      }
    }
    if (r.has("ec_network")) {
      const json& layers = r.at("ec_network");
      if (!layers.is_array()) r.fail("expected an array of layers", "ec_network");
      ro.ec_network.layers.clear();
      for (std::size_t k = 0; k < layers.size(); ++k) {
        Obj l(layers[k], fmt::format("{}/{}", r.child("ec_network"), k), source_);
        DenseLayer layer;
        const json& w = l.at("weights");
        if (!w.is_array()) l.fail("expected a matrix", "weights");
        for (const json& row : w) {
          if (!row.is_array()) l.fail("expected a matrix", "weights");
          std::vector<double> values;
          for (const json& x : row) {
            if (!x.is_number()) l.fail("expected a matrix", "weights");
            values.push_back(x.get<double>());
          }
          layer.weights.push_back(std::move(values));
        }
        layer.biases = l.numbers("biases");
        l.no_unknown_keys();
        ro.ec_network.layers.push_back(std::move(layer));
      }
    }
    if (r.has("ec_input_scaling")) ro.ec_input_scaling = scaling(r.object("ec_input_scaling"));
    if (r.has("ec_output_scaling")) ro.ec_output_scaling = scaling(r.object("ec_output_scaling"));
    ro.inv_cost_slope = r.num("inv_cost_slope", ro.inv_cost_slope);
    ro.inv_cost_intercept = r.num("inv_cost_intercept", ro.inv_cost_intercept);
    ro.op_cost_per_m3 = r.num("op_cost_per_m3", ro.op_cost_per_m3);
    ro.plant_life_years = r.num("plant_life_years", ro.plant_life_years);
    r.no_unknown_keys();
  }

  void read_demands(const Obj& d, NexusInstance& inst) {
    DemandSet& dem = inst.demands;
    dem.power_demand = series(d, "power");
    dem.water_demand = series(d, "water");
    dem.greenhouse_count = d.integer("greenhouse_count", 0);
    if (dem.greenhouse_count > 0) {
      dem.greenhouse_power_profile = series(d, "greenhouse_power");
      dem.greenhouse_water_profile = series(d, "greenhouse_water");
    } else {
      d.has("greenhouse_power");
      d.has("greenhouse_water");
    }
    if (d.has("power_total_target")) {
      dem.power_total_target = d.num("power_total_target");
    } else {
      dem.power_total_target = 0.0;
      for (int t = 0; t < steps_; ++t) dem.power_total_target += dem.power_at(t) * inst.grid.dt_hours;
    }
    d.no_unknown_keys();
  }

  const std::string& source_;
  std::string base_dir_;
  const LoadOptions& options_;
  int steps_ = 0;
};

json series_json(const TimeSeries& s) { return json(s); }

}  // namespace

TimeSeries parse_csv_series(std::string_view text, const std::string& source) {
  TimeSeries out;
  int line_no = 0;
  bool header = false;
  while (!text.empty()) {
    std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (trim(line).empty()) continue;
    if (!header) {
      header = true;
      continue;
    }
    std::size_t comma = line.find(',');
    if (comma == std::string_view::npos) {
      throw ConfigError(source, line_no, static_cast<int>(line.size()) + 1, "",
                        "expected two columns \"index,value\"");
    }
    std::string_view rest = line.substr(comma + 1);
    if (rest.find(',') != std::string_view::npos) {
      throw ConfigError(source, line_no, static_cast<int>(comma + 2 + rest.find(',')), "",
                        "expected two columns \"index,value\"");
    }
    std::string_view field = trim(rest);
    std::size_t start = comma + 1;
    while (start < line.size() && (line[start] == ' ' || line[start] == '\t')) ++start;
    int column = static_cast<int>(start) + 1;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(v)) {
      throw ConfigError(source, line_no, column, "",
                        fmt::format("cannot parse \"{}\" as a number", field));
    }
    out.push_back(v);
  }
  if (!header) throw ConfigError(source, 1, 1, "", "missing header row");
  return out;
}

TimeSeries read_csv_series(const std::string& path) {
  return parse_csv_series(read_file(path), path);
}

TimeSeries fit_to_horizon(const TimeSeries& series, int steps) {
  TimeSeries out;
  if (series.empty()) return out;
  for (int t = 0; t < steps; ++t) out.push_back(series[t % series.size()]);
  return out;
}

LoadedConfig parse_config(std::string_view text, const std::string& source,
                          const std::string& base_dir, const LoadOptions& options) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // e.byte is 1-based and points just past the offending character.
    std::size_t pos = e.byte == 0 ? 0 : std::min<std::size_t>(e.byte - 1, text.size());
    int line = 1;
    int column = 1;
    for (std::size_t i = 0; i < pos; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string msg = e.what();
    std::size_t cut = msg.find("syntax error");
    throw ConfigError(source, line, column, "", cut == std::string::npos ? msg : msg.substr(cut));
  }
  return ConfigReader(source, base_dir, options).read(root);
}

LoadedConfig load_config(const std::string& path, const LoadOptions& options) {
  std::string text = read_file(path);
  std::string dir = fs::path(path).parent_path().string();
  return parse_config(text, path, dir.empty() ? "." : dir, options);
}

std::string solution_to_json(const Solution& s, const ValidationReport* report) {
  json j;
  j["status"] = to_string(s.status);
  j["objective"] = s.objective;
  j["unit_counts"] = s.unit_counts;
  j["tech_built"] = s.tech_built;
  j["storage_capacities"] = s.storage_capacities;
  j["initial_soc"] = s.initial_soc;
  j["tank_volume"] = s.tank_volume;
  j["tank_built"] = s.tank_built;
  j["qp_capacity"] = s.qp_capacity;
  j["initial_volume"] = s.initial_volume;
  json costs;
  costs["technology"] = s.costs.technology;
  costs["storage"] = s.costs.storage;
  costs["ro_investment"] = s.costs.ro_investment;
  costs["ro_operation"] = s.costs.ro_operation;
  costs["tank"] = s.costs.tank;
  costs["total"] = s.costs.total();
  j["costs"] = costs;
  json ts;
  ts["power"] = series_json(s.power);
  ts["ec"] = series_json(s.ec);
  ts["p_stor"] = s.p_stor;
  ts["p_rel"] = s.p_rel;
  ts["soc"] = s.soc;
  ts["q_f"] = series_json(s.q_f);
  ts["q_p"] = series_json(s.q_p);
  ts["wr1"] = series_json(s.wr[0]);
  ts["wr2"] = series_json(s.wr[1]);
  ts["wr3"] = series_json(s.wr[2]);
  ts["wr_sys"] = series_json(s.wr_sys);
  ts["q_stor"] = series_json(s.q_stor);
  ts["q_rel"] = series_json(s.q_rel);
  ts["volume"] = series_json(s.volume);
  ts["feed_pressure"] = s.feed_pressure;
  j["series"] = ts;
  if (report) {
    json v;
    v["pass"] = report->pass;
    v["checks"] = report->residuals.size();
    v["recomputed_objective"] = report->recomputed_objective;
    json bad = json::array();
    for (const Residual& r : report->violations()) {
      bad.push_back({{"check", r.check}, {"step", r.step}, {"value", r.value}});
    }
    v["violations"] = bad;
    j["validation"] = v;
  }
  return j.dump(2) + "\n";
}

Solution solution_from_json(std::string_view text, const std::string& source) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(source, 0, 0, "", e.what());
  }
  Solution s;
  try {
    std::string status = j.at("status").get<std::string>();
    for (SolveStatus st : {SolveStatus::kOptimal, SolveStatus::kFeasible, SolveStatus::kInfeasible,
                           SolveStatus::kUnbounded, SolveStatus::kIterationLimit}) {
      if (to_string(st) == status) s.status = st;
    }
    s.objective = j.at("objective").get<double>();
    s.unit_counts = j.at("unit_counts").get<std::vector<double>>();
    s.tech_built = j.at("tech_built").get<std::vector<double>>();
    s.storage_capacities = j.at("storage_capacities").get<std::vector<double>>();
    s.initial_soc = j.at("initial_soc").get<std::vector<double>>();
    s.tank_volume = j.at("tank_volume").get<double>();
    s.tank_built = j.at("tank_built").get<double>();
    s.qp_capacity = j.at("qp_capacity").get<double>();
    s.initial_volume = j.at("initial_volume").get<double>();
    const json& c = j.at("costs");
    s.costs.technology = c.at("technology").get<std::vector<double>>();
    s.costs.storage = c.at("storage").get<std::vector<double>>();
    s.costs.ro_investment = c.at("ro_investment").get<double>();
    s.costs.ro_operation = c.at("ro_operation").get<double>();
    s.costs.tank = c.at("tank").get<double>();
    const json& ts = j.at("series");
    s.power = ts.at("power").get<TimeSeries>();
    s.ec = ts.at("ec").get<TimeSeries>();
    s.p_stor = ts.at("p_stor").get<std::vector<TimeSeries>>();
    s.p_rel = ts.at("p_rel").get<std::vector<TimeSeries>>();
    s.soc = ts.at("soc").get<std::vector<TimeSeries>>();
    s.q_f = ts.at("q_f").get<TimeSeries>();
    s.q_p = ts.at("q_p").get<TimeSeries>();
    s.wr[0] = ts.at("wr1").get<TimeSeries>();
    s.wr[1] = ts.at("wr2").get<TimeSeries>();
    s.wr[2] = ts.at("wr3").get<TimeSeries>();
    s.wr_sys = ts.at("wr_sys").get<TimeSeries>();
    s.q_stor = ts.at("q_stor").get<TimeSeries>();
    s.q_rel = ts.at("q_rel").get<TimeSeries>();
    s.volume = ts.at("volume").get<TimeSeries>();
    s.feed_pressure = ts.at("feed_pressure").get<std::vector<TimeSeries>>();
  } catch (const json::exception& e) {
    throw ConfigError(source, 0, 0, "", fmt::format("malformed solution: {}", e.what()));
  }
  return s;
}

std::string timeseries_csv(const NexusInstance& inst, const Solution& s) {
  std::string out = "step,hour,power_kw,ec_kw,q_f,q_p,wr1,wr2,wr3,wr_sys,q_stor,q_rel,volume";
  for (const StorageTech& st : inst.storage_techs) {
    out += fmt::format(",p_stor_{0},p_rel_{0},soc_{0}", st.name);
  }
  out += "\n";
  for (int t = 0; t < inst.grid.horizon_steps; ++t) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{}", t, t * inst.grid.dt_hours,
                       s.power[t], s.ec[t], s.q_f[t], s.q_p[t], s.wr[0][t], s.wr[1][t],
                       s.wr[2][t], s.wr_sys[t], s.q_stor[t], s.q_rel[t], s.volume[t]);
    for (std::size_t k = 0; k < inst.storage_techs.size(); ++k) {
      out += fmt::format(",{},{},{}", s.p_stor[k][t], s.p_rel[k][t], s.soc[k][t]);
    }
    out += "\n";
  }
  return out;
}

std::string energy_mix_csv(const EnergyMixReport& mix) {
  std::string out = "technology,annual_energy_kwh,energy_share_pct,annual_cost,cost_share_pct\n";
  for (const EnergyMixEntry& e : mix.technologies) {
    out += fmt::format("{},{},{},{},{}\n", e.name, e.annual_energy, e.energy_share,
                       e.annual_cost, e.cost_share);
  }
  for (const EnergyMixEntry& e : mix.storage) {
    out += fmt::format("{},,,{},{}\n", e.name, e.annual_cost, e.cost_share);
  }
  return out;
}

std::string tank_level_csv(const TimeGrid& grid, const std::vector<std::string>& names,
                           const std::vector<TimeSeries>& traces) {
  std::string out = "hour";
  for (const std::string& n : names) out += "," + n;
  out += "\n";
  for (int t = 0; t < grid.horizon_steps; ++t) {
    out += fmt::format("{}", (t + 1) * grid.dt_hours);
    for (const TimeSeries& tr : traces) {
      out += t < static_cast<int>(tr.size()) ? fmt::format(",{}", tr[t]) : ",";
    }
    out += "\n";
  }
  return out;
}

std::string cost_breakdown_csv(const NexusInstance& inst, const CostBreakdown& c) {
  std::string out = "component,annual_cost\n";
  for (std::size_t k = 0; k < c.technology.size(); ++k) {
    out += fmt::format("{},{}\n", inst.technologies[k].name, c.technology[k]);
  }
  for (std::size_t k = 0; k < c.storage.size(); ++k) {
    out += fmt::format("{},{}\n", inst.storage_techs[k].name, c.storage[k]);
  }
  out += fmt::format("ro_investment,{}\nro_operation,{}\ntank,{}\ntotal,{}\n", c.ro_investment,
                     c.ro_operation, c.tank, c.total());
  return out;
}

std::string sweep_csv(const SweepTable& table) {
  std::string out =
      "land_fraction,water_fraction,epsilon_land,epsilon_water,status,objective,land_use,"
      "water_use,validated,nodes";
  std::vector<std::string> names;
  if (!table.rows.empty()) {
    for (const SweepRow& r : table.rows) {
      if (r.mix) {
        for (const EnergyMixEntry& e : r.mix->technologies) names.push_back(e.name);
        break;
      }
    }
  }
  for (const std::string& n : names) out += fmt::format(",{0}_energy_share,{0}_cost_share", n);
  out += "\n";
  for (const SweepRow& r : table.rows) {
    bool ok = r.status == SolveStatus::kOptimal || r.status == SolveStatus::kFeasible;
    out += fmt::format("{},{},{},{},{},", r.land_fraction, r.water_fraction, r.epsilon_land,
                       r.epsilon_water, to_string(r.status));
    out += ok ? fmt::format("{},{},{},{},{}", r.objective, r.land_use, r.water_use,
                            r.validated ? 1 : 0, r.nodes)
              : fmt::format(",,,0,{}", r.nodes);
    for (std::size_t k = 0; k < names.size(); ++k) {
      if (r.mix && k < r.mix->technologies.size()) {
        out += fmt::format(",{},{}", r.mix->technologies[k].energy_share,
                           r.mix->technologies[k].cost_share);
      } else {
        out += ",,";
      }
    }
    out += "\n";
  }
  return out;
}

std::string surrogates_csv(const NexusInstance& inst) {
  std::string out =
      "technology,cost_slope,cost_intercept,r_squared_cost,land_slope,land_intercept,"
      "r_squared_land,per_unit_energy,max_units\n";
  for (const TechnologySurrogate& s : inst.technologies) {
    out += fmt::format("{},{},{},{},{},{},{},{},{}\n", s.name, s.cost_slope, s.cost_intercept,
                       s.r_squared_cost, s.land_slope, s.land_intercept, s.r_squared_land,
                       s.per_unit_energy, s.max_units);
  }
  return out;
}

std::string size_report_json(const ModelSize& size, int horizon_steps) {
  json j;
  j["horizon_steps"] = horizon_steps;
  j["rows"] = size.rows;
  j["continuous"] = size.continuous;
  j["binaries"] = size.binaries;
  j["integers"] = size.integers;
  return j.dump(2) + "\n";
}

}  // namespace ewnexus
