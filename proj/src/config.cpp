#include "nkteam/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace nkteam {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw ConfigError("config key '" + key + "': " + what);
}

int require_int(const json& j, const std::string& key, int fallback, int lo, int hi) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer()) fail(key, "expected an integer");
  const long long raw = v.get<long long>();
  if (raw < lo || raw > hi) {
    fail(key, "value " + std::to_string(raw) + " outside [" + std::to_string(lo) + ", " +
                  std::to_string(hi) + "]");
  }
  return static_cast<int>(raw);
}

double require_prob(const json& v, const std::string& key) {
  if (!v.is_number()) fail(key, "expected a number in [0,1]");
  const double p = v.get<double>();
  if (!(p >= 0.0 && p <= 1.0)) {
    fail(key, "value " + std::to_string(p) + " outside [0,1]");
  }
  return p;
}

CompositionRegime parse_tau(const json& v, const std::string& key) {
  if (v.is_null()) return CompositionRegime::long_term();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "none") return CompositionRegime::long_term();
    fail(key, "expected an integer >= 1, null, or \"none\" (got \"" + s + "\")");
  }
  if (!v.is_number_integer()) fail(key, "expected an integer >= 1, null, or \"none\"");
  const long long raw = v.get<long long>();
  if (raw < 1) fail(key, "finite period count must be >= 1");
  return CompositionRegime::periodic(static_cast<int>(raw));
}

template <typename T, typename Parse>
std::vector<T> parse_levels(const json& j, const std::string& key, std::vector<T> fallback,
                            Parse parse) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_array() || v.empty()) fail(key, "expected a non-empty array of levels");
  std::vector<T> out;
  out.reserve(v.size());
  for (const json& item : v) out.push_back(parse(item));
  return out;
}

}  // namespace

LoadedConfig parse_config_text(const std::string& text,
                               const std::vector<std::string>& overrides) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");

  static const char* const known[] = {
      "N",         "M",           "P",           "K",           "pattern",
      "tau",       "learn_prob",  "coordination", "periods",    "rounds",
      "master_seed", "error_sigma", "error_sigma_is_variance", "learning_scope",
      "parallelism", "output_path"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    bool ok = false;
    for (const char* name : known) ok = ok || key == name;
    if (!ok) fail(key, "unknown key");
  }

  for (const std::string& assignment : overrides) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("override must look like key=value: '" + assignment + "'");
    }
    const std::string key = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    json value = json::parse(raw, nullptr, false);
    if (value.is_discarded()) value = raw;  // plain strings need no quotes
    j[key] = value;
  }

  LoadedConfig loaded;
  GridConfig& grid = loaded.grid;
  ScenarioConfig& base = grid.base;

  base.n_decisions = require_int(j, "N", 12, 1, 31);
  base.m_subtasks = require_int(j, "M", 3, 1, 31);
  base.population_size = require_int(j, "P", 30, 1, 1'000'000);
  base.periods = require_int(j, "periods", 200, 1, 1'000'000);
  base.rounds = require_int(j, "rounds", 1500, 1, 100'000'000);
  if (j.contains("master_seed")) {
    if (!j.at("master_seed").is_number_integer()) fail("master_seed", "expected an integer");
    base.master_seed = j.at("master_seed").get<std::uint64_t>();
  }

  double sigma = 0.01;
  if (j.contains("error_sigma")) {
    if (!j.at("error_sigma").is_number()) fail("error_sigma", "expected a number >= 0");
    sigma = j.at("error_sigma").get<double>();
    if (sigma < 0.0) fail("error_sigma", "must be >= 0");
  }
  bool sigma_is_variance = false;
  if (j.contains("error_sigma_is_variance")) {
    if (!j.at("error_sigma_is_variance").is_boolean()) {
      fail("error_sigma_is_variance", "expected a boolean");
    }
    sigma_is_variance = j.at("error_sigma_is_variance").get<bool>();
  }
  base.noise.sigma = sigma_is_variance ? std::sqrt(sigma) : sigma;

  if (j.contains("learning_scope")) {
    if (!j.at("learning_scope").is_string()) fail("learning_scope", "expected a string");
    try {
      base.learning_scope = learning_scope_from_string(j.at("learning_scope").get<std::string>());
    } catch (const std::invalid_argument& e) {
      fail("learning_scope", e.what());
    }
  }

  grid.k_levels = parse_levels<int>(j, "K", {3, 5}, [&](const json& v) {
    if (!v.is_number_integer()) fail("K", "levels must be integers");
    return static_cast<int>(v.get<long long>());
  });
  grid.pattern_levels = parse_levels<Pattern>(
      j, "pattern",
      {Pattern::kDecomposable, Pattern::kStructured, Pattern::kUnstructured}, [&](const json& v) {
        if (!v.is_string()) fail("pattern", "levels must be strings");
        try {
          return pattern_from_string(v.get<std::string>());
        } catch (const std::invalid_argument& e) {
          fail("pattern", e.what());
        }
      });
  grid.tau_levels = parse_levels<CompositionRegime>(
      j, "tau",
      {CompositionRegime::long_term(), CompositionRegime::periodic(10),
       CompositionRegime::periodic(1)},
      [&](const json& v) { return parse_tau(v, "tau"); });
  grid.learn_prob_levels = parse_levels<double>(
      j, "learn_prob", {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0},
      [&](const json& v) { return require_prob(v, "learn_prob"); });
  grid.coordination_levels = parse_levels<Coordination>(
      j, "coordination", {Coordination::kAutonomous, Coordination::kCoordinated},
      [&](const json& v) {
        if (!v.is_string()) fail("coordination", "levels must be strings");
        try {
          return coordination_from_string(v.get<std::string>());
        } catch (const std::invalid_argument& e) {
          fail("coordination", e.what());
        }
      });

  loaded.parallelism = require_int(j, "parallelism", 0, 0, 4096);
  if (j.contains("output_path")) {
    if (!j.at("output_path").is_string()) fail("output_path", "expected a string");
    loaded.output_path = j.at("output_path").get<std::string>();
  }

  // Cross-field validation. The record schema fixes one member column per
  // subtask, so M is pinned to 3 here (the library itself is general).
  if (base.m_subtasks != 3) fail("M", "the record schema requires M = 3");
  if (base.n_decisions % base.m_subtasks != 0) {
    fail("N", "must be divisible by M");
  }
  if (base.subtask_size() > 16) fail("N", "subtask size N/M must be <= 16");
  if (base.population_size % base.m_subtasks != 0) {
    fail("P", "must be divisible by M");
  }
  if (base.n_decisions > kDefaultEnumerationCap) {
    fail("N", "exceeds the exhaustive enumeration cap of " +
                  std::to_string(kDefaultEnumerationCap));
  }
  for (const int k : grid.k_levels) {
    if (k < 0 || k >= base.n_decisions) fail("K", "levels must satisfy 0 <= K < N");
    for (const Pattern pattern : grid.pattern_levels) {
      if (pattern == Pattern::kDecomposable && base.n_decisions % (k + 1) != 0) {
        fail("K", "decomposable pattern needs (K+1) to divide N, violated by K=" +
                      std::to_string(k));
      }
    }
  }
  return loaded;
}

LoadedConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), overrides);
}

}  // namespace nkteam
