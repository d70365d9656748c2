#ifndef NKTEAM_CONFIG_HPP
#define NKTEAM_CONFIG_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "nkteam/simulation.hpp"

namespace nkteam {

// Raised for malformed or out-of-range configuration; the CLI maps it to
// exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LoadedConfig {
  GridConfig grid;
  int parallelism = 0;  // 0 = all cores
  std::string output_path = "results.csv";
};

// Parses a JSON config file, applies `key=value` overrides (values parsed as
// JSON when possible, else as strings), fills defaults from the paper's
// parameter table, and validates every factor combination.
LoadedConfig load_config(const std::string& path, const std::vector<std::string>& overrides);

// Same, starting from JSON text ("{}" gives the full paper-default grid).
LoadedConfig parse_config_text(const std::string& text, const std::vector<std::string>& overrides);

}  // namespace nkteam

#endif  // NKTEAM_CONFIG_HPP
