#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nkteam/config.hpp"
#include "nkteam/driver.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitIo = 3;

int parallelism_from_env(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("NKTEAM_PARALLELISM")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  return flag_value;
}

int run_simulate(const std::string& config_path, const std::vector<std::string>& overrides,
                 const std::string& out_flag, int parallelism_flag) {
  const nkteam::LoadedConfig loaded = nkteam::load_config(config_path, overrides);
  const std::string out = out_flag.empty() ? loaded.output_path : out_flag;

  nkteam::SweepOptions options;
  options.parallelism = parallelism_from_env(
      parallelism_flag > 0 ? parallelism_flag : loaded.parallelism);

  const nkteam::SweepReport report = nkteam::run_sweep(loaded.grid, out, options, &std::cerr);
  std::cerr << "scenarios run: " << report.scenarios_completed
            << ", skipped (already complete): " << report.scenarios_skipped
            << ", rows written: " << report.rows_written << '\n';
  if (!report.failures.empty()) {
    std::cerr << report.failures.size() << " round(s) failed:\n";
    for (const auto& [scenario, round] : report.failures) {
      std::cerr << "  scenario " << scenario << " round " << round << '\n';
    }
    return kExitRuntime;
  }
  return kExitOk;
}

int run_validate(const std::string& config_path, const std::vector<std::string>& overrides) {
  const nkteam::LoadedConfig loaded = nkteam::load_config(config_path, overrides);
  const auto scenarios = nkteam::enumerate_grid(loaded.grid);
  const auto& base = loaded.grid.base;
  std::cout << "config ok: " << scenarios.size() << " scenarios, " << base.rounds
            << " rounds x " << base.periods << " periods each ("
            << static_cast<long long>(scenarios.size()) * base.rounds * base.periods
            << " records)\n";
  return kExitOk;
}

int run_analyze_cmd(const std::string& input, const std::string& out_dir,
                    const nkteam::AnalyzeOptions& options) {
  const auto written = nkteam::run_analyze(input, out_dir, options, &std::cerr);
  for (const std::string& path : written) std::cout << path << '\n';
  return kExitOk;
}

int run_landscape_dump(const std::string& pattern, int n, int m, int k, std::uint64_t seed,
                       const std::string& out_path) {
  nkteam::Rng rng(nkteam::SeedMixer(seed).mix(1).value());
  const auto matrix =
      nkteam::build_matrix(nkteam::pattern_from_string(pattern), n, k, n / m, &rng);
  const auto landscape = nkteam::Landscape::generate(matrix, rng);
  const std::string json = landscape.to_json();
  if (out_path.empty() || out_path == "-") {
    std::cout << json << '\n';
  } else {
    std::FILE* f = std::fopen(out_path.c_str(), "wb");
    if (!f) throw nkteam::IoError("cannot open " + out_path);
    std::fwrite(json.data(), 1, json.size(), f);
    std::fputc('\n', f);
    std::fclose(f);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Agent-based simulator of virtual teams searching NK performance landscapes"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  int parallelism = 0;
  std::vector<std::string> overrides;

  auto* simulate = app.add_subcommand("simulate", "Run the scenario grid and stream records");
  simulate->add_option("--config", config_path, "JSON config file")->required();
  simulate->add_option("--out", out_path, "Output CSV (default from config)");
  simulate->add_option("--parallelism", parallelism, "Worker threads (0 = all cores)");
  simulate->add_option("--set", overrides, "Override a config key (key=value, repeatable)");

  auto* validate = app.add_subcommand("validate", "Check a config without running anything");
  validate->add_option("--config", config_path, "JSON config file")->required();
  validate->add_option("--set", overrides, "Override a config key (key=value, repeatable)");

  nkteam::AnalyzeOptions analyze_options;
  std::string analyze_input;
  int filter_t_max = 0;
  auto* analyze =
      app.add_subcommand("analyze", "Fit regression trees and emit partial-dependence panels");
  analyze->add_option("input", analyze_input, "Simulation CSV")->required();
  analyze->add_option("--out", out_path, "Output directory")->required();
  analyze->add_option("--scope", analyze_options.scope, "Scope variable")
      ->check(CLI::IsMember({"learn_prob", "tau"}))
      ->capture_default_str();
  analyze->add_flag("--per-panel,!--pooled", analyze_options.per_panel,
                    "One tree per (K, pattern) panel (default) or one pooled tree");
  analyze->add_option("--filter-t-max", filter_t_max, "Drop periods beyond this t before fitting");
  analyze->add_flag("--svg", analyze_options.svg, "Also draw an SVG per panel");
  analyze->add_option("--max-depth", analyze_options.tree.max_depth, "Tree depth limit")
      ->capture_default_str();
  analyze->add_option("--min-leaf", analyze_options.tree.min_leaf, "Minimum rows per leaf")
      ->capture_default_str();

  std::string dump_pattern = "decomposable";
  int dump_n = 12, dump_m = 3, dump_k = 3;
  std::uint64_t dump_seed = 0;
  auto* dump = app.add_subcommand("landscape-dump", "Write one generated landscape as JSON");
  dump->add_option("--pattern", dump_pattern, "Interdependence pattern")
      ->check(CLI::IsMember({"decomposable", "structured", "unstructured"}))
      ->capture_default_str();
  dump->add_option("--n", dump_n, "Decisions")->capture_default_str();
  dump->add_option("--m", dump_m, "Subtasks")->capture_default_str();
  dump->add_option("--k", dump_k, "Interdependencies per contribution")->capture_default_str();
  dump->add_option("--seed", dump_seed, "Seed")->capture_default_str();
  dump->add_option("--out", out_path, "Output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return run_simulate(config_path, overrides, out_path, parallelism);
    if (validate->parsed()) return run_validate(config_path, overrides);
    if (analyze->parsed()) {
      if (filter_t_max > 0) analyze_options.t_max = filter_t_max;
      return run_analyze_cmd(analyze_input, out_path, analyze_options);
    }
    if (dump->parsed()) {
      return run_landscape_dump(dump_pattern, dump_n, dump_m, dump_k, dump_seed, out_path);
    }
  } catch (const nkteam::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const nkteam::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}
