#ifndef NKTEAM_DRIVER_HPP
#define NKTEAM_DRIVER_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nkteam/io.hpp"

namespace nkteam {

struct SweepOptions {
  int parallelism = 0;
  bool resume = true;
  // Stop after this many scenarios have been processed this invocation
  // (completed scenarios that were skipped do not count). For chunked batches.
  std::optional<int> max_scenarios;
};

struct SweepReport {
  long long rows_written = 0;
  int scenarios_completed = 0;
  int scenarios_skipped = 0;
  bool stopped_early = false;
  std::vector<std::pair<std::string, int>> failures;  // (scenario hash hex, round)
};

// Runs the scenario grid, streaming records to `csv_path` ordered by
// (scenario, round, t) and checkpointing to the sidecar manifest after every
// scenario. Resumes from the manifest when present, skipping finished rounds.
SweepReport run_sweep(const GridConfig& grid, const std::string& csv_path, SweepOptions options,
                      std::ostream* progress = nullptr);

struct AnalyzeOptions {
  std::string scope = "learn_prob";
  bool per_panel = true;
  std::optional<int> t_max;
  bool svg = false;
  analysis::TreeParams tree{};
};

struct PanelCurves {
  double k = 0;
  std::string pattern;
  // One tree-based and one empirical curve per coordination mode.
  std::vector<std::string> modes;
  std::vector<analysis::PDCurve> tree_curves;
  std::vector<analysis::PDCurve> empirical_curves;
};

// Fits a regression tree per (K, pattern) panel (or one pooled tree) and
// computes the partial dependence of normalized performance on the scope
// variable for each coordination mode.
std::vector<PanelCurves> compute_panels(const analysis::Dataset& data,
                                        const AnalyzeOptions& options);

// Full analyze stage: load CSV, compute panels, write one
// `pdp_<scope>_k<k>_<pattern>.csv` per panel (plus `.svg` when asked) into
// `output_dir`. Returns the written file paths.
std::vector<std::string> run_analyze(const std::string& csv_path, const std::string& output_dir,
                                     const AnalyzeOptions& options,
                                     std::ostream* progress = nullptr);

void write_pdp_csv(const std::string& path, const PanelCurves& panel);
void write_pdp_svg(const std::string& path, const PanelCurves& panel, const std::string& scope);

}  // namespace nkteam

#endif  // NKTEAM_DRIVER_HPP
