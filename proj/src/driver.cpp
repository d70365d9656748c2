#include "nkteam/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "nkteam/config.hpp"

namespace nkteam {

namespace {

std::string describe(const ScenarioConfig& s) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "k=%d %s tau=%s p=%.2f %s", s.k,
                std::string(to_string(s.pattern)).c_str(), to_string(s.tau).c_str(),
                s.learn_prob, std::string(to_string(s.coordination)).c_str());
  return buf;
}

}  // namespace

SweepReport run_sweep(const GridConfig& grid, const std::string& csv_path, SweepOptions options,
                      std::ostream* progress) {
  namespace fs = std::filesystem;
  const std::vector<ScenarioConfig> scenarios = enumerate_grid(grid);
  const std::uint64_t grid_id = grid_hash(grid);
  const std::string manifest_path = Manifest::path_for(csv_path);

  Manifest manifest;
  manifest.grid_hash = grid_id;
  bool fresh = true;
  if (options.resume) {
    if (auto existing = Manifest::load(manifest_path)) {
      if (existing->grid_hash != grid_id) {
        throw ConfigError("manifest " + manifest_path +
                          " belongs to a different grid; delete it or change the output path");
      }
      if (!fs::exists(csv_path) || fs::file_size(csv_path) < existing->csv_bytes) {
        throw IoError("output CSV is shorter than the manifest's committed bytes");
      }
      // Drop any rows from an interrupted batch beyond the last commit.
      fs::resize_file(csv_path, existing->csv_bytes);
      manifest = std::move(*existing);
      fresh = false;
    }
  }

  CsvRecordWriter writer(csv_path, fresh);
  if (fresh) {
    manifest.csv_bytes = writer.bytes_written();
    manifest.save_atomic(manifest_path);
  }

  SweepReport report;
  int processed = 0;
  for (std::size_t index = 0; index < scenarios.size(); ++index) {
    const ScenarioConfig& scenario = scenarios[index];
    const std::string hex = hash_hex(scenario_hash(scenario));

    std::vector<int> missing;
    for (int round = 0; round < scenario.rounds; ++round) {
      if (!manifest.has_round(hex, round)) missing.push_back(round);
    }
    if (missing.empty()) {
      ++report.scenarios_skipped;
      continue;
    }
    if (options.max_scenarios.has_value() && processed >= *options.max_scenarios) {
      report.stopped_early = true;
      break;
    }

    const auto started = std::chrono::steady_clock::now();
    std::vector<RoundFailure> failures;
    const std::vector<RoundResult> results =
        run_rounds(scenario, missing, options.parallelism, &failures);

    auto& done_rounds = manifest.completed[hex];
    for (std::size_t i = 0; i < missing.size(); ++i) {
      const RoundResult& result = results[i];
      if (result.records.empty()) continue;  // failed round, reported below
      writer.append(result.records);
      report.rows_written += static_cast<long long>(result.records.size());
      done_rounds.push_back(missing[i]);
    }
    std::sort(done_rounds.begin(), done_rounds.end());
    writer.flush();
    manifest.csv_bytes = writer.bytes_written();
    manifest.save_atomic(manifest_path);

    for (const RoundFailure& failure : failures) {
      report.failures.emplace_back(hex, failure.round_index);
      if (progress) {
        *progress << "round " << failure.round_index << " of scenario " << hex
                  << " failed: " << failure.message << '\n';
      }
    }

    ++processed;
    ++report.scenarios_completed;
    if (progress) {
      const double seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
      char line[192];
      std::snprintf(line, sizeof(line), "scenario %zu/%zu (%s) rounds=%zu %.1fs\n", index + 1,
                    scenarios.size(), describe(scenario).c_str(), missing.size(), seconds);
      *progress << line << std::flush;
    }
  }
  return report;
}

std::vector<PanelCurves> compute_panels(const analysis::Dataset& data,
                                        const AnalyzeOptions& options) {
  using analysis::Dataset;
  using analysis::RegressionTree;

  const int k_feature = data.feature_index("k");
  const int pattern_feature = data.feature_index("pattern");
  const int coordination_feature = data.feature_index("coordination");
  data.feature_index(options.scope);  // validates the scope name early

  std::optional<RegressionTree> pooled;
  if (!options.per_panel) pooled = RegressionTree::fit(data, options.tree);

  std::vector<PanelCurves> panels;
  for (const double k : data.distinct_values(k_feature)) {
    const Dataset k_slice = data.filter(k_feature, k);
    for (const double pattern : k_slice.distinct_values(pattern_feature)) {
      const Dataset panel_data = k_slice.filter(pattern_feature, pattern);

      PanelCurves panel;
      panel.k = k;
      panel.pattern = data.level_name(pattern_feature, pattern);

      const RegressionTree tree =
          options.per_panel ? RegressionTree::fit(panel_data, options.tree) : *pooled;

      for (const double mode : panel_data.distinct_values(coordination_feature)) {
        const Dataset slice = panel_data.filter(coordination_feature, mode);
        panel.modes.push_back(data.level_name(coordination_feature, mode));
        panel.tree_curves.push_back(partial_dependence(tree, slice, options.scope));
        panel.empirical_curves.push_back(empirical_partial_dependence(slice, options.scope));
      }
      panels.push_back(std::move(panel));
    }
  }
  return panels;
}

void write_pdp_csv(const std::string& path, const PanelCurves& panel) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << "scope_value,coordination,pd_value,support\n";
  char buf[128];
  for (std::size_t mode = 0; mode < panel.modes.size(); ++mode) {
    const analysis::PDCurve& curve = panel.tree_curves[mode];
    for (std::size_t i = 0; i < curve.levels.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%s,%s,%.6f,%ld\n", curve.level_names[i].c_str(),
                    panel.modes[mode].c_str(), curve.values[i], curve.support[i]);
      out << buf;
    }
  }
  if (!out) throw IoError("short write to " + path);
}

std::vector<std::string> run_analyze(const std::string& csv_path, const std::string& output_dir,
                                     const AnalyzeOptions& options, std::ostream* progress) {
  namespace fs = std::filesystem;
  const analysis::Dataset data = load_simulation_csv(csv_path, options.t_max);
  if (progress) *progress << "loaded " << data.size() << " rows\n";

  const std::vector<PanelCurves> panels = compute_panels(data, options);

  std::error_code ec;
  fs::create_directories(output_dir, ec);
  if (ec) throw IoError("cannot create output directory " + output_dir + ": " + ec.message());

  std::vector<std::string> written;
  for (const PanelCurves& panel : panels) {
    char name[128];
    std::snprintf(name, sizeof(name), "pdp_%s_k%g_%s", options.scope.c_str(), panel.k,
                  panel.pattern.c_str());
    const std::string base = (fs::path(output_dir) / name).string();
    write_pdp_csv(base + ".csv", panel);
    written.push_back(base + ".csv");
    if (options.svg) {
      write_pdp_svg(base + ".svg", panel, options.scope);
      written.push_back(base + ".svg");
    }
    if (progress) *progress << "wrote " << base << ".csv\n";
  }
  return written;
}

void write_pdp_svg(const std::string& path, const PanelCurves& panel, const std::string& scope) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);

  constexpr double width = 520, height = 360;
  constexpr double left = 70, right = 20, top = 40, bottom = 50;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  double lo = 1.0, hi = 0.0;
  for (const auto& curve : panel.tree_curves) {
    for (const double v : curve.values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!(hi > lo)) {
    lo -= 0.01;
    hi += 0.01;
  }
  const double pad = 0.08 * (hi - lo);
  lo -= pad;
  hi += pad;

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">K="
      << panel.k << ", " << panel.pattern << "</text>\n";

  const std::size_t points = panel.tree_curves.empty() ? 0 : panel.tree_curves[0].levels.size();
  auto x_at = [&](std::size_t i) {
    return points <= 1 ? left + plot_w / 2
                       : left + plot_w * static_cast<double>(i) / (points - 1);
  };
  auto y_at = [&](double v) { return top + plot_h * (1.0 - (v - lo) / (hi - lo)); };

  // Axes and tick labels.
  out << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w
      << "\" y2=\"" << top + plot_h << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
      << top + plot_h << "\" stroke=\"black\"/>\n";
  char buf[64];
  for (int tick = 0; tick <= 4; ++tick) {
    const double v = lo + (hi - lo) * tick / 4.0;
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    out << "<text x=\"" << left - 6 << "\" y=\"" << y_at(v) + 4
        << "\" text-anchor=\"end\" font-size=\"10\">" << buf << "</text>\n";
  }
  if (!panel.tree_curves.empty()) {
    const auto& names = panel.tree_curves[0].level_names;
    for (std::size_t i = 0; i < names.size(); ++i) {
      out << "<text x=\"" << x_at(i) << "\" y=\"" << top + plot_h + 16
          << "\" text-anchor=\"middle\" font-size=\"10\">" << names[i] << "</text>\n";
    }
  }
  out << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-size=\"12\">" << scope << "</text>\n";

  static const char* const colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  for (std::size_t mode = 0; mode < panel.tree_curves.size(); ++mode) {
    const analysis::PDCurve& curve = panel.tree_curves[mode];
    out << "<polyline fill=\"none\" stroke=\"" << colors[mode % 4]
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < curve.values.size(); ++i) {
      out << x_at(i) << ',' << y_at(curve.values[i]) << ' ';
    }
    out << "\"/>\n";
    out << "<text x=\"" << left + plot_w - 4 << "\" y=\"" << top + 14 + 14 * mode
        << "\" text-anchor=\"end\" font-size=\"11\" fill=\"" << colors[mode % 4] << "\">"
        << panel.modes[mode] << "</text>\n";
  }
  out << "</svg>\n";
  if (!out) throw IoError("short write to " + path);
}

}  // namespace nkteam
