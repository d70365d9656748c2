#include "nkteam/io.hpp"

#include <algorithm>
#include <array>
#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "json.hpp"

namespace nkteam {

std::string csv_header() {
  return "k,pattern,tau,learn_prob,coordination,round,t,raw_perf,norm_perf,reformed,"
         "member_1,member_2,member_3\n";
}

void append_record_csv(std::string& out, const PeriodRecord& record) {
  char buf[160];
  int len = std::snprintf(buf, sizeof(buf), "%d,%s,%s,%.6f,%s,%d,%d,%.6f,%.6f,%d", record.k,
                          std::string(to_string(record.pattern)).c_str(),
                          to_string(record.tau).c_str(), record.learn_prob,
                          std::string(to_string(record.coordination)).c_str(), record.round,
                          record.t, record.raw_performance, record.normalized_performance,
                          record.reformed ? 1 : 0);
  out.append(buf, len);
  for (const int id : record.member_ids) {
    len = std::snprintf(buf, sizeof(buf), ",%d", id);
    out.append(buf, len);
  }
  out.push_back('\n');
}

CsvRecordWriter::CsvRecordWriter(const std::string& path, bool fresh) {
  file_ = std::fopen(path.c_str(), fresh ? "wb" : "ab");
  if (!file_) throw IoError("cannot open output file: " + path);
  if (fresh) {
    const std::string header = csv_header();
    if (std::fwrite(header.data(), 1, header.size(), file_) != header.size()) {
      throw IoError("failed to write CSV header: " + path);
    }
  }
  const long pos = std::ftell(file_);
  bytes_ = pos < 0 ? 0 : static_cast<std::uint64_t>(pos);
}

CsvRecordWriter::~CsvRecordWriter() {
  if (file_) std::fclose(file_);
}

void CsvRecordWriter::append(const std::vector<PeriodRecord>& records) {
  buffer_.clear();
  for (const PeriodRecord& record : records) append_record_csv(buffer_, record);
  if (std::fwrite(buffer_.data(), 1, buffer_.size(), file_) != buffer_.size()) {
    throw IoError("short write to the output CSV");
  }
  bytes_ += buffer_.size();
}

void CsvRecordWriter::flush() {
  if (std::fflush(file_) != 0) throw IoError("failed to flush the output CSV");
}

std::string hash_hex(std::uint64_t hash) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, hash);
  return buf;
}

std::string Manifest::path_for(const std::string& csv_path) {
  return csv_path + ".manifest.json";
}

std::optional<Manifest> Manifest::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  nlohmann::json j;
  try {
    in >> j;
    Manifest m;
    m.grid_hash = std::stoull(j.at("grid_hash").get<std::string>(), nullptr, 16);
    m.csv_bytes = j.at("csv_bytes").get<std::uint64_t>();
    for (const auto& [scenario, rounds] : j.at("completed").items()) {
      auto& list = m.completed[scenario];
      for (const auto& r : rounds) list.push_back(r.get<int>());
      std::sort(list.begin(), list.end());
    }
    return m;
  } catch (const std::exception& e) {
    throw IoError("corrupt manifest " + path + ": " + e.what());
  }
}

void Manifest::save_atomic(const std::string& path) const {
  nlohmann::json j;
  j["grid_hash"] = hash_hex(grid_hash);
  j["csv_bytes"] = csv_bytes;
  nlohmann::json done = nlohmann::json::object();
  for (const auto& [scenario, rounds] : completed) done[scenario] = rounds;
  j["completed"] = std::move(done);

  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw IoError("cannot write manifest: " + tmp);
    out << j.dump() << '\n';
    if (!out) throw IoError("short write to manifest: " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot replace manifest " + path + ": " + ec.message());
}

bool Manifest::has_round(const std::string& scenario_hex, int round) const {
  const auto it = completed.find(scenario_hex);
  if (it == completed.end()) return false;
  return std::binary_search(it->second.begin(), it->second.end(), round);
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      fields.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return fields;
}

double index_of_level(std::vector<std::string>& levels, std::string_view value) {
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] == value) return static_cast<double>(i);
  }
  levels.emplace_back(value);
  return static_cast<double>(levels.size() - 1);
}

}  // namespace

analysis::Dataset load_simulation_csv(const std::string& path, std::optional<int> t_max) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open simulation CSV: " + path);

  std::string line;
  if (!std::getline(in, line)) throw IoError("empty simulation CSV: " + path);
  {
    std::string expected = csv_header();
    expected.pop_back();  // newline
    if (line != expected) {
      throw IoError("CSV header mismatch; expected '" + expected + "'");
    }
  }

  using analysis::FeatureKind;
  using analysis::FeatureSpec;
  // tau levels are registered up front so the canonical regimes keep a stable
  // order; unusual regimes from custom grids append after them.
  std::vector<FeatureSpec> schema = {
      {"k", FeatureKind::kNumeric, {}},
      {"pattern", FeatureKind::kCategorical, {"decomposable", "structured", "unstructured"}},
      {"tau", FeatureKind::kCategorical, {"none", "10", "1"}},
      {"learn_prob", FeatureKind::kNumeric, {}},
      {"t", FeatureKind::kNumeric, {}},
      {"coordination", FeatureKind::kCategorical, {"autonomous", "coordinated"}},
  };
  std::vector<std::string> tau_levels = schema[2].levels;

  std::vector<std::array<double, 6>> rows;
  std::vector<double> targets;
  long line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 13) {
      throw IoError(path + ":" + std::to_string(line_number) + ": expected 13 fields, got " +
                    std::to_string(fields.size()));
    }
    try {
      std::array<double, 6> row;
      row[0] = std::stod(std::string(fields[0]));  // k
      row[1] = static_cast<double>(
          static_cast<int>(pattern_from_string(fields[1])));  // pattern level
      row[2] = index_of_level(tau_levels, fields[2]);
      row[3] = std::stod(std::string(fields[3]));  // learn_prob
      row[4] = std::stod(std::string(fields[6]));  // t
      row[5] = static_cast<double>(static_cast<int>(coordination_from_string(fields[4])));
      const double target = std::stod(std::string(fields[8]));  // norm_perf
      if (t_max.has_value() && row[4] > static_cast<double>(*t_max)) continue;
      rows.push_back(row);
      targets.push_back(target);
    } catch (const std::exception& e) {
      throw IoError(path + ":" + std::to_string(line_number) + ": " + e.what());
    }
  }
  if (rows.empty()) throw IoError("simulation CSV holds no data rows: " + path);

  schema[2].levels = tau_levels;
  analysis::Dataset data(std::move(schema));
  data.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) data.add_row(rows[i], targets[i]);
  return data;
}

}  // namespace nkteam
