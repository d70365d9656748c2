#ifndef NKTEAM_IO_HPP
#define NKTEAM_IO_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nkteam/analysis.hpp"
#include "nkteam/simulation.hpp"

namespace nkteam {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The simulation CSV contract. Floats carry six decimal digits; the
// long-term regime serializes as the literal `none`.
std::string csv_header();
void append_record_csv(std::string& out, const PeriodRecord& record);

class CsvRecordWriter {
 public:
  // Truncates and writes the header when `fresh`, otherwise appends.
  CsvRecordWriter(const std::string& path, bool fresh);
  ~CsvRecordWriter();

  void append(const std::vector<PeriodRecord>& records);
  void flush();
  std::uint64_t bytes_written() const { return bytes_; }

 private:
  std::FILE* file_ = nullptr;
  std::uint64_t bytes_ = 0;
  std::string buffer_;
};

// Sidecar checkpoint: which (scenario, round) pairs are already on disk, and
// how many CSV bytes those committed rows occupy.
struct Manifest {
  std::uint64_t grid_hash = 0;
  std::uint64_t csv_bytes = 0;
  std::map<std::string, std::vector<int>> completed;  // scenario hash hex -> rounds

  static std::string path_for(const std::string& csv_path);
  static std::optional<Manifest> load(const std::string& path);
  void save_atomic(const std::string& path) const;

  bool has_round(const std::string& scenario_hex, int round) const;
};

std::string hash_hex(std::uint64_t hash);

// Reads a simulation CSV into the analysis feature schema
// {k, pattern, tau, learn_prob, t, coordination} with normalized performance
// as the target. `t_max` drops later periods before fitting.
analysis::Dataset load_simulation_csv(const std::string& path, std::optional<int> t_max = {});

}  // namespace nkteam

#endif  // NKTEAM_IO_HPP
