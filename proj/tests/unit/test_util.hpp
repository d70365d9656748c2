#ifndef NKTEAM_TESTS_TEST_UTIL_HPP
#define NKTEAM_TESTS_TEST_UTIL_HPP

#include <cstdint>
#include <vector>

#include "nkteam/landscape.hpp"

namespace nkteam::testutil {

// Landscape whose every table entry is `value`; every contribution is then
// `value` no matter the solution.
inline Landscape constant_landscape(double value, Pattern pattern = Pattern::kDecomposable,
                                    int n = 12, int k = 3, int subtask_size = 4,
                                    std::uint64_t seed = 1) {
  Rng rng(seed);
  auto matrix = build_matrix(pattern, n, k, subtask_size, &rng);
  std::vector<std::vector<double>> tables(
      n, std::vector<double>(std::size_t{1} << (k + 1), value));
  return Landscape::from_tables(std::move(matrix), std::move(tables));
}

// Landscape where decision i always contributes values[i], regardless of the
// configuration of its dependencies. Lets tests pin per-subtask performance.
inline Landscape per_decision_landscape(const std::vector<double>& values,
                                        Pattern pattern = Pattern::kDecomposable, int k = 3,
                                        int subtask_size = 4, std::uint64_t seed = 1) {
  const int n = static_cast<int>(values.size());
  Rng rng(seed);
  auto matrix = build_matrix(pattern, n, k, subtask_size, &rng);
  std::vector<std::vector<double>> tables;
  tables.reserve(values.size());
  for (const double v : values) {
    tables.emplace_back(std::size_t{1} << (k + 1), v);
  }
  return Landscape::from_tables(std::move(matrix), std::move(tables));
}

// Independent re-derivation of a contribution: walks the matrix row, collects
// the dependency bits itself and indexes the raw table. Deliberately separate
// from Landscape::contribution.
inline double contribution_oracle(const Landscape& landscape, Solution d, int row) {
  const auto& matrix = landscape.matrix();
  std::vector<int> columns;
  for (int col = 0; col < matrix.n(); ++col) {
    if (col != row && matrix.depends(row, col)) columns.push_back(col);
  }
  std::size_t key = 0;
  key |= static_cast<std::size_t>(d.bit(row)) << columns.size();
  for (std::size_t i = 0; i < columns.size(); ++i) {
    key |= static_cast<std::size_t>(d.bit(columns[i])) << (columns.size() - 1 - i);
  }
  return landscape.table(row)[key];
}

inline double performance_oracle(const Landscape& landscape, Solution d) {
  double sum = 0.0;
  for (int row = 0; row < landscape.n(); ++row) sum += contribution_oracle(landscape, d, row);
  return sum / landscape.n();
}

// Count of solutions with no strictly better 1-bit-flip neighbor.
inline int local_optima_count(const Landscape& landscape) {
  const int n = landscape.n();
  int count = 0;
  for (std::uint32_t bits = 0; bits < (1u << n); ++bits) {
    const Solution d{bits};
    const double here = landscape.performance(d);
    bool is_peak = true;
    for (int i = 0; i < n && is_peak; ++i) {
      if (landscape.performance(d.with_flipped(i)) > here) is_peak = false;
    }
    count += is_peak;
  }
  return count;
}

}  // namespace nkteam::testutil

#endif  // NKTEAM_TESTS_TEST_UTIL_HPP
