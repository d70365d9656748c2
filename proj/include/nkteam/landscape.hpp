#ifndef NKTEAM_LANDSCAPE_HPP
#define NKTEAM_LANDSCAPE_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "nkteam/rng.hpp"

namespace nkteam {

enum class Pattern { kDecomposable, kStructured, kUnstructured };

std::string_view to_string(Pattern p);
Pattern pattern_from_string(std::string_view s);

// A full assignment of the N binary decisions, bit i = decision i.
struct Solution {
  std::uint32_t bits = 0;

  int bit(int i) const { return static_cast<int>((bits >> i) & 1u); }
  Solution with_flipped(int i) const { return Solution{bits ^ (1u << i)}; }

  friend bool operator==(Solution, Solution) = default;
};

// An assignment of one subtask's S decisions (the S low bits).
struct PartialSolution {
  int subtask = 0;
  std::uint16_t bits = 0;

  friend bool operator==(PartialSolution, PartialSolution) = default;
};

// Writes `partial` over the bits of its subtask in `base`.
inline Solution splice(Solution base, PartialSolution partial, int subtask_size) {
  const int offset = partial.subtask * subtask_size;
  const std::uint32_t field = (1u << subtask_size) - 1u;
  return Solution{(base.bits & ~(field << offset)) |
                  (static_cast<std::uint32_t>(partial.bits & field) << offset)};
}

inline PartialSolution extract(Solution full, int subtask, int subtask_size) {
  const std::uint32_t field = (1u << subtask_size) - 1u;
  return PartialSolution{subtask,
                         static_cast<std::uint16_t>((full.bits >> (subtask * subtask_size)) & field)};
}

// Which contributions (rows) depend on which decisions (columns).
// Every row holds exactly k+1 set bits, including its own diagonal.
class InterdependenceMatrix {
 public:
  Pattern pattern() const { return pattern_; }
  int n() const { return n_; }
  int k() const { return k_; }
  int subtask_size() const { return subtask_size_; }
  int subtask_count() const { return n_ / subtask_size_; }

  bool depends(int row, int col) const { return (rows_[row] >> col) & 1u; }
  std::uint32_t row_mask(int row) const { return rows_[row]; }
  // Dependency columns of a row, ascending, excluding the row itself.
  const std::vector<int>& dep_columns(int row) const { return dep_columns_[row]; }

  friend InterdependenceMatrix build_matrix(Pattern pattern, int n_decisions, int k,
                                            int subtask_size, Rng* rng);

 private:
  Pattern pattern_ = Pattern::kDecomposable;
  int n_ = 0;
  int k_ = 0;
  int subtask_size_ = 0;
  std::vector<std::uint32_t> rows_;
  std::vector<std::vector<int>> dep_columns_;
};

// Builds the requested interdependence pattern. Decomposable and Structured are
// deterministic (rng may be null); Unstructured draws k extra columns per row
// and redraws the whole matrix until some dependency crosses a subtask boundary.
InterdependenceMatrix build_matrix(Pattern pattern, int n_decisions, int k, int subtask_size,
                                   Rng* rng);

inline constexpr int kDefaultEnumerationCap = 24;

// Contribution tables for every decision plus the brute-forced global optimum.
// Immutable after construction; safe to share across threads.
//
// Table key convention: the own decision's bit occupies the top position of the
// (k+1)-bit index, followed by the dependency columns in ascending order.
class Landscape {
 public:
  // Draws every table entry i.i.d. uniform on [0,1) and brute-forces the optimum.
  static Landscape generate(InterdependenceMatrix matrix, Rng& rng,
                            int enumeration_cap = kDefaultEnumerationCap);

  // Builds a landscape from explicit tables (fixtures, golden tests).
  static Landscape from_tables(InterdependenceMatrix matrix,
                               std::vector<std::vector<double>> tables,
                               int enumeration_cap = kDefaultEnumerationCap);

  double contribution(Solution d, int row) const {
    return tables_[row][table_index(d, row)];
  }

  double performance(Solution d) const {
    if (!performance_cache_.empty()) return performance_cache_[d.bits];
    return performance_direct(d);
  }

  // Mean contribution of the rows owned by subtask m, resolved on the full solution.
  double subtask_mean(Solution d, int m) const {
    if (!subtask_cache_.empty()) return subtask_cache_[m][d.bits];
    return subtask_mean_direct(d, m);
  }

  double global_max() const { return global_max_; }

  const InterdependenceMatrix& matrix() const { return matrix_; }
  const std::vector<double>& table(int row) const { return tables_[row]; }
  int n() const { return matrix_.n(); }
  int subtask_count() const { return matrix_.subtask_count(); }
  int subtask_size() const { return matrix_.subtask_size(); }

  std::size_t table_index(Solution d, int row) const {
    const auto& deps = matrix_.dep_columns(row);
    std::size_t idx = static_cast<std::size_t>(d.bit(row)) << deps.size();
    for (std::size_t i = 0; i < deps.size(); ++i) {
      idx |= static_cast<std::size_t>(d.bit(deps[i])) << (deps.size() - 1 - i);
    }
    return idx;
  }

  // JSON dump (debugging / golden tests).
  std::string to_json() const;

 private:
  Landscape() = default;
  void finish_construction(int enumeration_cap);
  double performance_direct(Solution d) const;
  double subtask_mean_direct(Solution d, int m) const;

  InterdependenceMatrix matrix_;
  std::vector<std::vector<double>> tables_;
  double global_max_ = 0.0;
  // Full-enumeration caches, built for small n alongside the global optimum.
  std::vector<double> performance_cache_;
  std::vector<std::vector<double>> subtask_cache_;
};

// Exact maximum of performance over all 2^n solutions (the n <= cap guard is
// the only thing separating this from an infinite afternoon).
double compute_global_max(const Landscape& landscape, int enumeration_cap = kDefaultEnumerationCap);

double normalize_performance(double raw, double global_max);

}  // namespace nkteam

#endif  // NKTEAM_LANDSCAPE_HPP
