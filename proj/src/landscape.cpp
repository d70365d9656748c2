#include "nkteam/landscape.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace nkteam {

std::string_view to_string(Pattern p) {
  switch (p) {
    case Pattern::kDecomposable: return "decomposable";
    case Pattern::kStructured: return "structured";
    case Pattern::kUnstructured: return "unstructured";
  }
  return "?";
}

Pattern pattern_from_string(std::string_view s) {
  if (s == "decomposable") return Pattern::kDecomposable;
  if (s == "structured") return Pattern::kStructured;
  if (s == "unstructured") return Pattern::kUnstructured;
  throw std::invalid_argument("unknown interdependence pattern: " + std::string(s));
}

namespace {

std::vector<std::uint32_t> decomposable_rows(int n, int k) {
  // (k+1) x (k+1) all-true blocks tiling the diagonal.
  std::vector<std::uint32_t> rows(n);
  const int block = k + 1;
  for (int row = 0; row < n; ++row) {
    const int start = (row / block) * block;
    rows[row] = ((1u << block) - 1u) << start;
  }
  return rows;
}

std::vector<std::uint32_t> structured_rows(int n, int k) {
  // The first k decisions feed every later contribution; the first k+1 rows
  // depend on the first k+1 decisions so that row cardinality stays k+1.
  std::vector<std::uint32_t> rows(n);
  const std::uint32_t head = (1u << k) - 1u;
  for (int row = 0; row < n; ++row) {
    if (row < k + 1) {
      rows[row] = (1u << (k + 1)) - 1u;
    } else {
      rows[row] = head | (1u << row);
    }
  }
  return rows;
}

bool crosses_subtask(const std::vector<std::uint32_t>& rows, int subtask_size) {
  for (int row = 0; row < static_cast<int>(rows.size()); ++row) {
    const int home = row / subtask_size;
    for (int col = 0; col < static_cast<int>(rows.size()); ++col) {
      if (((rows[row] >> col) & 1u) && col / subtask_size != home) return true;
    }
  }
  return false;
}

std::vector<std::uint32_t> unstructured_rows(int n, int k, int subtask_size, Rng& rng) {
  std::vector<std::uint32_t> rows(n);
  for (;;) {
    for (int row = 0; row < n; ++row) {
      std::uint32_t mask = 1u << row;
      int picked = 0;
      while (picked < k) {
        const int col = static_cast<int>(rng.below(static_cast<std::uint32_t>(n)));
        if ((mask >> col) & 1u) continue;
        mask |= 1u << col;
        ++picked;
      }
      rows[row] = mask;
    }
    // k == 0 leaves only diagonals; no draw can ever cross a boundary then.
    if (k == 0 || crosses_subtask(rows, subtask_size)) return rows;
  }
}

}  // namespace

InterdependenceMatrix build_matrix(Pattern pattern, int n_decisions, int k, int subtask_size,
                                   Rng* rng) {
  if (n_decisions <= 0 || n_decisions > 31) {
    throw std::invalid_argument("n_decisions must be in [1,31]");
  }
  if (k < 0 || k >= n_decisions) {
    throw std::invalid_argument("k must satisfy 0 <= k < n_decisions");
  }
  if (subtask_size <= 0 || n_decisions % subtask_size != 0) {
    throw std::invalid_argument("subtask_size must divide n_decisions");
  }

  InterdependenceMatrix m;
  m.pattern_ = pattern;
  m.n_ = n_decisions;
  m.k_ = k;
  m.subtask_size_ = subtask_size;

  switch (pattern) {
    case Pattern::kDecomposable:
      if (n_decisions % (k + 1) != 0) {
        throw std::invalid_argument(
            "decomposable pattern requires (k+1) to divide n_decisions");
      }
      m.rows_ = decomposable_rows(n_decisions, k);
      break;
    case Pattern::kStructured:
      m.rows_ = structured_rows(n_decisions, k);
      break;
    case Pattern::kUnstructured:
      if (rng == nullptr) {
        throw std::invalid_argument("unstructured pattern requires a random stream");
      }
      m.rows_ = unstructured_rows(n_decisions, k, subtask_size, *rng);
      break;
  }

  m.dep_columns_.resize(n_decisions);
  for (int row = 0; row < n_decisions; ++row) {
    for (int col = 0; col < n_decisions; ++col) {
      if (col != row && m.depends(row, col)) m.dep_columns_[row].push_back(col);
    }
  }
  return m;
}

double Landscape::performance_direct(Solution d) const {
  double sum = 0.0;
  for (int row = 0; row < matrix_.n(); ++row) sum += contribution(d, row);
  return sum / matrix_.n();
}

double Landscape::subtask_mean_direct(Solution d, int m) const {
  const int s = matrix_.subtask_size();
  if (m < 0 || m >= matrix_.subtask_count()) {
    throw std::out_of_range("subtask index out of range");
  }
  double sum = 0.0;
  for (int row = m * s; row < (m + 1) * s; ++row) sum += contribution(d, row);
  return sum / s;
}

namespace {
// Caches are only worth their memory for small n; above this we evaluate directly.
constexpr int kCacheMaxN = 20;
}  // namespace

void Landscape::finish_construction(int enumeration_cap) {
  const int n = matrix_.n();
  for (int row = 0; row < n; ++row) {
    const std::size_t expect = std::size_t{1} << (matrix_.k() + 1);
    if (tables_[row].size() != expect) {
      throw std::invalid_argument("contribution table has wrong cardinality");
    }
  }
  if (n > enumeration_cap) {
    throw std::runtime_error("n_decisions exceeds the exhaustive enumeration cap");
  }

  const std::size_t count = std::size_t{1} << n;
  const bool cache = n <= kCacheMaxN;
  if (cache) {
    performance_cache_.resize(count);
    subtask_cache_.assign(matrix_.subtask_count(),
                          std::vector<double>(count));
  }
  double best = 0.0;
  for (std::size_t bits = 0; bits < count; ++bits) {
    const Solution d{static_cast<std::uint32_t>(bits)};
    const double perf = performance_direct(d);
    best = std::max(best, perf);
    if (cache) {
      performance_cache_[bits] = perf;
      for (int m = 0; m < matrix_.subtask_count(); ++m) {
        subtask_cache_[m][bits] = subtask_mean_direct(d, m);
      }
    }
  }
  global_max_ = best;
}

Landscape Landscape::generate(InterdependenceMatrix matrix, Rng& rng, int enumeration_cap) {
  Landscape l;
  const int n = matrix.n();
  const std::size_t table_size = std::size_t{1} << (matrix.k() + 1);
  l.matrix_ = std::move(matrix);
  l.tables_.resize(n);
  for (int row = 0; row < n; ++row) {
    l.tables_[row].resize(table_size);
    for (auto& entry : l.tables_[row]) entry = rng.uniform01();
  }
  l.finish_construction(enumeration_cap);
  return l;
}

Landscape Landscape::from_tables(InterdependenceMatrix matrix,
                                 std::vector<std::vector<double>> tables, int enumeration_cap) {
  if (static_cast<int>(tables.size()) != matrix.n()) {
    throw std::invalid_argument("expected one contribution table per decision");
  }
  Landscape l;
  l.matrix_ = std::move(matrix);
  l.tables_ = std::move(tables);
  l.finish_construction(enumeration_cap);
  return l;
}

double compute_global_max(const Landscape& landscape, int enumeration_cap) {
  const int n = landscape.n();
  if (n > enumeration_cap) {
    throw std::runtime_error("n_decisions exceeds the exhaustive enumeration cap");
  }
  double best = 0.0;
  const std::size_t count = std::size_t{1} << n;
  for (std::size_t bits = 0; bits < count; ++bits) {
    best = std::max(best, landscape.performance(Solution{static_cast<std::uint32_t>(bits)}));
  }
  return best;
}

double normalize_performance(double raw, double global_max) {
  if (!(global_max > 0.0)) throw std::logic_error("global max must be positive");
  if (raw < 0.0 || raw > global_max) {
    throw std::logic_error("raw performance outside [0, global_max]");
  }
  return raw / global_max;
}

std::string Landscape::to_json() const {
  std::string out = "{";
  out += "\"pattern\":\"";
  out += to_string(matrix_.pattern());
  out += "\",\"N\":" + std::to_string(matrix_.n());
  out += ",\"K\":" + std::to_string(matrix_.k());
  out += ",\"matrix\":[";
  for (int row = 0; row < matrix_.n(); ++row) {
    if (row) out += ',';
    out += '"';
    for (int col = 0; col < matrix_.n(); ++col) out += matrix_.depends(row, col) ? '1' : '0';
    out += '"';
  }
  out += "],\"tables\":[";
  char buf[32];
  for (int row = 0; row < matrix_.n(); ++row) {
    if (row) out += ',';
    out += '[';
    for (std::size_t i = 0; i < tables_[row].size(); ++i) {
      if (i) out += ',';
      std::snprintf(buf, sizeof(buf), "%.17g", tables_[row][i]);
      out += buf;
    }
    out += ']';
  }
  std::snprintf(buf, sizeof(buf), "%.17g", global_max_);
  out += "],\"global_max\":";
  out += buf;
  out += '}';
  return out;
}

}  // namespace nkteam
