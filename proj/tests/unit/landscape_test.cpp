#include <algorithm>
#include <bit>
#include <set>

#include "doctest.h"
#include "nkteam/landscape.hpp"
#include "test_util.hpp"

using namespace nkteam;

namespace {

int row_cardinality(const InterdependenceMatrix& m, int row) {
  return std::popcount(m.row_mask(row));
}

}  // namespace

TEST_CASE("decomposable matrix tiles the diagonal in (k+1) blocks") {
  const auto m = build_matrix(Pattern::kDecomposable, 12, 3, 4, nullptr);
  for (int row = 0; row < 12; ++row) {
    CHECK(m.depends(row, row));
    CHECK(row_cardinality(m, row) == 4);
    const int block = row / 4;
    for (int col = 0; col < 12; ++col) {
      CHECK(m.depends(row, col) == (col / 4 == block));
      // Perfectly decomposable at K=3: nothing crosses a subtask boundary.
      if (m.depends(row, col)) CHECK(col / 4 == row / 4);
    }
  }
}

TEST_CASE("decomposable K=5 uses two 6x6 blocks") {
  const auto m = build_matrix(Pattern::kDecomposable, 12, 5, 4, nullptr);
  for (int row = 0; row < 12; ++row) {
    CHECK(row_cardinality(m, row) == 6);
    for (int col = 0; col < 12; ++col) {
      CHECK(m.depends(row, col) == (col / 6 == row / 6));
    }
  }
}

TEST_CASE("structured matrix routes the first K decisions everywhere") {
  const auto m = build_matrix(Pattern::kStructured, 12, 5, 4, nullptr);
  for (int row = 0; row < 12; ++row) {
    CHECK(m.depends(row, row));
    CHECK(row_cardinality(m, row) == 6);
    for (int col = 0; col < 12; ++col) {
      const bool expected = row < 6 ? col < 6 : (col < 5 || col == row);
      CHECK(m.depends(row, col) == expected);
    }
  }
}

TEST_CASE("unstructured matrices keep row cardinality and cross subtasks") {
  Rng rng(2024);
  for (int draw = 0; draw < 1000; ++draw) {
    const auto m = build_matrix(Pattern::kUnstructured, 12, 3, 4, &rng);
    bool crossing = false;
    for (int row = 0; row < 12; ++row) {
      CHECK(m.depends(row, row));
      CHECK(row_cardinality(m, row) == 4);
      for (int col = 0; col < 12; ++col) {
        if (m.depends(row, col) && col / 4 != row / 4) crossing = true;
      }
    }
    CHECK(crossing);
  }
}

TEST_CASE("matrix construction rejects bad geometry") {
  CHECK_THROWS_AS(build_matrix(Pattern::kDecomposable, 12, 4, 4, nullptr),
                  std::invalid_argument);  // 5 does not divide 12
  CHECK_THROWS_AS(build_matrix(Pattern::kStructured, 12, 12, 4, nullptr), std::invalid_argument);
  CHECK_THROWS_AS(build_matrix(Pattern::kStructured, 12, -1, 4, nullptr), std::invalid_argument);
  CHECK_THROWS_AS(build_matrix(Pattern::kUnstructured, 12, 3, 4, nullptr), std::invalid_argument);
}

TEST_CASE("landscape generation is deterministic and uniform on [0,1)") {
  const auto matrix = build_matrix(Pattern::kDecomposable, 12, 3, 4, nullptr);

  Rng a(77), b(77);
  const auto first = Landscape::generate(matrix, a);
  const auto second = Landscape::generate(matrix, b);
  for (int row = 0; row < 12; ++row) {
    CHECK(first.table(row) == second.table(row));
    CHECK(first.table(row).size() == 16);
    for (const double v : first.table(row)) {
      CHECK(v >= 0.0);
      CHECK(v < 1.0);
    }
  }
  CHECK(first.global_max() == second.global_max());

  // Law of large numbers: mean entry over 100 seeded landscapes.
  double sum = 0.0;
  long count = 0;
  Rng rng(99);
  for (int i = 0; i < 100; ++i) {
    const auto l = Landscape::generate(matrix, rng);
    for (int row = 0; row < 12; ++row) {
      for (const double v : l.table(row)) {
        sum += v;
        ++count;
      }
    }
  }
  CHECK(sum / count == doctest::Approx(0.5).epsilon(0.02));  // 0.5 +/- 0.01
}

TEST_CASE("contribution reads the table the way the matrix says") {
  const auto constant = testutil::constant_landscape(0.5);
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    const Solution d{rng.below(1u << 12)};
    for (int row = 0; row < 12; ++row) CHECK(constant.contribution(d, row) == 0.5);
  }

  Rng gen(11);
  const auto seeded =
      Landscape::generate(build_matrix(Pattern::kUnstructured, 12, 3, 4, &gen), gen);

  // Key 0 of table 0 is the all-zeros solution.
  CHECK(seeded.contribution(Solution{0}, 0) == seeded.table(0)[0]);

  // Flipping a decision outside a row's dependency set leaves it unchanged,
  // and the independent oracle agrees everywhere.
  for (int i = 0; i < 200; ++i) {
    const Solution d{gen.below(1u << 12)};
    for (int row = 0; row < 12; ++row) {
      CHECK(seeded.contribution(d, row) == testutil::contribution_oracle(seeded, d, row));
      for (int col = 0; col < 12; ++col) {
        if (!seeded.matrix().depends(row, col)) {
          CHECK(seeded.contribution(d.with_flipped(col), row) == seeded.contribution(d, row));
        }
      }
    }
  }
}

TEST_CASE("performance is the mean of the twelve contributions") {
  const auto constant = testutil::constant_landscape(0.5);
  CHECK(constant.performance(Solution{0b101010101010}) == doctest::Approx(0.5));

  // One contribution of 1, eleven of 0.
  std::vector<double> spike(12, 0.0);
  spike[0] = 1.0;
  const auto spiky = testutil::per_decision_landscape(spike);
  CHECK(spiky.performance(Solution{0}) == doctest::Approx(1.0 / 12.0));

  Rng gen(21);
  const auto seeded =
      Landscape::generate(build_matrix(Pattern::kUnstructured, 12, 5, 4, &gen), gen);
  for (int i = 0; i < 1000; ++i) {
    const Solution d{gen.below(1u << 12)};
    CHECK(seeded.performance(d) ==
          doctest::Approx(testutil::performance_oracle(seeded, d)).epsilon(1e-12));
  }
}

TEST_CASE("subtask performance partitions the overall mean") {
  const auto constant = testutil::constant_landscape(0.5);
  for (int m = 0; m < 3; ++m) CHECK(constant.subtask_mean(Solution{0xF0F}, m) == 0.5);

  Rng gen(31);
  const auto seeded =
      Landscape::generate(build_matrix(Pattern::kStructured, 12, 5, 4, &gen), gen);
  for (int i = 0; i < 500; ++i) {
    const Solution d{gen.below(1u << 12)};
    double mean = 0.0;
    for (int m = 0; m < 3; ++m) mean += seeded.subtask_mean(d, m);
    CHECK(seeded.performance(d) == doctest::Approx(mean / 3).epsilon(1e-12));
  }
  CHECK_THROWS_AS(seeded.subtask_mean(Solution{0}, 3), std::out_of_range);
}

TEST_CASE("decomposable K=3 subtasks ignore the other subtasks' bits") {
  Rng gen(41);
  const auto l = Landscape::generate(build_matrix(Pattern::kDecomposable, 12, 3, 4, &gen), gen);
  for (std::uint32_t bits = 0; bits < (1u << 12); ++bits) {
    const Solution d{bits};
    const double own = l.subtask_mean(d, 0);
    for (int flip = 4; flip < 12; ++flip) {
      CHECK(l.subtask_mean(d.with_flipped(flip), 0) == own);
    }
  }
}

TEST_CASE("global max matches exhaustive enumeration") {
  const auto constant = testutil::constant_landscape(0.5);
  CHECK(constant.global_max() == 0.5);

  // K=0 landscapes are separable: the optimum is the mean of per-row maxima.
  Rng gen(51);
  const auto separable =
      Landscape::generate(build_matrix(Pattern::kDecomposable, 12, 0, 4, &gen), gen);
  double separable_best = 0.0;
  for (int row = 0; row < 12; ++row) {
    separable_best += std::max(separable.table(row)[0], separable.table(row)[1]);
  }
  separable_best /= 12;
  CHECK(separable.global_max() == doctest::Approx(separable_best).epsilon(1e-12));

  // N=4 toy, enumerated by hand with the oracle.
  const auto toy = Landscape::generate(build_matrix(Pattern::kDecomposable, 4, 1, 2, &gen), gen);
  double toy_best = 0.0;
  for (std::uint32_t bits = 0; bits < 16; ++bits) {
    double sum = 0.0;
    for (int row = 0; row < 4; ++row) {
      sum += testutil::contribution_oracle(toy, Solution{bits}, row);
    }
    toy_best = std::max(toy_best, sum / 4);
  }
  CHECK(toy.global_max() == doctest::Approx(toy_best).epsilon(1e-12));
  CHECK(compute_global_max(toy) == toy.global_max());

  // Performance never exceeds the stored optimum.
  Rng gen2(52);
  const auto rugged =
      Landscape::generate(build_matrix(Pattern::kUnstructured, 12, 5, 4, &gen2), gen2);
  for (int i = 0; i < 2000; ++i) {
    const Solution d{gen2.below(1u << 12)};
    CHECK(rugged.performance(d) <= rugged.global_max());
  }
}

TEST_CASE("higher K means more local optima on average") {
  Rng gen(61);
  double sum_k3 = 0.0, sum_k5 = 0.0;
  for (int i = 0; i < 200; ++i) {
    const auto k3 = Landscape::generate(build_matrix(Pattern::kUnstructured, 12, 3, 4, &gen), gen);
    const auto k5 = Landscape::generate(build_matrix(Pattern::kUnstructured, 12, 5, 4, &gen), gen);
    sum_k3 += testutil::local_optima_count(k3);
    sum_k5 += testutil::local_optima_count(k5);
  }
  CHECK(sum_k5 / 200 > sum_k3 / 200);
}

TEST_CASE("normalize_performance divides by the optimum and checks its bounds") {
  CHECK(normalize_performance(0.5, 0.5) == 1.0);
  CHECK(normalize_performance(0.25, 0.5) == 0.5);
  CHECK_THROWS_AS(normalize_performance(0.6, 0.5), std::logic_error);
  CHECK_THROWS_AS(normalize_performance(0.1, 0.0), std::logic_error);
}

TEST_CASE("landscape JSON dump carries the documented fields") {
  Rng gen(71);
  const auto l = Landscape::generate(build_matrix(Pattern::kStructured, 12, 3, 4, &gen), gen);
  const std::string json = l.to_json();
  CHECK(json.find("\"pattern\":\"structured\"") != std::string::npos);
  CHECK(json.find("\"N\":12") != std::string::npos);
  CHECK(json.find("\"K\":3") != std::string::npos);
  CHECK(json.find("\"matrix\":[\"1111") != std::string::npos);
  CHECK(json.find("\"global_max\":") != std::string::npos);
}

TEST_CASE("enumeration cap guards the brute force") {
  Rng gen(81);
  CHECK_THROWS_AS(
      Landscape::generate(build_matrix(Pattern::kDecomposable, 26, 1, 13, &gen), gen, 24),
      std::runtime_error);
}
