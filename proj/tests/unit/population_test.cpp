#include <algorithm>
#include <array>
#include <bit>

#include "doctest.h"
#include "nkteam/population.hpp"
#include "test_util.hpp"

using namespace nkteam;

TEST_CASE("init_population splits the population evenly with singleton repertoires") {
  Rng rng(3);
  const auto population = init_population(30, 3, 4, rng);
  REQUIRE(population.size() == 30);
  std::array<int, 3> per_subtask{};
  for (const Agent& agent : population) {
    CHECK(agent.repertoire.size() == 1);
    CHECK(agent.id >= 0);
    ++per_subtask[agent.subtask];
  }
  CHECK(per_subtask == std::array<int, 3>{10, 10, 10});

  const auto minimal = init_population(3, 3, 4, rng);
  CHECK(minimal.size() == 3);
  for (int m = 0; m < 3; ++m) CHECK(minimal[m].subtask == m);

  CHECK_THROWS_AS(init_population(31, 3, 4, rng), std::invalid_argument);
}

TEST_CASE("initial endowments are uniform over the sixteen partial solutions") {
  Rng rng(4);
  std::array<long, 16> counts{};
  long total = 0;
  for (int i = 0; i < 10'000; ++i) {
    for (const Agent& agent : init_population(3, 3, 4, rng)) {
      ++counts[agent.repertoire.front()];
      ++total;
    }
  }
  for (const long c : counts) {
    const double freq = static_cast<double>(c) / total;
    CHECK(std::abs(freq - 1.0 / 16.0) < 0.005);
  }
}

TEST_CASE("utility follows Eq. 1") {
  // All subtask performances equal -> utility equals that constant.
  const auto constant = testutil::constant_landscape(0.25);
  for (int m = 0; m < 3; ++m) CHECK(utility(constant, m, Solution{0}) == doctest::Approx(0.25));

  // Subtask performances (0.8, 0.4, 0.6), viewed from subtask 1.
  const auto fixed = testutil::per_decision_landscape(
      {0.8, 0.8, 0.8, 0.8, 0.4, 0.4, 0.4, 0.4, 0.6, 0.6, 0.6, 0.6});
  CHECK(utility(fixed, 0, Solution{0}) == doctest::Approx(0.65));
  CHECK(utility(fixed, 1, Solution{0}) == doctest::Approx(0.5 * (0.4 + 0.7)));
  CHECK(utility(fixed, 2, Solution{0}) == doctest::Approx(0.5 * (0.6 + 0.6)));

  // Averaging utilities over the members recovers overall performance.
  Rng gen(12);
  const auto seeded =
      Landscape::generate(build_matrix(Pattern::kUnstructured, 12, 5, 4, &gen), gen);
  for (int i = 0; i < 1000; ++i) {
    const Solution d{gen.below(1u << 12)};
    double mean = 0.0;
    for (int m = 0; m < 3; ++m) mean += utility(seeded, m, d);
    CHECK(mean / 3 == doctest::Approx(seeded.performance(d)).epsilon(1e-12));
  }
}

TEST_CASE("estimated utility is the spliced utility plus fresh noise") {
  Rng gen(13);
  const auto landscape =
      Landscape::generate(build_matrix(Pattern::kUnstructured, 12, 3, 4, &gen), gen);
  const ResidualContext context{Solution{0b001100110011}, 7};
  const PartialSolution candidate{1, 0b1010};

  Rng rng(14);
  const double noise_free =
      estimated_utility(landscape, candidate, context, NoiseSpec{0.0}, rng);
  CHECK(noise_free == spliced_utility(landscape, candidate, context));

  // A candidate identical to the context's own bits estimates the context itself.
  const PartialSolution same = extract(context.full_solution, 1, 4);
  Rng rng2(15);
  CHECK(estimated_utility(landscape, same, context, NoiseSpec{0.0}, rng2) ==
        utility(landscape, 1, context.full_solution));

  // Moment check on the error term.
  const double base = spliced_utility(landscape, candidate, context);
  Rng rng3(16);
  double sum = 0.0, sumsq = 0.0;
  const int draws = 100'000;
  for (int i = 0; i < draws; ++i) {
    const double e =
        estimated_utility(landscape, candidate, context, NoiseSpec{0.01}, rng3) - base;
    sum += e;
    sumsq += e * e;
  }
  const double mean = sum / draws;
  const double std_dev = std::sqrt(sumsq / draws - mean * mean);
  CHECK(std::abs(mean) < 2e-4);
  CHECK(std::abs(std_dev - 0.01) < 5e-4);
}

TEST_CASE("best_known is the noise-free argmax with smallest-pattern ties") {
  Rng gen(17);
  const auto landscape =
      Landscape::generate(build_matrix(Pattern::kDecomposable, 12, 3, 4, &gen), gen);
  const ResidualContext context{Solution{0}, 1};

  Agent singleton{0, 0, {0b0110}};
  CHECK(best_known(singleton, landscape, context) == 0b0110);

  // Constant landscape: everything ties, the smallest pattern wins.
  const auto constant = testutil::constant_landscape(0.5);
  Agent flat{0, 0, {3, 9, 12}};
  CHECK(best_known(flat, constant, context) == 3);

  // Distinct utilities: the higher one wins. Pin per-decision contributions so
  // that subtask 0's mean is higher when its first bit is 1.
  {
    auto matrix = build_matrix(Pattern::kDecomposable, 12, 3, 4, nullptr);
    std::vector<std::vector<double>> tables(12, std::vector<double>(16, 0.5));
    // Row 0 pays 0.7 when its own decision bit is set, 0.6 otherwise.
    for (std::size_t key = 0; key < 16; ++key) tables[0][key] = key >= 8 ? 0.7 : 0.6;
    const auto shaped = Landscape::from_tables(std::move(matrix), std::move(tables));
    Agent agent{0, 0, {0b0000, 0b0001}};
    CHECK(best_known(agent, shaped, context) == 0b0001);
  }

  // Agrees with a brute-force scan regardless of repertoire storage order.
  Rng rng(18);
  for (int trial = 0; trial < 1000; ++trial) {
    Agent agent{0, static_cast<int>(rng.below(3)), {}};
    const int size = 1 + static_cast<int>(rng.below(16));
    for (int i = 0; i < size; ++i) agent.add_to_repertoire(static_cast<std::uint16_t>(rng.below(16)));
    const ResidualContext ctx{Solution{rng.below(1u << 12)}, 1};

    const std::uint16_t reported = best_known(agent, landscape, ctx);

    std::vector<std::uint16_t> shuffled = agent.repertoire;
    for (std::size_t i = shuffled.size(); i > 1; --i) {
      std::swap(shuffled[i - 1], shuffled[rng.below(static_cast<std::uint32_t>(i))]);
    }
    double best_value = -1.0;
    std::uint16_t best_bits = 0;
    for (const std::uint16_t bits : shuffled) {
      const double value = spliced_utility(landscape, {agent.subtask, bits}, ctx);
      if (value > best_value || (value == best_value && bits < best_bits)) {
        best_value = value;
        best_bits = bits;
      }
    }
    CHECK(reported == best_bits);
  }
}

TEST_CASE("learn_step with probability zero changes nothing") {
  Rng rng(19);
  Agent agent{0, 0, {1, 5}};
  const auto before = agent.repertoire;
  for (int i = 0; i < 100; ++i) learn_step(agent, 0.0, 1, 4, rng);
  CHECK(agent.repertoire == before);
}

TEST_CASE("learn_step discovery adds only Hamming-1 neighbors and keeps the protected entry") {
  Rng rng(20);
  for (int trial = 0; trial < 10'000; ++trial) {
    Agent agent{0, 0, {0b0000}};
    learn_step(agent, 1.0, 0b0000, 4, rng);
    CHECK(agent.knows(0b0000));
    REQUIRE(agent.repertoire.size() <= 2);
    for (const std::uint16_t bits : agent.repertoire) {
      if (bits != 0b0000) CHECK(std::popcount(bits) == 1);
    }
  }
}

TEST_CASE("learn_step across full repertoires: duplicate discovery, forced forgetting") {
  Rng rng(21);
  Agent agent{0, 0, {}};
  for (std::uint16_t bits = 0; bits < 16; ++bits) agent.add_to_repertoire(bits);
  learn_step(agent, 1.0, 7, 4, rng);
  // Discovery cannot add anything new; forgetting removes one non-protected entry.
  CHECK(agent.repertoire.size() == 15);
  CHECK(agent.knows(7));
}

TEST_CASE("learn_step repertoire size drifts by at most one in each direction") {
  Rng rng(22);
  Rng gen(23);
  const auto landscape =
      Landscape::generate(build_matrix(Pattern::kUnstructured, 12, 3, 4, &gen), gen);
  Agent agent{0, 1, {0b0101}};
  for (int step = 0; step < 5000; ++step) {
    const ResidualContext ctx{Solution{rng.below(1u << 12)}, step};
    const std::uint16_t keep = best_known(agent, landscape, ctx);
    const std::size_t before = agent.repertoire.size();
    learn_step(agent, 0.7, keep, 4, rng);
    CHECK(!agent.repertoire.empty());
    CHECK(agent.knows(keep));
    const std::size_t after = agent.repertoire.size();
    CHECK(after <= before + 1);
    CHECK(after + 1 >= before);
    CHECK(std::is_sorted(agent.repertoire.begin(), agent.repertoire.end()));
  }
}

TEST_CASE("learn_step rejects a protected entry that is not known") {
  Rng rng(24);
  Agent agent{0, 0, {2}};
  CHECK_THROWS_AS(learn_step(agent, 0.5, 9, 4, rng), std::logic_error);
}
