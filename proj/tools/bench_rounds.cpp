// Times the serial reference path against the OpenMP round kernel on one
// representative scenario, and the same comparison for partial-dependence
// evaluation. Usage: nkteam_bench [rounds] [periods].

#include <chrono>
#include <cstdio>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "nkteam/analysis.hpp"
#include "nkteam/driver.hpp"
#include "nkteam/simulation.hpp"

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int main(int argc, char** argv) {
  nkteam::ScenarioConfig scenario;
  scenario.k = 5;
  scenario.pattern = nkteam::Pattern::kUnstructured;
  scenario.tau = nkteam::CompositionRegime::periodic(10);
  scenario.learn_prob = 0.5;
  scenario.coordination = nkteam::Coordination::kCoordinated;
  scenario.rounds = argc > 1 ? std::atoi(argv[1]) : 128;
  scenario.periods = argc > 2 ? std::atoi(argv[2]) : 100;
  scenario.master_seed = 7;

#ifdef _OPENMP
  const int threads = omp_get_max_threads();
#else
  const int threads = 1;
#endif

  std::printf("scenario: K=%d unstructured tau=10 p=%.1f coordinated, %d rounds x %d periods\n",
              scenario.k, scenario.learn_prob, scenario.rounds, scenario.periods);

  auto start = std::chrono::steady_clock::now();
  const auto serial = nkteam::run_scenario(scenario, 1);
  const double serial_s = seconds_since(start);
  std::printf("rounds   serial      : %7.3f s  (%.2f ms/round)\n", serial_s,
              1e3 * serial_s / scenario.rounds);

  start = std::chrono::steady_clock::now();
  const auto parallel = nkteam::run_scenario(scenario, 0);
  const double parallel_s = seconds_since(start);
  std::printf("rounds   %2d threads  : %7.3f s  (%.2f ms/round)  speedup %.2fx\n", threads,
              parallel_s, 1e3 * parallel_s / scenario.rounds, serial_s / parallel_s);

  if (serial != parallel) {
    std::printf("MISMATCH: parallel results differ from the serial reference\n");
    return 1;
  }
  std::printf("rounds   outputs identical\n");

  // Partial dependence over the records of the run above.
  using namespace nkteam::analysis;
  Dataset data({{"learn_prob", FeatureKind::kNumeric, {}},
                {"t", FeatureKind::kNumeric, {}},
                {"round", FeatureKind::kNumeric, {}}});
  for (const auto& round : serial) {
    for (const auto& record : round.records) {
      const double row[3] = {record.learn_prob, static_cast<double>(record.t),
                             static_cast<double>(record.round)};
      data.add_row(row, record.normalized_performance);
    }
  }
  const RegressionTree tree = RegressionTree::fit(data, {10, 20});

  start = std::chrono::steady_clock::now();
#ifdef _OPENMP
  omp_set_num_threads(1);
#endif
  const PDCurve pd_serial = partial_dependence(tree, data, "t");
  const double pd_serial_s = seconds_since(start);

#ifdef _OPENMP
  omp_set_num_threads(threads);
#endif
  start = std::chrono::steady_clock::now();
  const PDCurve pd_parallel = partial_dependence(tree, data, "t");
  const double pd_parallel_s = seconds_since(start);

  std::printf("pd       serial      : %7.3f s\n", pd_serial_s);
  std::printf("pd       %2d threads  : %7.3f s  speedup %.2fx\n", threads, pd_parallel_s,
              pd_serial_s / pd_parallel_s);
  if (pd_serial.values != pd_parallel.values) {
    std::printf("MISMATCH: parallel partial dependence differs from serial\n");
    return 1;
  }
  std::printf("pd       outputs identical\n");
  return 0;
}
