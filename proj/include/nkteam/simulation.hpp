#ifndef NKTEAM_SIMULATION_HPP
#define NKTEAM_SIMULATION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "nkteam/team.hpp"

namespace nkteam {

enum class Coordination { kAutonomous, kCoordinated };
enum class LearningScope { kAll, kMembers };

std::string_view to_string(Coordination c);
Coordination coordination_from_string(std::string_view s);
std::string_view to_string(LearningScope s);
LearningScope learning_scope_from_string(std::string_view s);

// tau rendered for configs and CSV: "none" for the long-term regime.
std::string to_string(CompositionRegime regime);

// One cell of the experiment grid.
struct ScenarioConfig {
  int n_decisions = 12;
  int m_subtasks = 3;
  int population_size = 30;

  int k = 3;
  Pattern pattern = Pattern::kDecomposable;
  CompositionRegime tau = CompositionRegime::long_term();
  double learn_prob = 0.0;
  Coordination coordination = Coordination::kAutonomous;

  int periods = 200;
  int rounds = 1500;
  std::uint64_t master_seed = 0;
  NoiseSpec noise{};
  LearningScope learning_scope = LearningScope::kAll;

  int subtask_size() const { return n_decisions / m_subtasks; }
};

struct PeriodRecord {
  int k = 0;
  Pattern pattern = Pattern::kDecomposable;
  CompositionRegime tau{};
  double learn_prob = 0.0;
  Coordination coordination = Coordination::kAutonomous;
  int round = 0;
  int t = 0;
  double raw_performance = 0.0;
  double normalized_performance = 0.0;
  bool reformed = false;
  std::vector<int> member_ids;

  friend bool operator==(const PeriodRecord&, const PeriodRecord&) = default;
};

struct RoundResult {
  std::vector<PeriodRecord> records;
  double landscape_global_max = 0.0;

  friend bool operator==(const RoundResult&, const RoundResult&) = default;
};

struct RoundFailure {
  int round_index = 0;
  std::string message;
};

// Deterministic per-round seed from (master seed, factor levels, round index).
// The coordination flag is excluded on purpose: autonomous and coordinated
// runs of the same cell face identical landscapes, populations and d0.
std::uint64_t round_seed(const ScenarioConfig& config, int round_index);

// Landscape, population and initial solution of a round, plus the rng that
// drives the period loop. Split out so tests can inspect the starting state.
struct RoundInit {
  Landscape landscape;
  std::vector<Agent> population;
  Solution initial_solution;
  Rng dynamics;
};

RoundInit make_round_init(const ScenarioConfig& config, int round_index);

// The per-period sequence: (re)form the team, decide, record, learn.
RoundResult run_round(const ScenarioConfig& config, int round_index);

// Runs the given rounds, in parallel when parallelism != 1 and OpenMP is
// available. Results are positionally aligned with `round_indices` and
// identical at every parallelism level; parallelism <= 0 means "all cores".
// Per-round failures are collected into `failures` when non-null (the failed
// slots stay empty), otherwise the first failure is rethrown.
std::vector<RoundResult> run_rounds(const ScenarioConfig& config,
                                    const std::vector<int>& round_indices, int parallelism,
                                    std::vector<RoundFailure>* failures = nullptr);

// All rounds 0..config.rounds-1.
std::vector<RoundResult> run_scenario(const ScenarioConfig& config, int parallelism,
                                      std::vector<RoundFailure>* failures = nullptr);

// The scenario grid: Cartesian product of the factor levels over a shared base.
struct GridConfig {
  ScenarioConfig base;
  std::vector<int> k_levels = {3, 5};
  std::vector<Pattern> pattern_levels = {Pattern::kDecomposable, Pattern::kStructured,
                                         Pattern::kUnstructured};
  std::vector<CompositionRegime> tau_levels = {CompositionRegime::long_term(),
                                               CompositionRegime::periodic(10),
                                               CompositionRegime::periodic(1)};
  std::vector<double> learn_prob_levels = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5,
                                           0.6, 0.7, 0.8, 0.9, 1.0};
  std::vector<Coordination> coordination_levels = {Coordination::kAutonomous,
                                                   Coordination::kCoordinated};
};

// K (outer) x pattern x tau x learn_prob x coordination (inner).
std::vector<ScenarioConfig> enumerate_grid(const GridConfig& grid);

// Stable identity of a scenario for checkpoint manifests. Covers everything
// that shapes its records except the round count.
std::uint64_t scenario_hash(const ScenarioConfig& config);
std::uint64_t grid_hash(const GridConfig& grid);

}  // namespace nkteam

#endif  // NKTEAM_SIMULATION_HPP
