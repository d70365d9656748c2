#include "nkteam/simulation.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nkteam {

std::string_view to_string(Coordination c) {
  return c == Coordination::kAutonomous ? "autonomous" : "coordinated";
}

Coordination coordination_from_string(std::string_view s) {
  if (s == "autonomous") return Coordination::kAutonomous;
  if (s == "coordinated") return Coordination::kCoordinated;
  throw std::invalid_argument("unknown coordination mode: " + std::string(s));
}

std::string_view to_string(LearningScope s) {
  return s == LearningScope::kAll ? "all" : "members";
}

LearningScope learning_scope_from_string(std::string_view s) {
  if (s == "all") return LearningScope::kAll;
  if (s == "members") return LearningScope::kMembers;
  throw std::invalid_argument("unknown learning scope: " + std::string(s));
}

std::string to_string(CompositionRegime regime) {
  return regime.every.has_value() ? std::to_string(*regime.every) : std::string("none");
}

namespace {

std::uint64_t tau_code(CompositionRegime regime) {
  // Finite regimes are >= 1, so 0 is free to mean "never".
  return regime.every.has_value() ? static_cast<std::uint64_t>(*regime.every) : 0;
}

std::uint64_t prob_code(double p) {
  return static_cast<std::uint64_t>(std::llround(p * 1e6));
}

}  // namespace

std::uint64_t round_seed(const ScenarioConfig& config, int round_index) {
  return SeedMixer(config.master_seed)
      .mix(static_cast<std::uint64_t>(config.n_decisions))
      .mix(static_cast<std::uint64_t>(config.m_subtasks))
      .mix(static_cast<std::uint64_t>(config.population_size))
      .mix(static_cast<std::uint64_t>(config.k))
      .mix(static_cast<std::uint64_t>(config.pattern))
      .mix(tau_code(config.tau))
      .mix(prob_code(config.learn_prob))
      .mix(static_cast<std::uint64_t>(round_index))
      .value();
}

RoundInit make_round_init(const ScenarioConfig& config, int round_index) {
  const std::uint64_t seed = round_seed(config, round_index);
  Rng init_rng(SeedMixer(seed).mix(1).value());
  Rng dynamics(SeedMixer(seed).mix(2).value());

  InterdependenceMatrix matrix = build_matrix(config.pattern, config.n_decisions, config.k,
                                              config.subtask_size(), &init_rng);
  Landscape landscape = Landscape::generate(std::move(matrix), init_rng);
  std::vector<Agent> population =
      init_population(config.population_size, config.m_subtasks, config.subtask_size(), init_rng);
  const Solution d0{init_rng.below(1u << config.n_decisions)};
  return RoundInit{std::move(landscape), std::move(population), d0, dynamics};
}

RoundResult run_round(const ScenarioConfig& config, int round_index) {
  RoundInit init = make_round_init(config, round_index);
  const Landscape& landscape = init.landscape;
  std::vector<Agent>& population = init.population;
  Rng& rng = init.dynamics;

  RoundResult result;
  result.landscape_global_max = landscape.global_max();
  result.records.reserve(config.periods);

  Solution current = init.initial_solution;
  Team team;

  for (int t = 1; t <= config.periods; ++t) {
    const ResidualContext context{current, t - 1};

    const bool reformed = should_reform(t, config.tau);
    if (reformed) team = form_team(population, landscape, context, config.noise, rng, t);

    current = config.coordination == Coordination::kAutonomous
                  ? autonomous_decision(team, population, landscape, context, config.noise, rng)
                  : coordinated_decision(team, population, landscape, context, current,
                                         config.noise, rng);

    const double raw = landscape.performance(current);
    PeriodRecord record;
    record.k = config.k;
    record.pattern = config.pattern;
    record.tau = config.tau;
    record.learn_prob = config.learn_prob;
    record.coordination = config.coordination;
    record.round = round_index;
    record.t = t;
    record.raw_performance = raw;
    record.normalized_performance = normalize_performance(raw, landscape.global_max());
    record.reformed = reformed;
    record.member_ids = team.members;
    result.records.push_back(std::move(record));

    // Learning closes the period, guarded by the utility maximizer under the
    // residual context the period just produced.
    const ResidualContext learn_context{current, t};
    for (Agent& agent : population) {
      if (config.learning_scope == LearningScope::kMembers &&
          team.members[agent.subtask] != agent.id) {
        continue;
      }
      const std::uint16_t keep = best_known(agent, landscape, learn_context);
      learn_step(agent, config.learn_prob, keep, config.subtask_size(), rng);
    }
  }
  return result;
}

std::vector<RoundResult> run_rounds(const ScenarioConfig& config,
                                    const std::vector<int>& round_indices, int parallelism,
                                    std::vector<RoundFailure>* failures) {
  const int count = static_cast<int>(round_indices.size());
  std::vector<RoundResult> results(count);
  std::vector<RoundFailure> local_failures;

#ifdef _OPENMP
  if (parallelism != 1) {
    const int threads = parallelism > 0 ? parallelism : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (int i = 0; i < count; ++i) {
      try {
        results[i] = run_round(config, round_indices[i]);
      } catch (const std::exception& e) {
#pragma omp critical
        local_failures.push_back({round_indices[i], e.what()});
      }
    }
  } else
#endif
  {
    // Serial reference path; the parallel kernel must match it byte for byte.
    for (int i = 0; i < count; ++i) {
      try {
        results[i] = run_round(config, round_indices[i]);
      } catch (const std::exception& e) {
        local_failures.push_back({round_indices[i], e.what()});
      }
    }
  }

  if (!local_failures.empty()) {
    if (failures == nullptr) {
      throw std::runtime_error("round " + std::to_string(local_failures.front().round_index) +
                               " failed: " + local_failures.front().message);
    }
    for (auto& failure : local_failures) failures->push_back(std::move(failure));
  }
  return results;
}

std::vector<RoundResult> run_scenario(const ScenarioConfig& config, int parallelism,
                                      std::vector<RoundFailure>* failures) {
  std::vector<int> indices(config.rounds);
  for (int i = 0; i < config.rounds; ++i) indices[i] = i;
  return run_rounds(config, indices, parallelism, failures);
}

std::vector<ScenarioConfig> enumerate_grid(const GridConfig& grid) {
  std::vector<ScenarioConfig> scenarios;
  scenarios.reserve(grid.k_levels.size() * grid.pattern_levels.size() * grid.tau_levels.size() *
                    grid.learn_prob_levels.size() * grid.coordination_levels.size());
  for (const int k : grid.k_levels) {
    for (const Pattern pattern : grid.pattern_levels) {
      for (const CompositionRegime& tau : grid.tau_levels) {
        for (const double learn_prob : grid.learn_prob_levels) {
          for (const Coordination coordination : grid.coordination_levels) {
            ScenarioConfig scenario = grid.base;
            scenario.k = k;
            scenario.pattern = pattern;
            scenario.tau = tau;
            scenario.learn_prob = learn_prob;
            scenario.coordination = coordination;
            scenarios.push_back(scenario);
          }
        }
      }
    }
  }
  return scenarios;
}

std::uint64_t scenario_hash(const ScenarioConfig& config) {
  return SeedMixer(0x6e6b7465616d0001ULL)  // namespace tag
      .mix(config.master_seed)
      .mix(static_cast<std::uint64_t>(config.n_decisions))
      .mix(static_cast<std::uint64_t>(config.m_subtasks))
      .mix(static_cast<std::uint64_t>(config.population_size))
      .mix(static_cast<std::uint64_t>(config.periods))
      .mix(std::bit_cast<std::uint64_t>(config.noise.sigma))
      .mix(static_cast<std::uint64_t>(config.learning_scope))
      .mix(static_cast<std::uint64_t>(config.k))
      .mix(static_cast<std::uint64_t>(config.pattern))
      .mix(tau_code(config.tau))
      .mix(prob_code(config.learn_prob))
      .mix(static_cast<std::uint64_t>(config.coordination))
      .value();
}

std::uint64_t grid_hash(const GridConfig& grid) {
  SeedMixer mixer(0x6e6b7465616d0002ULL);
  for (const ScenarioConfig& scenario : enumerate_grid(grid)) {
    mixer.mix(scenario_hash(scenario));
  }
  return mixer.value();
}

}  // namespace nkteam
