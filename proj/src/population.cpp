#include "nkteam/population.hpp"

#include <algorithm>
#include <stdexcept>

namespace nkteam {

bool Agent::knows(std::uint16_t bits) const {
  return std::binary_search(repertoire.begin(), repertoire.end(), bits);
}

bool Agent::add_to_repertoire(std::uint16_t bits) {
  const auto pos = std::lower_bound(repertoire.begin(), repertoire.end(), bits);
  if (pos != repertoire.end() && *pos == bits) return false;
  repertoire.insert(pos, bits);
  return true;
}

std::vector<Agent> init_population(int pop_size, int m_subtasks, int subtask_size, Rng& rng) {
  if (m_subtasks <= 0 || pop_size <= 0 || pop_size % m_subtasks != 0) {
    throw std::invalid_argument("pop_size must be a positive multiple of m_subtasks");
  }
  const int per_subtask = pop_size / m_subtasks;
  const std::uint32_t partials = 1u << subtask_size;
  std::vector<Agent> population(pop_size);
  for (int id = 0; id < pop_size; ++id) {
    Agent& agent = population[id];
    agent.id = id;
    agent.subtask = id / per_subtask;
    agent.repertoire.push_back(static_cast<std::uint16_t>(rng.below(partials)));
  }
  return population;
}

double utility(const Landscape& landscape, int m, Solution full_solution) {
  const int subtasks = landscape.subtask_count();
  const double own = landscape.subtask_mean(full_solution, m);
  if (subtasks == 1) return own;
  double residual = 0.0;
  for (int r = 0; r < subtasks; ++r) {
    if (r != m) residual += landscape.subtask_mean(full_solution, r);
  }
  return 0.5 * (own + residual / (subtasks - 1));
}

double spliced_utility(const Landscape& landscape, PartialSolution candidate,
                       const ResidualContext& context) {
  const Solution merged = splice(context.full_solution, candidate, landscape.subtask_size());
  return utility(landscape, candidate.subtask, merged);
}

double estimated_utility(const Landscape& landscape, PartialSolution candidate,
                         const ResidualContext& context, NoiseSpec noise, Rng& rng) {
  return spliced_utility(landscape, candidate, context) + rng.normal(noise.sigma);
}

std::uint16_t best_known(const Agent& agent, const Landscape& landscape,
                         const ResidualContext& context) {
  if (agent.repertoire.empty()) throw std::logic_error("agent repertoire is empty");
  std::uint16_t best = agent.repertoire.front();
  double best_value = spliced_utility(landscape, {agent.subtask, best}, context);
  for (std::size_t i = 1; i < agent.repertoire.size(); ++i) {
    const std::uint16_t bits = agent.repertoire[i];
    const double value = spliced_utility(landscape, {agent.subtask, bits}, context);
    // Strict > over the ascending repertoire keeps the smallest pattern on ties.
    if (value > best_value) {
      best_value = value;
      best = bits;
    }
  }
  return best;
}

void learn_step(Agent& agent, double prob, std::uint16_t protected_bits, int subtask_size,
                Rng& rng) {
  if (!agent.knows(protected_bits)) {
    throw std::logic_error("protected partial solution is not in the repertoire");
  }

  // Discovery first: flip one decision of a uniformly chosen known solution.
  if (rng.bernoulli(prob)) {
    const std::uint16_t base =
        agent.repertoire[rng.below(static_cast<std::uint32_t>(agent.repertoire.size()))];
    const int flip = static_cast<int>(rng.below(static_cast<std::uint32_t>(subtask_size)));
    agent.add_to_repertoire(static_cast<std::uint16_t>(base ^ (1u << flip)));
  }

  // Forgetting: drop a uniformly chosen non-protected entry, if any exists.
  if (rng.bernoulli(prob) && agent.repertoire.size() > 1) {
    const std::uint32_t eligible = static_cast<std::uint32_t>(agent.repertoire.size()) - 1;
    std::uint32_t pick = rng.below(eligible);
    for (std::size_t i = 0; i < agent.repertoire.size(); ++i) {
      if (agent.repertoire[i] == protected_bits) continue;
      if (pick == 0) {
        agent.repertoire.erase(agent.repertoire.begin() + static_cast<std::ptrdiff_t>(i));
        break;
      }
      --pick;
    }
  }
}

}  // namespace nkteam
