#include "nkteam/team.hpp"

#include <limits>
#include <stdexcept>

namespace nkteam {

bool should_reform(int t, CompositionRegime regime) {
  if (t < 1) throw std::invalid_argument("periods are 1-based");
  if (t == 1) return true;
  if (!regime.every.has_value()) return false;
  return (t - 1) % *regime.every == 0;
}

namespace {

// Noisy evaluation of every repertoire entry, one fresh error per entry, in
// repertoire order. Reports the best entry (ties keep the smaller pattern,
// which comes first in the sorted repertoire) and optionally the runner-up.
struct RankedPair {
  std::uint16_t first_bits = 0;
  double first_score = -std::numeric_limits<double>::infinity();
  std::uint16_t second_bits = 0;
  double second_score = -std::numeric_limits<double>::infinity();
};

RankedPair rank_repertoire(const Agent& agent, const Landscape& landscape,
                           const ResidualContext& context, NoiseSpec noise, Rng& rng) {
  RankedPair ranked;
  for (const std::uint16_t bits : agent.repertoire) {
    const double score = estimated_utility(landscape, {agent.subtask, bits}, context, noise, rng);
    if (score > ranked.first_score) {
      ranked.second_bits = ranked.first_bits;
      ranked.second_score = ranked.first_score;
      ranked.first_bits = bits;
      ranked.first_score = score;
    } else if (score > ranked.second_score) {
      ranked.second_bits = bits;
      ranked.second_score = score;
    }
  }
  if (agent.repertoire.size() == 1) {
    // A single known solution fills both ranks.
    ranked.second_bits = ranked.first_bits;
    ranked.second_score = ranked.first_score;
  }
  return ranked;
}

Solution concatenate(const std::vector<std::uint16_t>& parts, int subtask_size) {
  Solution out{};
  for (std::size_t m = 0; m < parts.size(); ++m) {
    out = splice(out, {static_cast<int>(m), parts[m]}, subtask_size);
  }
  return out;
}

}  // namespace

Team form_team(const std::vector<Agent>& population, const Landscape& landscape,
               const ResidualContext& context, NoiseSpec noise, Rng& rng, int period) {
  const int subtasks = landscape.subtask_count();
  Team team;
  team.members.assign(subtasks, -1);
  team.formed_at = period;

  std::vector<int> tied;
  for (int m = 0; m < subtasks; ++m) {
    double best_signal = -std::numeric_limits<double>::infinity();
    tied.clear();
    for (const Agent& agent : population) {
      if (agent.subtask != m) continue;
      const double signal = rank_repertoire(agent, landscape, context, noise, rng).first_score;
      if (signal > best_signal) {
        best_signal = signal;
        tied.assign(1, agent.id);
      } else if (signal == best_signal) {
        tied.push_back(agent.id);
      }
    }
    if (tied.empty()) throw std::logic_error("no agents available for a subtask");
    team.members[m] =
        tied.size() == 1 ? tied.front() : tied[rng.below(static_cast<std::uint32_t>(tied.size()))];
  }
  return team;
}

Solution autonomous_decision(const Team& team, const std::vector<Agent>& population,
                             const Landscape& landscape, const ResidualContext& context,
                             NoiseSpec noise, Rng& rng) {
  std::vector<std::uint16_t> parts(team.members.size());
  for (std::size_t m = 0; m < team.members.size(); ++m) {
    const Agent& member = population[team.members[m]];
    parts[m] = rank_repertoire(member, landscape, context, noise, rng).first_bits;
  }
  return concatenate(parts, landscape.subtask_size());
}

Solution coordinated_decision(const Team& team, const std::vector<Agent>& population,
                              const Landscape& landscape, const ResidualContext& context,
                              Solution previous, NoiseSpec noise, Rng& rng) {
  const std::size_t subtasks = team.members.size();

  std::vector<std::uint16_t> rank1(subtasks);
  std::vector<std::uint16_t> rank2(subtasks);
  for (std::size_t m = 0; m < subtasks; ++m) {
    const Agent& member = population[team.members[m]];
    const RankedPair ranked = rank_repertoire(member, landscape, context, noise, rng);
    rank1[m] = ranked.first_bits;
    rank2[m] = ranked.second_bits;
  }

  const Solution candidates[2] = {concatenate(rank1, landscape.subtask_size()),
                                  concatenate(rank2, landscape.subtask_size())};

  // The bar each member holds the candidates to: the realized utility of the
  // previous period's solution.
  std::vector<double> last_utility(subtasks);
  for (std::size_t m = 0; m < subtasks; ++m) {
    last_utility[m] = utility(landscape, static_cast<int>(m), previous);
  }

  for (const Solution& candidate : candidates) {
    bool unanimous = true;
    // Every member votes (and consumes its error draw) even after a veto.
    for (std::size_t m = 0; m < subtasks; ++m) {
      const double estimate =
          utility(landscape, static_cast<int>(m), candidate) + rng.normal(noise.sigma);
      if (!(estimate > last_utility[m])) unanimous = false;
    }
    if (unanimous) return candidate;
  }
  return previous;
}

}  // namespace nkteam
