#ifndef NKTEAM_TEAM_HPP
#define NKTEAM_TEAM_HPP

#include <optional>
#include <vector>

#include "nkteam/population.hpp"

namespace nkteam {

// How often team formation recurs: never after the first period (long-term),
// or every `every` periods.
struct CompositionRegime {
  std::optional<int> every;

  static CompositionRegime long_term() { return {}; }
  static CompositionRegime periodic(int tau) { return {tau}; }

  friend bool operator==(const CompositionRegime&, const CompositionRegime&) = default;
};

// True in the first period, then whenever a full regime interval has elapsed.
bool should_reform(int t, CompositionRegime regime);

struct Team {
  std::vector<int> members;  // members[m] = agent id holding subtask m
  int formed_at = 0;
};

// Every agent signals its best noisy estimated utility; the top signaler per
// subtask joins. Exact signal ties are broken uniformly at random.
//
// Rng consumption order is part of the determinism contract: signals by
// subtask ascending, agent id ascending, repertoire order; then one tie-break
// draw per subtask that actually ties.
Team form_team(const std::vector<Agent>& population, const Landscape& landscape,
               const ResidualContext& context, NoiseSpec noise, Rng& rng, int period);

// Each member independently picks its noisy-argmax partial solution; the
// choices are concatenated without mutual evaluation.
Solution autonomous_decision(const Team& team, const std::vector<Agent>& population,
                             const Landscape& landscape, const ResidualContext& context,
                             NoiseSpec noise, Rng& rng);

// Liaison mechanism: members submit their two top-ranked partial solutions;
// the rank-1 and rank-2 concatenations are evaluated in order and adopted only
// under unanimous acceptance (fresh noisy estimate strictly above the realized
// utility of `previous`). Any veto on both candidates keeps `previous`.
Solution coordinated_decision(const Team& team, const std::vector<Agent>& population,
                              const Landscape& landscape, const ResidualContext& context,
                              Solution previous, NoiseSpec noise, Rng& rng);

}  // namespace nkteam

#endif  // NKTEAM_TEAM_HPP
