#ifndef NKTEAM_POPULATION_HPP
#define NKTEAM_POPULATION_HPP

#include <cstdint>
#include <vector>

#include "nkteam/landscape.hpp"
#include "nkteam/rng.hpp"

namespace nkteam {

// Standard deviation of the utility-estimation error term.
struct NoiseSpec {
  double sigma = 0.01;
};

// The team solution of the previous period, the basis every agent uses to
// resolve the decisions outside its own subtask.
struct ResidualContext {
  Solution full_solution;
  int period = 0;
};

struct Agent {
  int id = 0;
  int subtask = 0;
  // Known partial solutions for the agent's subtask, kept sorted ascending
  // and duplicate-free. Never empty.
  std::vector<std::uint16_t> repertoire;

  bool knows(std::uint16_t bits) const;
  // Returns true if the solution was new.
  bool add_to_repertoire(std::uint16_t bits);
};

// pop_size / m_subtasks agents per subtask, ids 0..pop_size-1 grouped by
// subtask, each endowed with a single uniformly drawn partial solution.
std::vector<Agent> init_population(int pop_size, int m_subtasks, int subtask_size, Rng& rng);

// Eq. 1: half own subtask performance, half the mean of the residual ones.
double utility(const Landscape& landscape, int m, Solution full_solution);

// Utility of `candidate` spliced over its subtask in the residual context.
// This is Eq. 2 with the error term stripped.
double spliced_utility(const Landscape& landscape, PartialSolution candidate,
                       const ResidualContext& context);

// Eq. 2: spliced utility plus a fresh Normal(0, sigma^2) estimation error.
double estimated_utility(const Landscape& landscape, PartialSolution candidate,
                         const ResidualContext& context, NoiseSpec noise, Rng& rng);

// Noise-free argmax over the repertoire; ties go to the smallest bit pattern.
std::uint16_t best_known(const Agent& agent, const Landscape& landscape,
                         const ResidualContext& context);

// One end-of-period learning step: a Bernoulli(prob) discovery (flip one bit
// of a known solution, keep if new), then a Bernoulli(prob) forgetting that
// removes a uniformly chosen entry other than `protected_bits`.
void learn_step(Agent& agent, double prob, std::uint16_t protected_bits, int subtask_size,
                Rng& rng);

}  // namespace nkteam

#endif  // NKTEAM_POPULATION_HPP
