#pragma once

// Comparison optimizers: DE/rand/1/bin and cooperative co-evolution with
// delta grouping. Both spend evaluations only through a BudgetedEvaluator.

#include <cstdint>
#include <vector>

#include "mcdopt/core.hpp"

namespace mcdopt::baselines {

struct OptimizerResult {
  Candidate best;
  std::uint64_t used_nfe;
  std::vector<TracePoint> trace;
};

using Population = std::vector<Candidate>;

/// Uniform random points in the box, each evaluated once.
Population init_population(std::size_t size, const Box& box, RandomSource& rng,
                           BudgetedEvaluator& ev);

//------------------------------------------------------------------------------
// Differential evolution
//------------------------------------------------------------------------------

struct DEConfig {
  std::size_t pop_size = 50;
  double cr = 0.9;
  double f_low = 0.2;   // F ~ U(f_low, f_high) per individual;
  double f_high = 0.8;  // equal bounds give a fixed F

  void validate() const;
};

/// One generation of DE/rand/1/bin with greedy selection, in place.
///
/// Per target i, the draws happen in this order: r1, r2, r3 by rejection
/// (below(pop_size) until distinct from each other and from i), then
/// F = uniform(f_low, f_high), then j_rand = below(D), then one uniform01()
/// per coordinate for crossover. Mutation reads the population as it was at
/// the start of the generation. Trials are clamped to the box.
///
/// Returns false if the budget ran out mid-generation; selections already
/// made are kept and the remaining targets are untouched.
bool de_generation(Population& pop, const DEConfig& cfg, RandomSource& rng,
                   BudgetedEvaluator& ev);

/// Runs generations until the budget is spent.
OptimizerResult run_de(const Objective& objective, const DEConfig& cfg, std::uint64_t max_nfe,
                       std::uint64_t seed);

//------------------------------------------------------------------------------
// Cooperative co-evolution with delta grouping
//------------------------------------------------------------------------------

struct CCConfig {
  std::size_t pop_size = 50;
  double f = 0.5;
  double cr = 0.9;
  std::size_t num_groups = 10;

  void validate() const;
};

using DeltaVector = std::vector<double>;
using Groups = std::vector<std::vector<std::size_t>>;

/// |curr - prev| per coordinate.
DeltaVector delta_update(const Candidate& prev_best, const Candidate& curr_best);

/// Dimensions sorted by delta descending (ties by ascending index), cut into
/// num_groups contiguous chunks of floor(D / num_groups); the last chunk
/// takes the remainder.
Groups delta_grouping(const DeltaVector& deltas, std::size_t num_groups);

/// Index-order chunks, used before any delta history exists.
Groups contiguous_groups(std::size_t dim, std::size_t num_groups);

/// Point evaluated for a group trial: the context vector with the group's
/// coordinates replaced by the trial's.
Position context_point(const Position& context, const Position& trial,
                       const std::vector<std::size_t>& group);

struct CCState {
  Population pop;
  Candidate best;  // context vector
  std::optional<Candidate> prev_cycle_best;
  Candidate last_cycle_best;
  Groups groups;   // grouping used by the most recent cycle
  std::uint64_t cycles = 0;
};

CCState cc_init(const Objective& objective, const CCConfig& cfg, RandomSource& rng,
                BudgetedEvaluator& ev);

/// One co-evolutionary cycle: regroup, then one DE generation per group.
/// Returns false if the budget ran out during the cycle.
bool cc_cycle(CCState& state, const CCConfig& cfg, RandomSource& rng, BudgetedEvaluator& ev);

OptimizerResult run_cc(const Objective& objective, const CCConfig& cfg, std::uint64_t max_nfe,
                       std::uint64_t seed);

}  // namespace mcdopt::baselines
