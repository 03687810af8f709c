#pragma once

// Modified Coordinate Descent.
//
// Each restart starts from the box center and walks the dimensions in a
// random order. For dimension i the current interval [L, U] is split in two
// halves whose centers L + (U-L)/4 and U - (U-L)/4 are evaluated; the better
// half becomes the new interval (ties keep the upper half). One full pass over
// all dimensions halves every interval, so after k iterations each width is
// w0 / 2^k. Every step spends exactly two evaluations, which gives the restart
// count floor(max_nfe / (2 * D * max_iter)).

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "mcdopt/core.hpp"

namespace mcdopt::mcd {

struct RestartPlan {
  std::uint64_t dim;
  std::uint64_t max_iter;
  std::uint64_t max_nfe;
  std::uint64_t r_max;

  /// Evaluations the plan will actually consume.
  std::uint64_t planned_nfe() const noexcept { return 2 * dim * max_iter * r_max; }
  std::uint64_t leftover_nfe() const noexcept { return max_nfe - planned_nfe(); }
};

/// Throws InsufficientBudget when a single restart does not fit the budget.
RestartPlan restart_plan(std::uint64_t dim, std::uint64_t max_iter, std::uint64_t max_nfe);

struct State {
  Box box;  // current, folded region
  Candidate x;
  Candidate y;
  Candidate s;  // winner of the last comparison
  std::vector<std::size_t> perm;
  std::uint64_t iter = 0;
};

/// Two identical, unevaluated candidates at the box center.
std::pair<Candidate, Candidate> init_center(const Box& box);

/// Dimension order for one restart, from the "perm" stream of the seed.
std::vector<std::size_t> draw_permutation(std::size_t dim, std::uint64_t seed);

/// Fresh state for a restart: center candidates over `box`.
State make_state(const Box& box, std::vector<std::size_t> perm);

struct RoiOutcome {
  Candidate winner;
  bool keep_lower;
  double lower_center;  // coordinate i of the lower-half probe
  double upper_center;
  double lower_value;
  double upper_value;
};

/// Evaluates the two half-interval centers along dimension i (two
/// evaluations) and moves x, y and s onto the winner. Does not fold.
RoiOutcome roi_step(State& state, std::size_t i, BudgetedEvaluator& ev);

/// Halves dimension i, keeping the lower or upper half.
Box fold(Box box, std::size_t i, bool keep_lower);

/// One coordinate step as seen by an observer.
struct StepRecord {
  std::uint64_t restart;
  std::uint64_t iter;
  std::size_t dim;
  Position x;  // lower-half center point
  Position y;  // upper-half center point
  double fx;
  double fy;
  bool keep_lower;
};

struct Options {
  std::uint64_t max_iter = 10;
  std::uint64_t max_nfe = 1000;
  std::uint64_t seed = 0;
  /// Used for every restart instead of a drawn permutation when set.
  std::optional<std::vector<std::size_t>> permutation;
  std::function<void(const StepRecord&)> on_step;
  /// Called after every completed pass over all dimensions.
  std::function<void(std::uint64_t restart, const State&)> on_iteration;
};

struct Result {
  Candidate best;       // best point ever evaluated
  Candidate final_s;    // best restart-final S, compared on cached values
  RestartPlan plan;
  std::uint64_t used_nfe;
  std::vector<TracePoint> trace;
  Box final_box;        // region of the last restart
};

/// Runs on a caller-owned evaluator; used_nfe grows by plan.planned_nfe().
Result run(BudgetedEvaluator& ev, const Options& opts);

/// Convenience overload with its own evaluator capped at opts.max_nfe.
Result run(const Objective& objective, const Options& opts);

}  // namespace mcdopt::mcd
