#include "mcdopt/mcd.hpp"

#include <limits>
#include <string>

namespace mcdopt::mcd {

RestartPlan restart_plan(std::uint64_t dim, std::uint64_t max_iter, std::uint64_t max_nfe) {
  if (dim == 0 || max_iter == 0 || max_nfe == 0)
    throw InsufficientBudget("dim, max_iter and max_nfe must all be positive");

  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  if (dim > kMax / 2 / max_iter)
    throw InsufficientBudget("2 * dim * max_iter overflows");
  const std::uint64_t per_restart = 2 * dim * max_iter;
  if (per_restart > max_nfe)
    throw InsufficientBudget("one restart needs " + std::to_string(per_restart) +
                             " evaluations but max_nfe is " + std::to_string(max_nfe));
  return RestartPlan{dim, max_iter, max_nfe, max_nfe / per_restart};
}

std::pair<Candidate, Candidate> init_center(const Box& box) {
  Position center(box.dim());
  for (std::size_t i = 0; i < box.dim(); ++i) center[i] = box.midpoint(i);
  return {Candidate{center, std::nullopt}, Candidate{center, std::nullopt}};
}

std::vector<std::size_t> draw_permutation(std::size_t dim, std::uint64_t seed) {
  Rng rng(seed, "perm");
  return random_permutation(dim, rng);
}

State make_state(const Box& box, std::vector<std::size_t> perm) {
  auto [x, y] = init_center(box);
  Candidate s = x;
  return State{box, std::move(x), std::move(y), std::move(s), std::move(perm), 0};
}

RoiOutcome roi_step(State& state, std::size_t i, BudgetedEvaluator& ev) {
  const double lo = state.box.lower(i);
  const double hi = state.box.upper(i);
  const double quarter = (hi - lo) / 4;

  state.x.position[i] = lo + quarter;
  state.y.position[i] = hi - quarter;
  ev.evaluate(state.x);
  ev.evaluate(state.y);

  const double lower_value = *state.x.value;
  const double upper_value = *state.y.value;
  // Strict comparison: a tie keeps the upper half.
  const bool keep_lower = lower_value < upper_value;
  Candidate& winner = keep_lower ? state.x : state.y;
  Candidate& loser = keep_lower ? state.y : state.x;
  loser.position[i] = winner.position[i];
  loser.value = winner.value;
  state.s = winner;
  return {state.s, keep_lower, lo + quarter, hi - quarter, lower_value, upper_value};
}

Box fold(Box box, std::size_t i, bool keep_lower) {
  const double lo = box.lower(i);
  const double hi = box.upper(i);
  const double mid = box.midpoint(i);
  // Once the width underflows the midpoint coincides with a bound and the
  // interval stays where it is.
  if (keep_lower)
    box.set_bounds(i, lo, mid);
  else
    box.set_bounds(i, mid, hi);
  return box;
}

Result run(BudgetedEvaluator& ev, const Options& opts) {
  const Box& original = ev.objective().box();
  const std::size_t dim = original.dim();
  const RestartPlan plan = restart_plan(dim, opts.max_iter, opts.max_nfe);
  if (plan.planned_nfe() > ev.remaining())
    throw InsufficientBudget("evaluator has " + std::to_string(ev.remaining()) +
                             " evaluations left, plan needs " + std::to_string(plan.planned_nfe()));
  if (opts.permutation && opts.permutation->size() != dim)
    throw DimensionMismatch("permutation length does not match problem dimension");

  Rng perm_rng(opts.seed, "perm");
  std::optional<Candidate> s_star;
  Box last_box = original;

  for (std::uint64_t r = 0; r < plan.r_max; ++r) {
    auto perm = opts.permutation ? *opts.permutation : random_permutation(dim, perm_rng);
    State state = make_state(original, std::move(perm));

    for (std::uint64_t it = 0; it < plan.max_iter; ++it) {
      for (std::size_t i : state.perm) {
        auto outcome = roi_step(state, i, ev);
        if (opts.on_step) {
          // The probes differ from the winner only in coordinate i.
          StepRecord rec{r,
                         it,
                         i,
                         outcome.winner.position,
                         outcome.winner.position,
                         outcome.lower_value,
                         outcome.upper_value,
                         outcome.keep_lower};
          rec.x[i] = outcome.lower_center;
          rec.y[i] = outcome.upper_center;
          opts.on_step(rec);
        }
        state.box = fold(std::move(state.box), i, outcome.keep_lower);
      }
      ++state.iter;
      if (opts.on_iteration) opts.on_iteration(r, state);
    }

    if (!s_star || *state.s.value < *s_star->value) s_star = state.s;
    last_box = state.box;
  }

  return Result{*ev.best(), *s_star, plan, ev.used_nfe(), ev.trace(), last_box};
}

Result run(const Objective& objective, const Options& opts) {
  BudgetedEvaluator ev(objective, opts.max_nfe);
  return run(ev, opts);
}

}  // namespace mcdopt::mcd
