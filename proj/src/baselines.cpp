#include "mcdopt/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace mcdopt::baselines {

Population init_population(std::size_t size, const Box& box, RandomSource& rng,
                           BudgetedEvaluator& ev) {
  Population pop;
  pop.reserve(size);
  for (std::size_t k = 0; k < size; ++k) {
    Candidate c{Position(box.dim()), std::nullopt};
    for (std::size_t j = 0; j < box.dim(); ++j) c.position[j] = rng.uniform(box.lower(j), box.upper(j));
    ev.evaluate(c);
    pop.push_back(std::move(c));
  }
  return pop;
}

namespace {

struct Parents {
  std::size_t r1, r2, r3;
};

Parents pick_parents(std::size_t target, std::size_t n, RandomSource& rng) {
  std::size_t r1, r2, r3;
  do r1 = rng.below(n);
  while (r1 == target);
  do r2 = rng.below(n);
  while (r2 == target || r2 == r1);
  do r3 = rng.below(n);
  while (r3 == target || r3 == r1 || r3 == r2);
  return {r1, r2, r3};
}

// One DE/rand/1/bin generation over the coordinates in `coords`. The point
// actually evaluated is produced by `assemble(trial)`; targets keep the value
// they were last assigned. Calls `on_accept(slot, point, value)` for every
// trial that replaces its target.
template <typename Assemble, typename OnAccept>
bool generation_over(Population& pop, const std::vector<std::size_t>& coords, double f_low,
                     double f_high, double cr, const Box& box, RandomSource& rng,
                     BudgetedEvaluator& ev, Assemble assemble, OnAccept on_accept) {
  const std::size_t n = pop.size();
  // Mutation reads the generation's starting population.
  const Population parents = pop;
  for (std::size_t i = 0; i < n; ++i) {
    if (ev.exhausted()) return false;

    const auto [r1, r2, r3] = pick_parents(i, n, rng);
    const double f = rng.uniform(f_low, f_high);
    const std::size_t j_rand = rng.below(coords.size());

    Position trial = pop[i].position;
    for (std::size_t k = 0; k < coords.size(); ++k) {
      const std::size_t j = coords[k];
      const bool take = rng.uniform01() < cr || k == j_rand;
      if (!take) continue;
      const double mutant =
          parents[r1].position[j] + f * (parents[r2].position[j] - parents[r3].position[j]);
      trial[j] = box.clamp(j, mutant);
    }

    const Position point = assemble(trial);
    const double v = ev.evaluate(point);
    if (v <= *pop[i].value) {
      pop[i].position = std::move(trial);
      pop[i].value = v;
      on_accept(i, point, v);
    }
  }
  return true;
}

std::vector<std::size_t> all_coords(std::size_t dim) {
  std::vector<std::size_t> idx(dim);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return idx;
}

}  // namespace

void DEConfig::validate() const {
  if (pop_size < 4) throw ConfigError("DE population size must be at least 4");
  if (!(cr >= 0.0 && cr <= 1.0)) throw ConfigError("DE crossover rate must lie in [0, 1]");
  if (!(f_low <= f_high)) throw ConfigError("DE F range is inverted");
}

bool de_generation(Population& pop, const DEConfig& cfg, RandomSource& rng,
                   BudgetedEvaluator& ev) {
  cfg.validate();
  if (pop.size() != cfg.pop_size) throw ConfigError("population size does not match config");
  const Box& box = ev.objective().box();
  return generation_over(
      pop, all_coords(box.dim()), cfg.f_low, cfg.f_high, cfg.cr, box, rng, ev,
      [](const Position& t) { return t; }, [](std::size_t, const Position&, double) {});
}

OptimizerResult run_de(const Objective& objective, const DEConfig& cfg, std::uint64_t max_nfe,
                       std::uint64_t seed) {
  cfg.validate();
  if (max_nfe < cfg.pop_size)
    throw InsufficientBudget("DE needs at least pop_size = " + std::to_string(cfg.pop_size) +
                             " evaluations");
  BudgetedEvaluator ev(objective, max_nfe);
  Rng init_rng(seed, "de-init");
  Rng gen_rng(seed, "de-gen");
  Population pop = init_population(cfg.pop_size, objective.box(), init_rng, ev);
  while (de_generation(pop, cfg, gen_rng, ev)) {
  }
  return {*ev.best(), ev.used_nfe(), ev.trace()};
}

//------------------------------------------------------------------------------

void CCConfig::validate() const {
  if (pop_size < 4) throw ConfigError("CC population size must be at least 4");
  if (!(cr >= 0.0 && cr <= 1.0)) throw ConfigError("CC crossover rate must lie in [0, 1]");
  if (num_groups == 0) throw ConfigError("CC needs at least one group");
}

DeltaVector delta_update(const Candidate& prev_best, const Candidate& curr_best) {
  if (prev_best.dim() != curr_best.dim())
    throw DimensionMismatch("delta_update: candidates differ in dimension");
  DeltaVector d(prev_best.dim());
  for (std::size_t i = 0; i < d.size(); ++i)
    d[i] = std::abs(curr_best.position[i] - prev_best.position[i]);
  return d;
}

namespace {

Groups chunk(const std::vector<std::size_t>& order, std::size_t num_groups) {
  const std::size_t size = order.size() / num_groups;
  Groups groups(num_groups);
  for (std::size_t g = 0; g < num_groups; ++g) {
    const auto first = order.begin() + static_cast<std::ptrdiff_t>(g * size);
    const auto last = g + 1 == num_groups ? order.end() : first + static_cast<std::ptrdiff_t>(size);
    groups[g].assign(first, last);
  }
  return groups;
}

void check_groups(std::size_t dim, std::size_t num_groups) {
  if (num_groups == 0 || num_groups > dim)
    throw ConfigError("number of groups must lie in [1, " + std::to_string(dim) + "]");
}

}  // namespace

Groups delta_grouping(const DeltaVector& deltas, std::size_t num_groups) {
  check_groups(deltas.size(), num_groups);
  std::vector<std::size_t> order = all_coords(deltas.size());
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return deltas[a] > deltas[b]; });
  return chunk(order, num_groups);
}

Groups contiguous_groups(std::size_t dim, std::size_t num_groups) {
  check_groups(dim, num_groups);
  return chunk(all_coords(dim), num_groups);
}

Position context_point(const Position& context, const Position& trial,
                       const std::vector<std::size_t>& group) {
  Position p = context;
  for (std::size_t j : group) p[j] = trial[j];
  return p;
}

CCState cc_init(const Objective& objective, const CCConfig& cfg, RandomSource& rng,
                BudgetedEvaluator& ev) {
  cfg.validate();
  check_groups(objective.dim(), cfg.num_groups);
  CCState st;
  st.pop = init_population(cfg.pop_size, objective.box(), rng, ev);
  st.best = *std::min_element(st.pop.begin(), st.pop.end(), [](const auto& a, const auto& b) {
    return *a.value < *b.value;
  });
  st.last_cycle_best = st.best;
  return st;
}

bool cc_cycle(CCState& st, const CCConfig& cfg, RandomSource& rng, BudgetedEvaluator& ev) {
  const Box& box = ev.objective().box();
  st.groups = st.prev_cycle_best
                  ? delta_grouping(delta_update(*st.prev_cycle_best, st.last_cycle_best),
                                   cfg.num_groups)
                  : contiguous_groups(box.dim(), cfg.num_groups);

  bool complete = true;
  for (const auto& group : st.groups) {
    const Position context = st.best.position;
    std::optional<Candidate> group_best;
    complete = generation_over(
        st.pop, group, cfg.f, cfg.f, cfg.cr, box, rng, ev,
        [&](const Position& t) { return context_point(context, t, group); },
        [&](std::size_t, const Position& point, double v) {
          if (!group_best || v < *group_best->value) group_best = Candidate{point, v};
        });
    if (group_best && *group_best->value < *st.best.value) st.best = std::move(*group_best);
    if (!complete) break;
  }

  st.prev_cycle_best = st.last_cycle_best;
  st.last_cycle_best = st.best;
  ++st.cycles;
  return complete;
}

OptimizerResult run_cc(const Objective& objective, const CCConfig& cfg, std::uint64_t max_nfe,
                       std::uint64_t seed) {
  cfg.validate();
  if (max_nfe < cfg.pop_size)
    throw InsufficientBudget("CC needs at least pop_size = " + std::to_string(cfg.pop_size) +
                             " evaluations");
  CCConfig effective = cfg;
  effective.num_groups = std::min(cfg.num_groups, objective.dim());

  BudgetedEvaluator ev(objective, max_nfe);
  Rng init_rng(seed, "cc-init");
  Rng gen_rng(seed, "cc-gen");
  CCState st = cc_init(objective, effective, init_rng, ev);
  while (cc_cycle(st, effective, gen_rng, ev)) {
  }
  return {*ev.best(), ev.used_nfe(), ev.trace()};
}

}  // namespace mcdopt::baselines
