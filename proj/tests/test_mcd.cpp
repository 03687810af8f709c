#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mcdopt/mcd.hpp"
#include "oracles.hpp"

using namespace mcdopt;

namespace {

double sphere(std::span<const double> x) {
  double s = 0;
  for (double v : x) s += v * v;
  return s;
}

}  // namespace

TEST(RestartPlan, Examples) {
  EXPECT_EQ(mcd::restart_plan(1000, 5, 10000).r_max, 1u);
  EXPECT_EQ(mcd::restart_plan(10, 10, 100 * 10).r_max, 5u);
  EXPECT_EQ(mcd::restart_plan(10, 10, 500 * 10).r_max, 25u);
}

TEST(RestartPlan, FloorsAndReportsLeftover) {
  const auto p = mcd::restart_plan(3, 2, 50);  // 12 per restart
  EXPECT_EQ(p.r_max, 4u);
  EXPECT_EQ(p.planned_nfe(), 48u);
  EXPECT_EQ(p.leftover_nfe(), 2u);
}

TEST(RestartPlan, InsufficientBudget) {
  EXPECT_THROW(mcd::restart_plan(10, 10, 199), InsufficientBudget);
  EXPECT_THROW(mcd::restart_plan(0, 1, 10), InsufficientBudget);
  EXPECT_THROW(mcd::restart_plan(1, 0, 10), InsufficientBudget);
  EXPECT_THROW(mcd::restart_plan(1ull << 62, 4, ~0ull), InsufficientBudget);
  EXPECT_NO_THROW(mcd::restart_plan(10, 10, 200));
}

TEST(RestartPlan, NeverExceedsBudget) {
  Rng rng(5, "plan");
  for (int k = 0; k < 1000; ++k) {
    const auto d = 1 + rng.below(200), it = 1 + rng.below(20);
    const auto nfe = 2 * d * it + rng.below(100000);
    const auto p = mcd::restart_plan(d, it, nfe);
    EXPECT_GE(p.r_max, 1u);
    EXPECT_LE(p.planned_nfe(), nfe);
    EXPECT_GT(p.planned_nfe() + 2 * d * it, nfe);
  }
}

TEST(InitCenter, Examples) {
  auto [x, y] = mcd::init_center(Box::uniform(4, -100, 100));
  EXPECT_EQ(x.position, (Position{0, 0, 0, 0}));
  EXPECT_EQ(y.position, x.position);
  EXPECT_FALSE(x.value.has_value());

  auto [a, b] = mcd::init_center(Box({0, -100}, {100, 100}));
  EXPECT_EQ(a.position, (Position{50, 0}));
  EXPECT_EQ(b.position, a.position);

  auto [z, w] = mcd::init_center(Box::uniform(1000, -1, 1));
  EXPECT_EQ(z.position, Position(1000, 0.0));
}

TEST(DrawPermutation, Examples) {
  EXPECT_EQ(mcd::draw_permutation(1, 42), std::vector<std::size_t>{0});
  auto p = mcd::draw_permutation(4, 42);
  std::sort(p.begin(), p.end());
  EXPECT_EQ(p, (std::vector<std::size_t>{0, 1, 2, 3}));
  EXPECT_EQ(mcd::draw_permutation(5, 9), mcd::draw_permutation(5, 9));
}

TEST(RoiStep, FourVariableLowerWins) {
  // f(X) = 10, f(Y) = 20 for the first probe pair.
  FunctionObjective f(Box::uniform(4, -100, 100),
                      [](std::span<const double> x) { return x[0] < 0 ? 10.0 : 20.0; });
  BudgetedEvaluator ev(f, 2);
  auto st = mcd::make_state(f.box(), {0, 1, 2, 3});
  const auto out = mcd::roi_step(st, 0, ev);
  EXPECT_TRUE(out.keep_lower);
  EXPECT_EQ(out.winner.position, (Position{-50, 0, 0, 0}));
  EXPECT_EQ(out.winner.value, 10.0);
  EXPECT_EQ(st.x.position, out.winner.position);
  EXPECT_EQ(st.y.position, out.winner.position);
  EXPECT_EQ(st.s.position, out.winner.position);
  EXPECT_EQ(ev.used_nfe(), 2u);
}

TEST(RoiStep, UpperWins) {
  FunctionObjective f(Box::uniform(1, 0, 100), [](std::span<const double> x) {
    return (x[0] - 60) * (x[0] - 60);
  });
  BudgetedEvaluator ev(f, 2);
  auto st = mcd::make_state(f.box(), {0});
  const auto out = mcd::roi_step(st, 0, ev);
  EXPECT_FALSE(out.keep_lower);
  EXPECT_EQ(out.winner.position, Position{75});
  EXPECT_EQ(out.lower_value, 1225.0);
  EXPECT_EQ(out.upper_value, 225.0);
}

TEST(RoiStep, TieGoesUpper) {
  FunctionObjective f(Box::uniform(1, -100, 100), sphere);
  BudgetedEvaluator ev(f, 2);
  auto st = mcd::make_state(f.box(), {0});
  const auto out = mcd::roi_step(st, 0, ev);
  EXPECT_FALSE(out.keep_lower);
  EXPECT_EQ(out.winner.position, Position{50});
  EXPECT_EQ(out.winner.value, 2500.0);
}

TEST(RoiStep, PropagatesBudgetExhaustion) {
  FunctionObjective f(Box::uniform(1, -1, 1), sphere);
  BudgetedEvaluator ev(f, 1);
  auto st = mcd::make_state(f.box(), {0});
  EXPECT_THROW(mcd::roi_step(st, 0, ev), BudgetExhausted);
}

TEST(Fold, Examples) {
  EXPECT_EQ(mcd::fold(Box::uniform(1, -100, 100), 0, true), Box::uniform(1, -100, 0));
  EXPECT_EQ(mcd::fold(Box::uniform(1, -100, 100), 0, false), Box::uniform(1, 0, 100));
  EXPECT_EQ(mcd::fold(Box::uniform(1, 50, 100), 0, true), Box::uniform(1, 50, 75));
  const Box two({0, -100}, {100, 100});
  EXPECT_EQ(mcd::fold(two, 1, false), Box({0, 0}, {100, 100}));
}

TEST(Run, WorkedTwoDimensionalTranscript) {
  FunctionObjective f(Box({0, -100}, {100, 100}), [](std::span<const double> x) {
    return (x[0] - 60) * (x[0] - 60) + (x[1] + 20) * (x[1] + 20);
  });
  mcd::Options opts;
  opts.max_iter = 2;
  opts.max_nfe = 8;
  opts.permutation = std::vector<std::size_t>{0, 1};
  std::vector<mcd::StepRecord> steps;
  opts.on_step = [&](const mcd::StepRecord& r) { steps.push_back(r); };
  const auto res = mcd::run(f, opts);

  ASSERT_EQ(steps.size(), 4u);
  EXPECT_EQ(steps[0].x, (Position{25, 0}));
  EXPECT_EQ(steps[0].y, (Position{75, 0}));
  EXPECT_FALSE(steps[0].keep_lower);
  EXPECT_EQ(steps[1].x, (Position{75, -50}));
  EXPECT_EQ(steps[1].y, (Position{75, 50}));
  EXPECT_TRUE(steps[1].keep_lower);
  EXPECT_EQ(steps[2].x, (Position{62.5, -50}));
  EXPECT_EQ(steps[2].y, (Position{87.5, -50}));
  EXPECT_TRUE(steps[2].keep_lower);
  EXPECT_EQ(steps[3].x, (Position{62.5, -75}));
  EXPECT_EQ(steps[3].y, (Position{62.5, -25}));
  EXPECT_FALSE(steps[3].keep_lower);

  EXPECT_EQ(res.final_s.position, (Position{62.5, -25}));
  EXPECT_EQ(*res.final_s.value, 31.25);
  EXPECT_EQ(*res.best.value, 31.25);
  EXPECT_EQ(res.used_nfe, 8u);
  EXPECT_EQ(res.final_box, Box({50, -50}, {75, 0}));
}

TEST(Run, SphereThousandDimensionsMatchesFoldSimulator) {
  // Per-coordinate recursion from the 1-D oracle.
  const double coord = oracle::fold_1d([](double v) { return v * v; }, -100, 100, 5);
  ASSERT_EQ(coord, 3.125);
  const double expected = 1000 * coord * coord;
  ASSERT_EQ(expected, 9765.625);

  FunctionObjective f(Box::uniform(1000, -100, 100), sphere, 0.0);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    mcd::Options opts;
    opts.max_iter = 5;
    opts.max_nfe = 10000;
    opts.seed = seed;
    const auto res = mcd::run(f, opts);
    EXPECT_EQ(*res.final_s.value, expected);
    EXPECT_EQ(res.final_s.position, Position(1000, coord));
    EXPECT_EQ(res.used_nfe, 10000u);
  }
}

TEST(Run, MonotoneOneDimensional) {
  FunctionObjective f(Box::uniform(1, 0, 1), [](std::span<const double> x) { return x[0]; });
  mcd::Options opts;
  opts.max_iter = 3;
  opts.max_nfe = 6;
  std::vector<double> winners;
  opts.on_step = [&](const mcd::StepRecord& r) { winners.push_back(r.keep_lower ? r.x[0] : r.y[0]); };
  const auto res = mcd::run(f, opts);
  EXPECT_EQ(winners, (std::vector<double>{0.25, 0.125, 0.0625}));
  EXPECT_EQ(res.final_box, Box::uniform(1, 0, 0.125));
  EXPECT_EQ(*res.final_s.value, 0.0625);
}

TEST(Run, ConsumesExactlyPlannedEvaluations) {
  for (auto [d, it, nfe] : {std::tuple{10ull, 10ull, 1000ull}, {3ull, 4ull, 100ull}, {7ull, 1ull, 15ull}}) {
    FunctionObjective f(Box::uniform(d, -5, 5), sphere);
    BudgetedEvaluator ev(f, nfe);
    mcd::Options opts;
    opts.max_iter = it;
    opts.max_nfe = nfe;
    const auto res = mcd::run(ev, opts);
    EXPECT_EQ(ev.used_nfe(), 2 * d * it * res.plan.r_max);
  }
}

TEST(Run, InsufficientBudgetPropagates) {
  FunctionObjective f(Box::uniform(10, -5, 5), sphere);
  mcd::Options opts;
  opts.max_iter = 10;
  opts.max_nfe = 100;
  EXPECT_THROW(mcd::run(f, opts), InsufficientBudget);
}

namespace {

// Records max |width - original / 2^iter| / (original / 2^iter) over a run.
double worst_width_error(const Box& box, std::uint64_t seed) {
  const std::size_t d = box.dim();
  FunctionObjective f(box, [](std::span<const double> x) {
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += std::sin(3 * x[i] + i) + 0.01 * x[i] * x[i];
    return s;
  });
  mcd::Options opts;
  opts.max_iter = 10;
  opts.max_nfe = 2 * d * 10;
  opts.seed = seed;
  double worst = 0;
  opts.on_iteration = [&](std::uint64_t, const mcd::State& st) {
    EXPECT_TRUE(box.contains(st.box));
    const double scale = std::ldexp(1.0, -static_cast<int>(st.iter));
    for (std::size_t i = 0; i < d; ++i) {
      const double want = box.width(i) * scale;
      worst = std::max(worst, std::abs(st.box.width(i) - want) / want);
    }
  };
  mcd::run(f, opts);
  return worst;
}

}  // namespace

TEST(Run, GeometricShrinkage) {
  for (std::size_t d : {1u, 3u, 50u}) {
    EXPECT_EQ(worst_width_error(Box::uniform(d, -100, 100), d), 0.0);
    Rng rng(d, "widths");
    std::vector<double> lo(d), hi(d);
    for (std::size_t i = 0; i < d; ++i) {
      lo[i] = rng.uniform(-100, 0);
      hi[i] = lo[i] + rng.uniform(50, 200);
    }
    EXPECT_LE(worst_width_error(Box(lo, hi), d), 1e-12);
  }
}

// Bounds far from zero relative to the width lose bits in every midpoint;
// the error stays within a few ulps of the bound magnitude per fold.
TEST(Run, ShrinkageRoundingIsBounded) {
  Rng rng(77, "offset-widths");
  std::vector<double> lo(20), hi(20);
  double ratio = 0;
  for (std::size_t i = 0; i < 20; ++i) {
    lo[i] = rng.uniform(-1000, 1000);
    hi[i] = lo[i] + rng.uniform(0.01, 5);
    ratio = std::max(ratio, std::max(std::abs(lo[i]), std::abs(hi[i])) / (hi[i] - lo[i]));
  }
  const double eps = std::numeric_limits<double>::epsilon();
  EXPECT_LE(worst_width_error(Box(lo, hi), 3), 10 * 2 * eps * ratio * 1024);
}

TEST(Run, WinnerIsAProbeWithMinValueAndPointsStayInBox) {
  FunctionObjective inner(Box({-3, 0, 10}, {2, 1, 30}), [](std::span<const double> x) {
    return std::cos(x[0]) * x[1] + std::abs(x[2] - 17.3);
  });
  oracle::RecordingObjective f(inner);
  mcd::Options opts;
  opts.max_iter = 6;
  opts.max_nfe = 2 * 3 * 6 * 3;
  mcd::Options with_check = opts;
  std::optional<double> last_best;
  BudgetedEvaluator ev(f, opts.max_nfe);
  with_check.on_step = [&](const mcd::StepRecord& r) {
    EXPECT_EQ(r.keep_lower, r.fx < r.fy);
    EXPECT_LE(*ev.best()->value, std::min(r.fx, r.fy));
  };
  with_check.on_iteration = [&](std::uint64_t, const mcd::State& st) {
    EXPECT_TRUE(st.s.position == st.x.position);
    EXPECT_TRUE(*st.s.value == *st.x.value);
    if (last_best) EXPECT_LE(*ev.best()->value, *last_best);
    last_best = *ev.best()->value;
  };
  const auto res = mcd::run(ev, with_check);
  for (const auto& p : f.points()) EXPECT_TRUE(inner.box().contains(p));
  EXPECT_EQ(f.points().size(), res.used_nfe);
  for (std::size_t k = 1; k < res.trace.size(); ++k)
    EXPECT_LE(res.trace[k].best_value, res.trace[k - 1].best_value);
}

TEST(Run, SeparableObjectiveIgnoresPermutation) {
  FunctionObjective f(Box::uniform(10, -100, 100), [](std::span<const double> x) {
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - 3.0 * i) * (x[i] - 3.0 * i);
    return s;
  });
  std::optional<Position> first;
  for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
    mcd::Options opts;
    opts.max_iter = 10;
    opts.max_nfe = 200;
    opts.seed = seed;
    const auto res = mcd::run(f, opts);
    if (!first) first = res.final_s.position;
    EXPECT_EQ(res.final_s.position, *first);
  }
}

TEST(Run, MatchesAlgorithmTranscription) {
  Rng meta(2024, "oracle-cases");
  for (int seed = 0; seed < 1000; ++seed) {
    const std::size_t d = 1 + meta.below(3);
    const std::uint64_t it = 1 + meta.below(4);
    const std::uint64_t restarts = 1 + meta.below(3);
    std::vector<double> lo(d), hi(d), center(d), w(d);
    for (std::size_t i = 0; i < d; ++i) {
      // Alternate integer and arbitrary bounds; the latter make midpoints round.
      if (seed % 2) {
        lo[i] = -static_cast<double>(meta.below(100));
        hi[i] = lo[i] + 1 + static_cast<double>(meta.below(150));
      } else {
        lo[i] = meta.uniform(-1000, 1000);
        hi[i] = lo[i] + meta.uniform(1e-3, 1000);
      }
      center[i] = meta.uniform(lo[i], hi[i]);
      w[i] = meta.uniform(0.5, 2.0);
    }
    auto fn = [=](std::span<const double> x) {
      double s = 0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double z = x[i] - center[i];
        s += w[i] * z * z + 3 * std::cos(z);
        if (i) s += 0.3 * z * (x[i - 1] - center[i - 1]);
      }
      return s;
    };
    FunctionObjective f(Box(lo, hi), fn);
    mcd::Options opts;
    opts.max_iter = it;
    opts.max_nfe = 2 * d * it * restarts + meta.below(2 * d * it);
    opts.seed = static_cast<std::uint64_t>(seed);

    std::vector<oracle::Step> got;
    opts.on_step = [&](const mcd::StepRecord& r) { got.push_back({r.x, r.y, r.keep_lower}); };
    const auto res = mcd::run(f, opts);

    Rng perm_rng(opts.seed, "perm");
    std::vector<std::vector<std::size_t>> perms;
    for (std::uint64_t r = 0; r < restarts; ++r) perms.push_back(random_permutation(d, perm_rng));
    const auto want = oracle::mcd_reference([&](const std::vector<double>& x) { return fn(x); }, lo, hi, it,
                                         opts.max_nfe, perms);

    ASSERT_EQ(got.size(), want.steps.size()) << "seed " << seed;
    for (std::size_t k = 0; k < got.size(); ++k) ASSERT_EQ(got[k], want.steps[k]) << "seed " << seed << " step " << k;
    EXPECT_EQ(res.final_s.position, want.s_star);
    EXPECT_EQ(*res.final_s.value, want.f_s_star);
    EXPECT_EQ(res.used_nfe, want.evaluations);
  }
}

TEST(Run, WidthUnderflowKeepsBudgetExact) {
  FunctionObjective f(Box::uniform(1, 0, 1), [](std::span<const double> x) { return x[0]; });
  mcd::Options opts;
  opts.max_iter = 1100;
  opts.max_nfe = 2200;
  const auto res = mcd::run(f, opts);
  EXPECT_EQ(res.used_nfe, 2200u);
  EXPECT_EQ(res.final_box.width(0), 0.0);
  EXPECT_EQ(*res.best.value, 0.0);
}

TEST(Run, PermutationOverrideMustMatchDimension) {
  FunctionObjective f(Box::uniform(3, -1, 1), sphere);
  mcd::Options opts;
  opts.max_iter = 1;
  opts.max_nfe = 6;
  opts.permutation = std::vector<std::size_t>{0, 1};
  EXPECT_THROW(mcd::run(f, opts), DimensionMismatch);
}
