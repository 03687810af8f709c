#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "mcdopt/core.hpp"

using namespace mcdopt;

namespace {

double sphere(std::span<const double> x) {
  double s = 0;
  for (double v : x) s += v * v;
  return s;
}

FunctionObjective sphere_obj(std::size_t d, std::optional<double> opt = 0.0) {
  return FunctionObjective(Box::uniform(d, -100, 100), sphere, opt);
}

}  // namespace

TEST(Box, RejectsBadBounds) {
  EXPECT_THROW(Box({}, {}), InvalidBox);
  EXPECT_THROW(Box({0, 0}, {1}), InvalidBox);
  EXPECT_THROW(Box({1}, {1}), InvalidBox);
  EXPECT_THROW(Box({2}, {1}), InvalidBox);
  EXPECT_NO_THROW(Box({-1, 0}, {1, 1e-300}));
}

TEST(Box, ContainsAndClamp) {
  const Box b({0, -1}, {1, 1});
  EXPECT_TRUE(b.contains(std::vector<double>{0, 1}));
  EXPECT_FALSE(b.contains(std::vector<double>{1.5, 0}));
  EXPECT_FALSE(b.contains(std::vector<double>{0.5}));
  EXPECT_EQ(b.clamp(0, -3), 0);
  EXPECT_EQ(b.clamp(1, 3), 1);
  EXPECT_EQ(b.midpoint(1), 0);
}

TEST(BudgetedEvaluator, CountsOneEvaluationPerCall) {
  auto f = sphere_obj(2);
  BudgetedEvaluator ev(f, 10);
  EXPECT_EQ(ev.used_nfe(), 0u);
  EXPECT_EQ(ev.evaluate(std::vector<double>{0, 0}), 0.0);
  EXPECT_EQ(ev.used_nfe(), 1u);
}

TEST(BudgetedEvaluator, TraceRecordsImprovementsOnly) {
  FunctionObjective f(Box::uniform(1, -10, 10), sphere);
  BudgetedEvaluator ev(f, 10);
  ev.evaluate(std::vector<double>{3});
  ev.evaluate(std::vector<double>{2});
  EXPECT_EQ(ev.trace(), (std::vector<TracePoint>{{1, 9.0}, {2, 4.0}}));
  ev.evaluate(std::vector<double>{5});
  EXPECT_EQ(ev.trace().size(), 2u);
  EXPECT_EQ(ev.best()->position, std::vector<double>{2});
}

TEST(BudgetedEvaluator, BudgetBoundary) {
  auto f = sphere_obj(1);
  BudgetedEvaluator ev(f, 1);
  ev.evaluate(std::vector<double>{1});
  EXPECT_THROW(ev.evaluate(std::vector<double>{1}), BudgetExhausted);
  EXPECT_EQ(ev.used_nfe(), 1u);
}

TEST(BudgetedEvaluator, OutOfBoxIsNotCounted) {
  auto f = sphere_obj(2);
  BudgetedEvaluator ev(f, 5);
  EXPECT_THROW(ev.evaluate(std::vector<double>{0, 101}), OutOfBox);
  EXPECT_THROW(ev.evaluate(std::vector<double>{0}), OutOfBox);
  EXPECT_EQ(ev.used_nfe(), 0u);
}

TEST(ErrorOf, Examples) {
  {
    FunctionObjective f(Box::uniform(1, -100, 100), [](auto) { return 31.25; }, 0.0);
    BudgetedEvaluator ev(f, 1);
    ev.evaluate(std::vector<double>{0});
    EXPECT_EQ(error_of(ev), 31.25);
  }
  {
    FunctionObjective f(Box::uniform(1, -100, 100), [](auto) { return 10.0; }, 10.0);
    BudgetedEvaluator ev(f, 1);
    ev.evaluate(std::vector<double>{0});
    EXPECT_EQ(error_of(ev), 0.0);
  }
  {
    FunctionObjective f(Box::uniform(1, -100, 100), [](auto) { return 5.67e7; }, 0.0);
    BudgetedEvaluator ev(f, 1);
    ev.evaluate(std::vector<double>{0});
    EXPECT_EQ(error_of(ev), 5.67e7);
  }
}

TEST(ErrorOf, Errors) {
  auto no_opt = sphere_obj(1, std::nullopt);
  BudgetedEvaluator a(no_opt, 1);
  a.evaluate(std::vector<double>{1});
  EXPECT_THROW(error_of(a), MissingOptimum);

  auto f = sphere_obj(1);
  BudgetedEvaluator b(f, 1);
  EXPECT_THROW(error_of(b), NoEvaluations);
}

// Random call sequences: counter exactness, shadow minimum, trace shape and
// replay determinism.
TEST(BudgetedEvaluator, PropertyRandomSequences) {
  Rng rng(99, "core-prop");
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 1 + rng.below(5);
    auto f = sphere_obj(d);
    const std::uint64_t cap = 1 + rng.below(40);
    BudgetedEvaluator ev(f, cap);
    std::vector<std::vector<double>> seen;
    double shadow_min = std::numeric_limits<double>::infinity();
    std::uint64_t ok = 0;
    const std::size_t calls = rng.below(60);
    for (std::size_t c = 0; c < calls; ++c) {
      std::vector<double> p(d);
      for (auto& v : p) v = rng.uniform(-120, 120);
      try {
        const double v = ev.evaluate(p);
        ++ok;
        seen.push_back(p);
        shadow_min = std::min(shadow_min, v);
        EXPECT_LE(*ev.best()->value, v);
      } catch (const BudgetExhausted&) {
        EXPECT_EQ(ev.used_nfe(), cap);
      } catch (const OutOfBox&) {
      }
    }
    ASSERT_EQ(ev.used_nfe(), ok);
    ASSERT_LE(ev.used_nfe(), cap);
    if (ok) EXPECT_EQ(*ev.best()->value, shadow_min);
    for (std::size_t k = 1; k < ev.trace().size(); ++k) {
      EXPECT_LT(ev.trace()[k - 1].nfe, ev.trace()[k].nfe);
      EXPECT_GE(ev.trace()[k - 1].best_value, ev.trace()[k].best_value);
    }

    BudgetedEvaluator replay(f, cap);
    for (const auto& p : seen) replay.evaluate(p);
    EXPECT_EQ(replay.trace(), ev.trace());
  }
}

TEST(Rng, StreamsAreDeterministicAndDistinct) {
  Rng a(7, "perm"), b(7, "perm"), c(7, "de-init"), d(8, "perm");
  const double va = a.uniform01();
  EXPECT_EQ(va, b.uniform01());
  EXPECT_NE(va, c.uniform01());
  EXPECT_NE(va, d.uniform01());
  EXPECT_EQ(Rng(7, "x").split("y").uniform01(), Rng(7, "x").split("y").uniform01());
}

TEST(Rng, RangesHold) {
  Rng r(1, "ranges");
  std::vector<int> counts(5, 0);
  for (int k = 0; k < 5000; ++k) {
    const double u = r.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ++counts[r.below(5)];
  }
  for (int c : counts) EXPECT_GT(c, 800);
}

TEST(Rng, PermutationIsBijection) {
  Rng r(3, "perm");
  for (std::size_t n : {1u, 2u, 7u, 100u}) {
    auto p = random_permutation(n, r);
    std::sort(p.begin(), p.end());
    std::vector<std::size_t> id(n);
    std::iota(id.begin(), id.end(), 0u);
    EXPECT_EQ(p, id);
  }
}
