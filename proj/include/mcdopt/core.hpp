#pragma once

// Shared domain types: search boxes, candidates, objectives, the budgeted
// evaluator every optimizer goes through, and seeded random streams.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mcdopt {

using Position = std::vector<double>;

//------------------------------------------------------------------------------
// Errors
//------------------------------------------------------------------------------

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidBox : Error {
  using Error::Error;
};
struct BudgetExhausted : Error {
  using Error::Error;
};
struct OutOfBox : Error {
  using Error::Error;
};
struct MissingOptimum : Error {
  using Error::Error;
};
struct NoEvaluations : Error {
  using Error::Error;
};
struct InsufficientBudget : Error {
  using Error::Error;
};
struct DimensionMismatch : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};

//------------------------------------------------------------------------------
// Box
//------------------------------------------------------------------------------

/// Axis-aligned search region. Every dimension must have lower < upper.
class Box {
 public:
  Box(std::vector<double> lower, std::vector<double> upper);

  /// [lo, hi]^dim
  static Box uniform(std::size_t dim, double lo, double hi);

  std::size_t dim() const noexcept { return lower_.size(); }
  const std::vector<double>& lower() const noexcept { return lower_; }
  const std::vector<double>& upper() const noexcept { return upper_; }
  double lower(std::size_t i) const { return lower_.at(i); }
  double upper(std::size_t i) const { return upper_.at(i); }
  double width(std::size_t i) const { return upper_.at(i) - lower_.at(i); }
  double midpoint(std::size_t i) const {
    const double m = (lower_.at(i) + upper_.at(i)) / 2;
    return std::isfinite(m) ? m : lower_[i] + (upper_[i] - lower_[i]) / 2;
  }

  bool contains(std::span<const double> p) const noexcept;
  bool contains(const Box& inner) const noexcept;
  double clamp(std::size_t i, double v) const;

  /// Replaces one bound without the strictness check; used by folding,
  /// where a dimension may legitimately collapse once its width underflows.
  void set_bounds(std::size_t i, double lo, double hi);

  friend bool operator==(const Box&, const Box&) = default;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
};

//------------------------------------------------------------------------------
// Candidate
//------------------------------------------------------------------------------

struct Candidate {
  Position position;
  std::optional<double> value;  // only ever set from a real evaluation

  std::size_t dim() const noexcept { return position.size(); }
};

//------------------------------------------------------------------------------
// Objective
//------------------------------------------------------------------------------

/// Deterministic scalar objective over a box, to be minimized.
class Objective {
 public:
  virtual ~Objective() = default;

  virtual const Box& box() const = 0;
  virtual double evaluate(std::span<const double> x) const = 0;
  /// f(x*) when it is known by construction.
  virtual std::optional<double> optimum_value() const { return std::nullopt; }

  std::size_t dim() const { return box().dim(); }
};

/// Adapts a plain callable into an Objective.
class FunctionObjective final : public Objective {
 public:
  using Fn = std::function<double(std::span<const double>)>;

  FunctionObjective(Box box, Fn fn, std::optional<double> optimum = std::nullopt)
      : box_(std::move(box)), fn_(std::move(fn)), optimum_(optimum) {}

  const Box& box() const override { return box_; }
  double evaluate(std::span<const double> x) const override { return fn_(x); }
  std::optional<double> optimum_value() const override { return optimum_; }

 private:
  Box box_;
  Fn fn_;
  std::optional<double> optimum_;
};

//------------------------------------------------------------------------------
// BudgetedEvaluator
//------------------------------------------------------------------------------

struct TracePoint {
  std::uint64_t nfe;
  double best_value;

  friend bool operator==(const TracePoint&, const TracePoint&) = default;
};

/// Counts evaluations against a hard cap and records the best-so-far
/// trajectory. The trace only receives an entry when the best improves.
///
/// Not thread-safe: one evaluator per run.
class BudgetedEvaluator {
 public:
  BudgetedEvaluator(const Objective& objective, std::uint64_t max_nfe);

  /// Throws BudgetExhausted when the cap is reached, OutOfBox when p lies
  /// outside the objective's box.
  double evaluate(std::span<const double> p);

  /// Evaluates and stores the value in the candidate.
  void evaluate(Candidate& c) { c.value = evaluate(std::span<const double>(c.position)); }

  const Objective& objective() const noexcept { return *objective_; }
  std::uint64_t max_nfe() const noexcept { return max_nfe_; }
  std::uint64_t used_nfe() const noexcept { return used_nfe_; }
  std::uint64_t remaining() const noexcept { return max_nfe_ - used_nfe_; }
  bool exhausted() const noexcept { return used_nfe_ >= max_nfe_; }

  const std::optional<Candidate>& best() const noexcept { return best_; }
  const std::vector<TracePoint>& trace() const noexcept { return trace_; }

 private:
  const Objective* objective_;
  std::uint64_t max_nfe_;
  std::uint64_t used_nfe_ = 0;
  std::optional<Candidate> best_;
  std::vector<TracePoint> trace_;
};

/// best-so-far value minus the known optimum.
double error_of(const BudgetedEvaluator& ev);

//------------------------------------------------------------------------------
// Randomness
//------------------------------------------------------------------------------

/// Source of the two primitive draws the stochastic components need. Kept
/// abstract so tests can script exact draw sequences.
class RandomSource {
 public:
  virtual ~RandomSource() = default;
  /// Uniform in [0, 1).
  virtual double uniform01() = 0;
  /// Uniform integer in [0, n), n >= 1.
  virtual std::size_t below(std::size_t n) = 0;

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
};

/// Derives an independent 64-bit seed for a named stream of a base seed.
std::uint64_t stream_seed(std::uint64_t seed, std::string_view stream);

/// mt19937_64 seeded from (seed, stream name).
class Rng final : public RandomSource {
 public:
  Rng(std::uint64_t seed, std::string_view stream)
      : seed_(stream_seed(seed, stream)), engine_(seed_) {}

  double uniform01() override;
  std::size_t below(std::size_t n) override;
  double normal() { return normal_(engine_); }

  /// Child stream: deterministic in (this stream's seed, name).
  Rng split(std::string_view name);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Uniform random bijection on {0, ..., n-1} (Fisher-Yates).
std::vector<std::size_t> random_permutation(std::size_t n, RandomSource& rng);

}  // namespace mcdopt
