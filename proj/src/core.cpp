#include "mcdopt/core.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace mcdopt {

Box::Box(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.empty()) throw InvalidBox("box must have at least one dimension");
  if (lower_.size() != upper_.size())
    throw InvalidBox("box bound vectors differ in length: " + std::to_string(lower_.size()) +
                     " vs " + std::to_string(upper_.size()));
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    if (!std::isfinite(lower_[i]) || !std::isfinite(upper_[i]))
      throw InvalidBox("non-finite bound in dimension " + std::to_string(i));
    if (!(lower_[i] < upper_[i]))
      throw InvalidBox("collapsed or inverted bounds in dimension " + std::to_string(i));
  }
}

Box Box::uniform(std::size_t dim, double lo, double hi) {
  return Box(std::vector<double>(dim, lo), std::vector<double>(dim, hi));
}

bool Box::contains(std::span<const double> p) const noexcept {
  if (p.size() != lower_.size()) return false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] >= lower_[i] && p[i] <= upper_[i])) return false;
  }
  return true;
}

bool Box::contains(const Box& inner) const noexcept {
  if (inner.dim() != dim()) return false;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (inner.lower_[i] < lower_[i] || inner.upper_[i] > upper_[i]) return false;
  }
  return true;
}

double Box::clamp(std::size_t i, double v) const {
  if (v < lower_.at(i)) return lower_[i];
  if (v > upper_.at(i)) return upper_[i];
  return v;
}

void Box::set_bounds(std::size_t i, double lo, double hi) {
  if (!(lo <= hi)) throw InvalidBox("inverted bounds in dimension " + std::to_string(i));
  lower_.at(i) = lo;
  upper_.at(i) = hi;
}

//------------------------------------------------------------------------------

BudgetedEvaluator::BudgetedEvaluator(const Objective& objective, std::uint64_t max_nfe)
    : objective_(&objective), max_nfe_(max_nfe) {
  if (max_nfe == 0) throw InsufficientBudget("max_nfe must be positive");
}

double BudgetedEvaluator::evaluate(std::span<const double> p) {
  if (used_nfe_ >= max_nfe_)
    throw BudgetExhausted("evaluation budget of " + std::to_string(max_nfe_) + " exhausted");
  if (!objective_->box().contains(p)) throw OutOfBox("point outside the objective's box");

  const double v = objective_->evaluate(p);
  ++used_nfe_;
  if (!best_ || v < *best_->value) {
    best_ = Candidate{Position(p.begin(), p.end()), v};
    trace_.push_back({used_nfe_, v});
  }
  return v;
}

double error_of(const BudgetedEvaluator& ev) {
  const auto opt = ev.objective().optimum_value();
  if (!opt) throw MissingOptimum("objective has no known optimum value");
  if (!ev.best()) throw NoEvaluations("no evaluations recorded");
  return *ev.best()->value - *opt;
}

//------------------------------------------------------------------------------

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

}  // namespace

std::uint64_t stream_seed(std::uint64_t seed, std::string_view stream) {
  return splitmix64(splitmix64(seed) ^ fnv1a(stream));
}

double Rng::uniform01() {
  // 53 random mantissa bits; never returns 1.0.
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::size_t Rng::below(std::size_t n) {
  if (n == 0) throw std::invalid_argument("Rng::below(0)");
  // Unbiased rejection sampling over the full 64-bit range.
  const std::uint64_t range = n;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t r;
  do {
    r = engine_();
  } while (r >= limit);
  return static_cast<std::size_t>(r % range);
}

Rng Rng::split(std::string_view name) { return Rng(seed_, name); }

std::vector<std::size_t> random_permutation(std::size_t n, RandomSource& rng) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = rng.below(i);
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

}  // namespace mcdopt
