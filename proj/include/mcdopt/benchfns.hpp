#pragma once

// Seeded benchmark suite with the large-scale taxonomy: separable
// (unimodal and multimodal), partially separable via rotated variable groups,
// and fully non-separable. Every function has optimum value 0 at a known point.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "mcdopt/core.hpp"

namespace mcdopt::bench {

enum class Category { SeparableUnimodal, SeparableMultimodal, PartiallySeparable, FullyNonseparable };

enum class Base { Sphere, Elliptic, Rastrigin, Ackley, Rosenbrock, Schwefel12 };

std::string to_string(Category c);
std::string to_string(Base b);

/// Row-major m x m orthogonal matrix acting on the coordinates in `indices`.
struct RotatedGroup {
  std::vector<std::size_t> indices;
  std::vector<double> matrix;
};

class BenchFunction final : public Objective {
 public:
  BenchFunction(std::string name, Category category, Base base, Position shift, Box box,
                std::vector<RotatedGroup> groups = {});

  const Box& box() const override { return box_; }
  double evaluate(std::span<const double> x) const override;
  std::optional<double> optimum_value() const override { return 0.0; }

  const std::string& name() const noexcept { return name_; }
  Category category() const noexcept { return category_; }
  Base base() const noexcept { return base_; }
  const Position& shift() const noexcept { return shift_; }
  const std::vector<RotatedGroup>& groups() const noexcept { return groups_; }
  /// Size of each rotated group, 0 when there are none.
  std::size_t group_size() const noexcept { return groups_.empty() ? 0 : groups_.front().indices.size(); }

  /// Point where the function attains 0. Equals the shift.
  const Position& optimum_position() const noexcept { return shift_; }

 private:
  std::string name_;
  Category category_;
  Base base_;
  Position shift_;
  Box box_;
  std::vector<RotatedGroup> groups_;
  std::vector<double> elliptic_weights_;
};

/// Raw base formulas on an already transformed vector z.
double sphere(std::span<const double> z);
double elliptic(std::span<const double> z);
double rastrigin(std::span<const double> z);
double ackley(std::span<const double> z);
/// Minimum 0 at z = (1, ..., 1).
double rosenbrock(std::span<const double> z);
double schwefel_1_2(std::span<const double> z);

/// Throws OutOfBox for points outside fn.box().
double eval_bench(const BenchFunction& fn, std::span<const double> x);

/// Seeded orthogonal m x m matrix (QR of a Gaussian matrix), row-major.
std::vector<double> random_rotation(std::size_t m, RandomSource& rng);

/// Group size used for the partially separable functions.
std::size_t default_group_size(std::size_t dim);

/// The eight-function suite. Shifts are uniform over the middle 80% of
/// [-100, 100] per dimension.
std::vector<BenchFunction> make_suite(std::size_t dim, std::uint64_t seed);

std::vector<std::string> suite_names();

/// 64-bit FNV-1a over the round-trip decimal text of the optimum point.
std::uint64_t optimum_hash(const BenchFunction& fn);

/// JSON manifest: one object per function with name, category, dim, seed,
/// box and optimum position hash.
std::string suite_manifest_json(const std::vector<BenchFunction>& suite, std::uint64_t seed);

}  // namespace mcdopt::bench
