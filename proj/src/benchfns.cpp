#include "mcdopt/benchfns.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <nlohmann/json.hpp>

#include "mcdopt/format.hpp"

namespace mcdopt::bench {

namespace {
constexpr double kLo = -100.0;
constexpr double kHi = 100.0;
}  // namespace

std::string to_string(Category c) {
  switch (c) {
    case Category::SeparableUnimodal: return "separable-unimodal";
    case Category::SeparableMultimodal: return "separable-multimodal";
    case Category::PartiallySeparable: return "partially-separable";
    case Category::FullyNonseparable: return "fully-nonseparable";
  }
  return "unknown";
}

std::string to_string(Base b) {
  switch (b) {
    case Base::Sphere: return "sphere";
    case Base::Elliptic: return "elliptic";
    case Base::Rastrigin: return "rastrigin";
    case Base::Ackley: return "ackley";
    case Base::Rosenbrock: return "rosenbrock";
    case Base::Schwefel12: return "schwefel-1.2";
  }
  return "unknown";
}

//------------------------------------------------------------------------------
// Base formulas
//------------------------------------------------------------------------------

double sphere(std::span<const double> z) {
  double s = 0;
  for (double v : z) s += v * v;
  return s;
}

namespace {

double elliptic_weighted(std::span<const double> z, const std::vector<double>& w) {
  double s = 0;
  for (std::size_t i = 0; i < z.size(); ++i) s += w[i] * z[i] * z[i];
  return s;
}

std::vector<double> elliptic_weights(std::size_t d) {
  std::vector<double> w(d, 1.0);
  if (d < 2) return w;
  for (std::size_t i = 0; i < d; ++i)
    w[i] = std::pow(1.0e6, static_cast<double>(i) / static_cast<double>(d - 1));
  return w;
}

}  // namespace

double elliptic(std::span<const double> z) { return elliptic_weighted(z, elliptic_weights(z.size())); }

double rastrigin(std::span<const double> z) {
  double s = 0;
  for (double v : z) s += v * v - 10.0 * std::cos(2.0 * std::numbers::pi * v) + 10.0;
  return s;
}

double ackley(std::span<const double> z) {
  const double n = static_cast<double>(z.size());
  double sq = 0, cs = 0;
  for (double v : z) {
    sq += v * v;
    cs += std::cos(2.0 * std::numbers::pi * v);
  }
  // Grouped so that both terms are non-negative and vanish exactly at z = 0.
  const double a = 20.0 * (1.0 - std::exp(-0.2 * std::sqrt(sq / n)));
  const double b = std::exp(1.0) - std::exp(cs / n);
  return a + b;
}

double rosenbrock(std::span<const double> z) {
  double s = 0;
  for (std::size_t i = 0; i + 1 < z.size(); ++i) {
    const double t = z[i + 1] - z[i] * z[i];
    const double u = 1.0 - z[i];
    s += 100.0 * t * t + u * u;
  }
  return s;
}

double schwefel_1_2(std::span<const double> z) {
  double s = 0, partial = 0;
  for (double v : z) {
    partial += v;
    s += partial * partial;
  }
  return s;
}

//------------------------------------------------------------------------------
// BenchFunction
//------------------------------------------------------------------------------

BenchFunction::BenchFunction(std::string name, Category category, Base base, Position shift,
                             Box box, std::vector<RotatedGroup> groups)
    : name_(std::move(name)),
      category_(category),
      base_(base),
      shift_(std::move(shift)),
      box_(std::move(box)),
      groups_(std::move(groups)) {
  if (shift_.size() != box_.dim()) throw DimensionMismatch("shift length differs from box dimension");
  if (!box_.contains(shift_)) throw OutOfBox("shift lies outside the box");
  std::vector<bool> used(box_.dim(), false);
  for (const auto& g : groups_) {
    if (g.matrix.size() != g.indices.size() * g.indices.size())
      throw DimensionMismatch("rotation matrix does not match its group size");
    for (std::size_t j : g.indices) {
      if (j >= box_.dim() || used[j]) throw DimensionMismatch("rotated groups must be disjoint");
      used[j] = true;
    }
  }
  if (base_ == Base::Elliptic) elliptic_weights_ = elliptic_weights(box_.dim());
}

double BenchFunction::evaluate(std::span<const double> x) const {
  const std::size_t d = shift_.size();
  std::vector<double> z(d);
  for (std::size_t i = 0; i < d; ++i) z[i] = x[i] - shift_[i];

  std::vector<double> in, out;
  for (const auto& g : groups_) {
    const std::size_t m = g.indices.size();
    in.resize(m);
    out.assign(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) in[k] = z[g.indices[k]];
    for (std::size_t r = 0; r < m; ++r) {
      const double* row = g.matrix.data() + r * m;
      double acc = 0;
      for (std::size_t c = 0; c < m; ++c) acc += row[c] * in[c];
      out[r] = acc;
    }
    for (std::size_t k = 0; k < m; ++k) z[g.indices[k]] = out[k];
  }

  switch (base_) {
    case Base::Sphere: return sphere(z);
    case Base::Elliptic: return elliptic_weighted(z, elliptic_weights_);
    case Base::Rastrigin: return rastrigin(z);
    case Base::Ackley: return ackley(z);
    case Base::Rosenbrock:
      for (double& v : z) v += 1.0;
      return rosenbrock(z);
    case Base::Schwefel12: return schwefel_1_2(z);
  }
  return 0.0;
}

double eval_bench(const BenchFunction& fn, std::span<const double> x) {
  if (!fn.box().contains(x)) throw OutOfBox("point outside " + fn.name() + "'s box");
  return fn.evaluate(x);
}

//------------------------------------------------------------------------------
// Suite construction
//------------------------------------------------------------------------------

namespace {

double gaussian(RandomSource& rng) {
  // Box-Muller on the abstract source keeps the stream platform-independent.
  const double u1 = 1.0 - rng.uniform01();  // (0, 1]
  const double u2 = rng.uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Position draw_shift(std::size_t dim, RandomSource& rng) {
  const double margin = 0.1 * (kHi - kLo);
  Position o(dim);
  for (double& v : o) v = rng.uniform(kLo + margin, kHi - margin);
  return o;
}

std::vector<RotatedGroup> draw_groups(std::size_t dim, std::size_t m, std::size_t count,
                                      RandomSource& rng) {
  const auto perm = random_permutation(dim, rng);
  std::vector<RotatedGroup> groups;
  for (std::size_t g = 0; g < count; ++g) {
    RotatedGroup rg;
    rg.indices.assign(perm.begin() + static_cast<std::ptrdiff_t>(g * m),
                      perm.begin() + static_cast<std::ptrdiff_t>((g + 1) * m));
    std::sort(rg.indices.begin(), rg.indices.end());
    rg.matrix = random_rotation(m, rng);
    groups.push_back(std::move(rg));
  }
  return groups;
}

}  // namespace

std::vector<double> random_rotation(std::size_t m, RandomSource& rng) {
  Eigen::MatrixXd a(m, m);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < m; ++c) a(r, c) = gaussian(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd rr = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index c = 0; c < q.cols(); ++c)
    if (rr(c, c) < 0) q.col(c) *= -1.0;

  std::vector<double> out(m * m);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < m; ++c) out[r * m + c] = q(r, c);
  return out;
}

std::size_t default_group_size(std::size_t dim) {
  return std::max<std::size_t>(2, static_cast<std::size_t>(std::lround(static_cast<double>(dim) / 4.0)));
}

std::vector<std::string> suite_names() {
  return {"shifted_sphere",   "shifted_elliptic",  "shifted_rastrigin", "shifted_ackley",
          "rotated_elliptic", "rotated_rastrigin", "shifted_rosenbrock", "shifted_schwefel12"};
}

std::vector<BenchFunction> make_suite(std::size_t dim, std::uint64_t seed) {
  if (dim < 2) throw DimensionMismatch("benchmark suite needs dim >= 2");
  const Box box = Box::uniform(dim, kLo, kHi);
  const std::size_t m = std::min(default_group_size(dim), dim);
  const std::size_t rastrigin_groups = std::max<std::size_t>(1, dim / m / 2);

  struct Entry {
    const char* name;
    Category cat;
    Base base;
    std::size_t groups;
  };
  const Entry entries[] = {
      {"shifted_sphere", Category::SeparableUnimodal, Base::Sphere, 0},
      {"shifted_elliptic", Category::SeparableUnimodal, Base::Elliptic, 0},
      {"shifted_rastrigin", Category::SeparableMultimodal, Base::Rastrigin, 0},
      {"shifted_ackley", Category::SeparableMultimodal, Base::Ackley, 0},
      {"rotated_elliptic", Category::PartiallySeparable, Base::Elliptic, 1},
      {"rotated_rastrigin", Category::PartiallySeparable, Base::Rastrigin, rastrigin_groups},
      {"shifted_rosenbrock", Category::FullyNonseparable, Base::Rosenbrock, 0},
      {"shifted_schwefel12", Category::FullyNonseparable, Base::Schwefel12, 0},
  };

  std::vector<BenchFunction> suite;
  for (const auto& s : entries) {
    Rng rng(seed, s.name);
    Rng shift_rng = rng.split("shift");
    Rng rot_rng = rng.split("rotation");
    Position o = draw_shift(dim, shift_rng);
    auto groups = s.groups ? draw_groups(dim, m, s.groups, rot_rng) : std::vector<RotatedGroup>{};
    suite.emplace_back(s.name, s.cat, s.base, std::move(o), box, std::move(groups));
  }
  return suite;
}

std::uint64_t optimum_hash(const BenchFunction& fn) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  auto mix = [&](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001B3ull;
    }
  };
  for (std::size_t i = 0; i < fn.optimum_position().size(); ++i) {
    if (i) mix(",");
    mix(format_double(fn.optimum_position()[i]));
  }
  return h;
}

std::string suite_manifest_json(const std::vector<BenchFunction>& suite, std::uint64_t seed) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& fn : suite) {
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(optimum_hash(fn)));
    nlohmann::ordered_json j;
    j["name"] = fn.name();
    j["category"] = to_string(fn.category());
    j["base"] = to_string(fn.base());
    j["dim"] = fn.dim();
    j["seed"] = seed;
    j["box"] = {{"lower", fn.box().lower().front()}, {"upper", fn.box().upper().front()}};
    if (fn.group_size()) {
      j["group_size"] = fn.group_size();
      j["rotated_groups"] = fn.groups().size();
    }
    j["optimum_value"] = 0.0;
    j["optimum_hash"] = hex;
    arr.push_back(std::move(j));
  }
  nlohmann::ordered_json root;
  root["functions"] = std::move(arr);
  return root.dump(2) + "\n";
}

}  // namespace mcdopt::bench
