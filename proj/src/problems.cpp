#include "ddmut/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace ddmut {

double evaluate_counted(const Problem& problem, const Genome& x, Budget& budget) {
  budget.charge_fitness();
  return problem.evaluate(x);
}

bool is_permutation(const Permutation& perm) {
  std::vector<bool> seen(perm.size(), false);
  for (int p : perm) {
    if (p < 0 || static_cast<std::size_t>(p) >= perm.size() || seen[p]) return false;
    seen[p] = true;
  }
  return true;
}

Permutation inverse(const Permutation& perm) {
  if (!is_permutation(perm)) throw std::invalid_argument("not a permutation");
  Permutation inv(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = static_cast<int>(i);
  return inv;
}

Permutation identity_permutation(int c) {
  if (c < 1) throw std::invalid_argument("permutation size must be >= 1");
  Permutation perm(c);
  std::iota(perm.begin(), perm.end(), 0);
  return perm;
}

Permutation random_permutation(int c, RngStream& rng) {
  Permutation perm = identity_permutation(c);
  for (int i = c - 1; i > 0; --i) std::swap(perm[i], perm[rng.uniform_int(0, i)]);
  return perm;
}

int onemax(const Genome& x) {
  if (!x.space().is_binary()) throw std::invalid_argument("onemax requires a binary genome");
  int ones = 0;
  for (int b : x.values()) ones += b;
  return ones;
}

int ruggedness_perm(int level, int n, int v) {
  if (v < 1) throw std::invalid_argument("ruggedness block size must be >= 1");
  if (level < 0 || level > n) throw std::invalid_argument("level outside [0, n]");
  const int complete = n / v;
  if (level / v < complete) return level + v - 2 * (level % v) - 1;
  const int start = complete * v;
  return start + n - level;
}

int ruggedness_eval(const Genome& x, int v) { return ruggedness_perm(onemax(x), static_cast<int>(x.size()), v); }

double ruggedness_dist(const Genome& x, const Genome& y, int v) {
  require_same_dimension(x, y);
  return std::abs(ruggedness_eval(x, v) - ruggedness_eval(y, v));
}

OneMaxProblem::OneMaxProblem(std::size_t n) : space_(SearchSpace::binary(n)) {}

RuggednessProblem::RuggednessProblem(std::size_t n, int v) : space_(SearchSpace::binary(n)), v_(v) {
  if (v < 1) throw std::invalid_argument("ruggedness block size must be >= 1");
}

std::string RuggednessProblem::name() const { return "ruggedness(v=" + std::to_string(v_) + ")"; }

// ---------------------------------------------------------------------------

namespace {

// Rastrigin grid step in its natural units; with unit spacing every grid point
// would sit in a cosine trough and the function would collapse to a sphere.
constexpr double kRastriginScale = 1.0 / 3.0;
constexpr double kEllipsoidCondition = 1e6;
constexpr double kRidgeWeight = 100.0;

}  // namespace

std::string_view to_string(IntegerFunction kind) {
  switch (kind) {
    case IntegerFunction::sphere: return "sphere";
    case IntegerFunction::ellipsoid: return "ellipsoid";
    case IntegerFunction::rastrigin: return "rastrigin";
    case IntegerFunction::sharp_ridge: return "sharp_ridge";
  }
  return "?";
}

const std::vector<std::string>& integer_function_names() {
  static const std::vector<std::string> names{"sphere", "ellipsoid", "rastrigin", "sharp_ridge"};
  return names;
}

IntegerFunction parse_integer_function(std::string_view name) {
  if (name == "sphere") return IntegerFunction::sphere;
  if (name == "ellipsoid") return IntegerFunction::ellipsoid;
  if (name == "rastrigin") return IntegerFunction::rastrigin;
  if (name == "sharp_ridge") return IntegerFunction::sharp_ridge;
  throw std::invalid_argument("unknown integer function '" + std::string(name) + "'");
}

double integer_base_value(IntegerFunction kind, std::span<const double> z) {
  const std::size_t n = z.size();
  double f = 0.0;
  switch (kind) {
    case IntegerFunction::sphere:
      for (double zi : z) f += zi * zi;
      return f;
    case IntegerFunction::ellipsoid:
      for (std::size_t i = 0; i < n; ++i) {
        const double expo = n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
        f += std::pow(kEllipsoidCondition, expo) * z[i] * z[i];
      }
      return f;
    case IntegerFunction::rastrigin:
      for (double zi : z) {
        const double u = zi * kRastriginScale;
        f += u * u + 10.0 * (1.0 - std::cos(2.0 * std::numbers::pi * u));
      }
      return f;
    case IntegerFunction::sharp_ridge: {
      double tail = 0.0;
      for (std::size_t i = 1; i < n; ++i) tail += z[i] * z[i];
      return z[0] * z[0] + kRidgeWeight * std::sqrt(tail);
    }
  }
  return f;
}

PermutedIntegerProblem::PermutedIntegerProblem(IntegerFunction kind, SearchSpace space, Permutation perm,
                                               std::vector<int> optimum_location)
    : kind_(kind), space_(std::move(space)), perm_(std::move(perm)), opt_(std::move(optimum_location)) {
  inv_ = inverse(perm_);
  const int c = space_.cardinality(0);
  for (int ci : space_.cardinalities()) {
    if (ci != c) throw std::invalid_argument("permuted integer problems need a common cardinality");
  }
  if (static_cast<int>(perm_.size()) != c) throw std::invalid_argument("permutation size differs from cardinality");
  if (opt_.size() != space_.size()) throw std::invalid_argument("optimum location has wrong dimension");
  for (int o : opt_) {
    if (o < 0 || o >= c) throw std::invalid_argument("optimum location outside the grid");
  }
}

std::string PermutedIntegerProblem::name() const { return std::string(to_string(kind_)); }

double PermutedIntegerProblem::evaluate(const Genome& x) const {
  if (x.size() != space_.size()) throw std::invalid_argument("genome dimension differs from problem");
  std::vector<double> z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = static_cast<double>(inv_[x[i]] - opt_[i]);
  return -integer_base_value(kind_, z);
}

Genome PermutedIntegerProblem::optimal_genome() const {
  std::vector<int> values(opt_.size());
  for (std::size_t i = 0; i < opt_.size(); ++i) values[i] = perm_[opt_[i]];
  return Genome(std::move(values), space_);
}

std::shared_ptr<PermutedIntegerProblem> make_integer_problem(IntegerFunction kind, std::size_t n, int c,
                                                             Permutation perm, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("dimension must be >= 1");
  if (c < 2) throw std::invalid_argument("cardinality must be >= 2");
  RngStream rng(derive_seed(seed, {0x6f7074ULL}));
  std::vector<int> opt(n);
  for (auto& o : opt) o = rng.uniform_int(0, c - 1);
  return std::make_shared<PermutedIntegerProblem>(kind, SearchSpace::uniform(n, c), std::move(perm), std::move(opt));
}

double permuted_l2_dist(const Genome& x, const Genome& y, const Permutation& inverse_perm) {
  require_same_dimension(x, y);
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double diff = inverse_perm[x[i]] - inverse_perm[y[i]];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

double HammingMetric::distance(const Genome& x, const Genome& y) const {
  require_same_dimension(x, y);
  int diff = 0;
  for (std::size_t i = 0; i < x.size(); ++i) diff += x[i] != y[i];
  return diff;
}

RuggednessMetric::RuggednessMetric(int v) : v_(v) {
  if (v < 1) throw std::invalid_argument("ruggedness block size must be >= 1");
}

std::string RuggednessMetric::name() const { return "ruggedness(v=" + std::to_string(v_) + ")"; }

PermutedL2Metric::PermutedL2Metric(const Permutation& perm) : inv_(inverse(perm)) {}

}  // namespace ddmut
