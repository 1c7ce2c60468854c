#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ddmut/problem.hpp"
#include "ddmut/rng.hpp"

namespace ddmut {

/// A permutation of {0..c-1}; perm[i] is the image of i.
using Permutation = std::vector<int>;

bool is_permutation(const Permutation& perm);
Permutation inverse(const Permutation& perm);
Permutation identity_permutation(int c);
/// Uniform random permutation (Fisher-Yates).
Permutation random_permutation(int c, RngStream& rng);

// ---------------------------------------------------------------------------
// OneMax and Ruggedness

/// Number of ones of a binary genome. Throws std::invalid_argument otherwise.
int onemax(const Genome& x);

/// Ruggedness permutation of OneMax levels: every complete block
/// [jv, jv+v-1], j < floor(n/v), is reversed, and so is the remainder block
/// [floor(n/v)v, n]. Bijective on {0..n}; the identity for v = 1.
int ruggedness_perm(int level, int n, int v);

int ruggedness_eval(const Genome& x, int v);

/// |r(x) - r(y)|. A pseudo-metric: distinct genomes on one level are at distance 0.
double ruggedness_dist(const Genome& x, const Genome& y, int v);

class OneMaxProblem final : public Problem {
 public:
  explicit OneMaxProblem(std::size_t n);
  std::string name() const override { return "onemax"; }
  const SearchSpace& space() const override { return space_; }
  double evaluate(const Genome& x) const override { return onemax(x); }
  std::optional<double> optimum() const override { return static_cast<double>(space_.size()); }

 private:
  SearchSpace space_;
};

class RuggednessProblem final : public Problem {
 public:
  RuggednessProblem(std::size_t n, int v);
  std::string name() const override;
  const SearchSpace& space() const override { return space_; }
  double evaluate(const Genome& x) const override { return ruggedness_eval(x, v_); }
  std::optional<double> optimum() const override { return static_cast<double>(space_.size()); }
  int block_size() const { return v_; }

 private:
  SearchSpace space_;
  int v_;
};

// ---------------------------------------------------------------------------
// Permuted integer functions

enum class IntegerFunction { sphere, ellipsoid, rastrigin, sharp_ridge };

std::string_view to_string(IntegerFunction kind);
/// Throws std::invalid_argument for unknown names.
IntegerFunction parse_integer_function(std::string_view name);
const std::vector<std::string>& integer_function_names();

/// Base function value at offsets z from the optimum (minimization, 0 at z = 0).
double integer_base_value(IntegerFunction kind, std::span<const double> z);

/// f(pi^{-1}(x_1), ..., pi^{-1}(x_n)) with a seeded optimum on the grid, unit
/// grid spacing and fitness = -(regret), so the optimum value is 0.
class PermutedIntegerProblem final : public Problem {
 public:
  PermutedIntegerProblem(IntegerFunction kind, SearchSpace space, Permutation perm, std::vector<int> optimum_location);

  std::string name() const override;
  const SearchSpace& space() const override { return space_; }
  double evaluate(const Genome& x) const override;
  std::optional<double> optimum() const override { return 0.0; }

  IntegerFunction kind() const { return kind_; }
  const Permutation& permutation() const { return perm_; }
  const Permutation& inverse_permutation() const { return inv_; }
  /// Optimum in unpermuted coordinates.
  const std::vector<int>& optimum_location() const { return opt_; }
  /// The genome attaining the optimum: x_i = pi(opt_i).
  Genome optimal_genome() const;

 private:
  IntegerFunction kind_;
  SearchSpace space_;
  Permutation perm_;
  Permutation inv_;
  std::vector<int> opt_;
};

/// n components of cardinality c, the same permutation in every component and
/// an optimum location drawn uniformly from the grid with `seed`.
std::shared_ptr<PermutedIntegerProblem> make_integer_problem(IntegerFunction kind, std::size_t n, int c,
                                                             Permutation perm, std::uint64_t seed);

/// ||pi^{-1}(x) - pi^{-1}(y)||_2, given the inverse permutation.
double permuted_l2_dist(const Genome& x, const Genome& y, const Permutation& inverse_perm);

// ---------------------------------------------------------------------------
// Metrics

class HammingMetric final : public Metric {
 public:
  std::string name() const override { return "hamming"; }
  double distance(const Genome& x, const Genome& y) const override;
};

class RuggednessMetric final : public Metric {
 public:
  explicit RuggednessMetric(int v);
  std::string name() const override;
  double distance(const Genome& x, const Genome& y) const override { return ruggedness_dist(x, y, v_); }

 private:
  int v_;
};

class PermutedL2Metric final : public Metric {
 public:
  /// Takes the forward permutation pi; distances use its inverse.
  explicit PermutedL2Metric(const Permutation& perm);
  std::string name() const override { return "permuted_l2"; }
  double distance(const Genome& x, const Genome& y) const override { return permuted_l2_dist(x, y, inv_); }

 private:
  Permutation inv_;
};

}  // namespace ddmut
