#include <cmath>
#include <limits>
#include <memory>
#include <set>
#include <vector>

#include "doctest.h"
#include "ddmut/algorithms.hpp"
#include "ddmut/operators.hpp"
#include "ddmut/problems.hpp"

using namespace ddmut;

namespace {

Genome from_mask(unsigned mask, std::size_t n) {
  std::vector<int> bits(n);
  for (std::size_t i = 0; i < n; ++i) bits[i] = (mask >> i) & 1u;
  return Genome(bits, SearchSpace::binary(n));
}

// Exhaustive min over y != x of |D(x, y) - s|.
double brute_force_gap(const Genome& x, double s, const Metric& metric, std::optional<double> gamma) {
  double best = std::numeric_limits<double>::infinity();
  for (unsigned mask = 0; mask < (1u << x.size()); ++mask) {
    const Genome y = from_mask(mask, x.size());
    if (y == x) continue;
    const double d = metric.distance(x, y);
    best = std::min(best, std::abs((gamma ? transform_distance(d, *gamma) : d) - s));
  }
  return best;
}

class FixedStep final : public StepSizeDistribution {
 public:
  explicit FixedStep(double s) : s_(s) {}
  double sample(RngStream&) const override { return s_; }
  double mean() const override { return s_; }
  std::string describe() const override { return "fixed"; }

 private:
  double s_;
};

DdMutationConfig ruggedness_config(int v, double step) {
  return {std::make_shared<RuggednessMetric>(v), std::make_shared<FixedStep>(step), UmdaConfig{50, 100, 1000, {}},
          std::nullopt};
}

}  // namespace

TEST_CASE("dd mutation with a reachable step hits it exactly") {
  const std::size_t n = 12;
  const Genome zeros(SearchSpace::binary(n));
  RngStream rng(21);
  const auto config = ruggedness_config(1, 1.0);
  const DdMutationResult r = dd_mutate(zeros, config, rng);
  CHECK(onemax(r.mutant) == 1);
  CHECK(r.gap == 0.0);
  CHECK(r.target == 1.0);
  CHECK(r.inner_evaluations <= 1000);
}

TEST_CASE("dd mutation agrees with the exhaustive oracle at n = 12") {
  const std::size_t n = 12;
  RngStream rng(2);
  int reachable = 0;
  int exact = 0;
  for (int v : {1, 3, 5}) {
    const auto metric = std::make_shared<RuggednessMetric>(v);
    for (int trial = 0; trial < 6; ++trial) {
      const Genome x = random_genome(SearchSpace::binary(n), rng);
      for (int s = 1; s <= 12; ++s) {
        const double oracle = brute_force_gap(x, s, *metric, std::nullopt);
        const DdMutationResult r = dd_mutate_to(x, s, ruggedness_config(v, s), rng);
        REQUIRE(r.gap >= oracle);
        REQUIRE_FALSE(r.mutant == x);
        if (oracle == 0.0) {
          ++reachable;
          exact += r.gap == 0.0;
        }
      }
    }
  }
  CHECK(reachable > 100);
  CHECK(exact >= 0.9 * reachable);
}

TEST_CASE("unreachable step returns the farthest level after spending the inner budget") {
  const std::size_t n = 10;
  const Genome x = from_mask(0b11, n);
  const RuggednessMetric metric(1);
  RngStream rng(6);
  const DdMutationResult r = dd_mutate_to(x, 40.0, ruggedness_config(1, 40.0), rng);
  const double oracle = brute_force_gap(x, 40.0, metric, std::nullopt);
  CHECK(oracle == 32.0);
  CHECK(r.gap == oracle);
  CHECK(r.inner_evaluations == 1000);
  CHECK(onemax(r.mutant) == 10);
}

TEST_CASE("zero step in transformed space yields the nearest distinct point") {
  const std::size_t n = 10;
  const auto metric = std::make_shared<HammingMetric>();
  RngStream rng(10);
  const DdMutationConfig config{metric, std::make_shared<FixedStep>(0.0), UmdaConfig{50, 100, 1000, {}}, 0.3};
  for (int trial = 0; trial < 20; ++trial) {
    const Genome x = random_genome(SearchSpace::binary(n), rng);
    const DdMutationResult r = dd_mutate(x, config, rng);
    CHECK(r.gap == doctest::Approx(brute_force_gap(x, 0.0, *metric, 0.3)));
    CHECK(metric->distance(x, r.mutant) == 1.0);
    CHECK(r.inner_evaluations == 1000);
  }
}

TEST_CASE("dd mutation never returns its input") {
  RngStream rng(4);
  const SearchSpace tiny = SearchSpace::binary(1);
  const Genome x(tiny);
  const DdMutationConfig config{std::make_shared<HammingMetric>(), std::make_shared<FixedStep>(0.0),
                                UmdaConfig{1, 1, 1, {}}, std::nullopt};
  for (int i = 0; i < 100; ++i) REQUIRE_FALSE(dd_mutate(x, config, rng).mutant == x);

  const SearchSpace grid = SearchSpace::uniform(3, 4);
  const DdMutationConfig l2{std::make_shared<PermutedL2Metric>(identity_permutation(4)), std::make_shared<FixedStep>(0.0),
                            UmdaConfig{2, 4, 4, {}}, std::nullopt};
  for (int i = 0; i < 500; ++i) {
    const Genome y = random_genome(grid, rng);
    REQUIRE_FALSE(dd_mutate(y, l2, rng).mutant == y);
  }
}

TEST_CASE("config validation") {
  DdMutationConfig c = ruggedness_config(1, 1.0);
  CHECK_NOTHROW(c.validate());
  c.inner.budget = 50;
  CHECK_THROWS(c.validate());
  c = ruggedness_config(1, 1.0);
  c.metric.reset();
  CHECK_THROWS(c.validate());
  c = ruggedness_config(1, 1.0);
  c.gamma = 0.0;
  CHECK_THROWS(c.validate());
}

TEST_CASE("standard bit mutation") {
  RngStream rng(1);
  const Genome x({1, 0, 1}, SearchSpace::binary(3));
  CHECK(standard_bit_mutation(x, 1.0, rng) == Genome({0, 1, 0}, SearchSpace::binary(3)));

  const std::size_t n = 20;
  const double p = 1.0 / n;
  const Genome zeros(SearchSpace::binary(n));
  constexpr int draws = 100000;
  double sum = 0.0;
  double sum2 = 0.0;
  for (int i = 0; i < draws; ++i) {
    const Genome y = standard_bit_mutation(zeros, p, rng);
    REQUIRE_FALSE(y == zeros);
    const double flips = onemax(y);
    sum += flips;
    sum2 += flips * flips;
  }
  const double expected = n * p / (1 - std::pow(1 - p, static_cast<double>(n)));
  const double mean = sum / draws;
  const double sd = std::sqrt(sum2 / draws - mean * mean);
  CHECK(std::abs(mean - expected) <= 3 * sd / std::sqrt(static_cast<double>(draws)));
  CHECK_THROWS(standard_bit_mutation(Genome(SearchSpace::uniform(3, 3)), 0.5, rng));
}

TEST_CASE("shared mutation strength") {
  RngStream rng(8);
  StandardBitMutation op(0.2, true);
  const Genome zeros(SearchSpace::binary(30));
  for (int it = 0; it < 50; ++it) {
    op.begin_iteration(zeros, rng);
    const int first = onemax(op.mutate(zeros, rng));
    for (int k = 0; k < 4; ++k) REQUIRE(onemax(op.mutate(zeros, rng)) == first);
  }
}

TEST_CASE("velocity mutation") {
  RngStream rng(13);
  SUBCASE("unit velocity is a neighbour step") {
    const SearchSpace space = SearchSpace::uniform(4, 10);
    const VelocityState state = VelocityState::for_space(space);
    const Genome x({5, 5, 5, 5}, space);
    const std::vector<std::size_t> pos{0, 2};
    for (int i = 0; i < 100; ++i) {
      const Genome y = velocity_mutate(x, state, pos, rng);
      REQUIRE(std::abs(y[0] - 5) == 1);
      REQUIRE(std::abs(y[2] - 5) == 1);
      REQUIRE(y[1] == 5);
      REQUIRE(y[3] == 5);
    }
  }
  SUBCASE("reflection at the walls") {
    CHECK(reflect_into_range(-1, 10) == 1);
    CHECK(reflect_into_range(-3, 10) == 3);
    CHECK(reflect_into_range(10, 10) == 8);
    CHECK(reflect_into_range(149, 100) == 49);
    CHECK(reflect_into_range(99 + 50, 100) == 49);
    const SearchSpace space = SearchSpace::uniform(1, 100);
    VelocityState state = VelocityState::for_space(space);
    state.velocity[0] = 50;
    const std::vector<std::size_t> pos{0};
    std::set<int> seen;
    for (int i = 0; i < 100; ++i) {
      const int y = velocity_mutate(Genome({99}, space), state, pos, rng)[0];
      REQUIRE(y >= 0);
      REQUIRE(y <= 99);
      seen.insert(y);
    }
    CHECK(seen == std::set<int>{49});
    const Genome at_zero({0}, SearchSpace::uniform(1, 100));
    state.velocity[0] = 1;
    for (int i = 0; i < 50; ++i) REQUIRE(velocity_mutate(at_zero, state, pos, rng)[0] == 1);
  }
  CHECK_THROWS(velocity_mutate(Genome(SearchSpace::uniform(2, 5)), VelocityState::for_space(SearchSpace::uniform(2, 5)),
                               std::vector<std::size_t>{}, rng));
}

TEST_CASE("velocity update") {
  const SearchSpace space = SearchSpace::uniform(3, 11);
  VelocityState s = VelocityState::for_space(space, 2.0);
  const std::vector<std::size_t> first{0};
  CHECK(velocity_update(s, first, true).velocity[0] == 4.0);
  s.velocity[0] = 1.0;
  CHECK(velocity_update(s, first, false).velocity[0] == 1.0);
  s.velocity[0] = 5.0;
  CHECK(velocity_update(s, first, true).velocity[0] == 5.0);
  CHECK(velocity_update(s, first, true).velocity[1] == 2.0);

  RngStream rng(55);
  VelocityState fuzz = VelocityState::for_space(SearchSpace({2, 3, 50, 100, 7}), 3.0);
  for (int i = 0; i < 10000; ++i) {
    const std::vector<std::size_t> pos{rng.index(5), rng.index(5)};
    fuzz = velocity_update(std::move(fuzz), pos, rng.bernoulli(0.3));
    REQUIRE(fuzz.within_bounds());
  }
}

TEST_CASE("biased crossover") {
  RngStream rng(9);
  const SearchSpace space = SearchSpace::binary(10000);
  const Genome zeros(space);
  const Genome ones(std::vector<int>(10000, 1), space);
  CHECK(biased_crossover(zeros, ones, 0.0, rng) == zeros);
  CHECK(biased_crossover(zeros, ones, 1.0, rng) == ones);
  const int count = onemax(biased_crossover(zeros, ones, 0.5, rng));
  CHECK(std::abs(count - 5000) <= 3 * 50);

  const SearchSpace grid = SearchSpace::uniform(50, 9);
  for (int t = 0; t < 100; ++t) {
    const Genome a = random_genome(grid, rng);
    const Genome b = random_genome(grid, rng);
    const Genome child = biased_crossover(a, b, 0.3, rng);
    for (std::size_t i = 0; i < 50; ++i) REQUIRE((child[i] == a[i] || child[i] == b[i]));
  }
  CHECK_THROWS(biased_crossover(zeros, Genome(SearchSpace::binary(3)), 0.5, rng));
}

TEST_CASE("distance-driven operator binding counts inner evaluations") {
  RngStream rng(3);
  DdMutation op(ruggedness_config(1, 2.0));
  const Genome x(SearchSpace::binary(12));
  const Genome y = op.mutate(x, rng);
  CHECK(onemax(y) == 2);
  CHECK(op.distance_evaluations() == op.last().inner_evaluations);
  CHECK(op.mean_param() == 2.0);
  op.set_steps(std::make_shared<FixedStep>(3.0));
  CHECK(onemax(op.mutate(x, rng)) == 3);
  CHECK_THROWS(op.set_steps(nullptr));
}
