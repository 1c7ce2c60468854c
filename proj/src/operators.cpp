#include "ddmut/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ddmut {

void DdMutationConfig::validate() const {
  if (!metric) throw std::invalid_argument("distance-driven mutation needs a metric");
  if (!steps) throw std::invalid_argument("distance-driven mutation needs a step distribution");
  inner.validate();
  if (inner.budget < inner.lambda) throw std::invalid_argument("inner budget must be >= inner lambda");
  if (gamma && !(*gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
}

DdMutationResult dd_mutate(const Genome& x, const DdMutationConfig& config, RngStream& rng) {
  const double s = config.steps->sample(rng);
  return dd_mutate_to(x, s, config, rng);
}

DdMutationResult dd_mutate_to(const Genome& x, double step, const DdMutationConfig& config, RngStream& rng) {
  const Metric& metric = *config.metric;
  const std::optional<double> gamma = config.gamma;
  auto step_of = [&](const Genome& y) {
    const double d = metric.distance(x, y);
    return gamma ? transform_distance(d, *gamma) : d;
  };
  Objective objective = [&](const Genome& y) {
    if (y == x) return -std::numeric_limits<double>::infinity();
    return -std::abs(step_of(y) - step);
  };
  StopPredicate exact = [](const Genome&, double v) { return v >= 0.0; };

  UmdaResult r = umda_run(objective, x.space(), config.inner, rng, exact);

  DdMutationResult out;
  out.target = step;
  out.inner_evaluations = r.evaluations;
  out.mutant = std::move(r.best);
  if (out.mutant == x) {
    // Only reachable when every inner sample was x itself.
    const std::size_t i = rng.index(x.size());
    const int c = x.space().cardinality(i);
    out.mutant.set(i, (x[i] + 1 + rng.uniform_int(0, c - 2)) % c);
  }
  out.achieved = step_of(out.mutant);
  out.gap = std::abs(out.achieved - step);
  return out;
}

// ---------------------------------------------------------------------------

Genome flip_positions(const Genome& x, int count, RngStream& rng) {
  if (!x.space().is_binary()) throw std::invalid_argument("bit flips require a binary genome");
  Genome y = x;
  for (std::size_t i : rng.sample_without_replacement(x.size(), static_cast<std::size_t>(count))) y.set(i, 1 - y[i]);
  return y;
}

int sample_mutation_strength(int n, double p, RngStream& rng) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("mutation rate must be in (0, 1]");
  int l = 0;
  while (l == 0) l = rng.binomial(n, p);
  return l;
}

Genome standard_bit_mutation(const Genome& x, double p, RngStream& rng) {
  return flip_positions(x, sample_mutation_strength(static_cast<int>(x.size()), p, rng), rng);
}

Genome biased_crossover(const Genome& x, const Genome& xprime, double c, RngStream& rng) {
  require_same_dimension(x, xprime);
  if (!(c >= 0.0 && c <= 1.0)) throw std::invalid_argument("crossover bias must be in [0, 1]");
  Genome child = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (rng.uniform01() < c) child.set(i, xprime[i]);
  }
  return child;
}

VelocityState VelocityState::for_space(const SearchSpace& space, double initial, double success_factor,
                                       double failure_factor) {
  if (!(success_factor > 1.0)) throw std::invalid_argument("velocity success factor must be > 1");
  if (!(failure_factor > 0.0 && failure_factor < 1.0)) {
    throw std::invalid_argument("velocity failure factor must be in (0, 1)");
  }
  VelocityState state;
  state.success_factor = success_factor;
  state.failure_factor = failure_factor;
  state.upper.resize(space.size());
  state.velocity.resize(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) {
    state.upper[i] = std::max(1.0, (space.cardinality(i) - 1) / 2.0);
    state.velocity[i] = std::clamp(initial, state.lower, state.upper[i]);
  }
  return state;
}

bool VelocityState::within_bounds() const {
  for (std::size_t i = 0; i < velocity.size(); ++i) {
    if (velocity[i] < lower || velocity[i] > upper[i]) return false;
  }
  return true;
}

int reflect_into_range(int value, int c) {
  const int hi = c - 1;
  const int period = 2 * hi;
  int r = value % period;
  if (r < 0) r += period;
  return r <= hi ? r : period - r;
}

Genome velocity_mutate(const Genome& x, const VelocityState& state, std::span<const std::size_t> positions,
                       RngStream& rng) {
  if (positions.empty()) throw std::invalid_argument("velocity mutation needs at least one position");
  Genome y = x;
  for (std::size_t i : positions) {
    const int magnitude = std::max(1, static_cast<int>(std::lround(state.velocity[i])));
    const int step = rng.bernoulli(0.5) ? magnitude : -magnitude;
    y.set(i, reflect_into_range(x[i] + step, x.space().cardinality(i)));
  }
  return y;
}

VelocityState velocity_update(VelocityState state, std::span<const std::size_t> positions, bool success) {
  const double factor = success ? state.success_factor : state.failure_factor;
  for (std::size_t i : positions) state.velocity[i] = std::clamp(state.velocity[i] * factor, state.lower, state.upper[i]);
  return state;
}

// ---------------------------------------------------------------------------

StandardBitMutation::StandardBitMutation(double p, bool shared_strength) : p_(p), shared_(shared_strength) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("mutation rate must be in (0, 1]");
}

void StandardBitMutation::begin_iteration(const Genome& parent, RngStream& rng) {
  if (shared_) strength_ = sample_mutation_strength(static_cast<int>(parent.size()), p_, rng);
}

Genome StandardBitMutation::mutate(const Genome& x, RngStream& rng) {
  if (shared_) return flip_positions(x, strength_, rng);
  return standard_bit_mutation(x, p_, rng);
}

DdMutation::DdMutation(DdMutationConfig config) : config_(std::move(config)) { config_.validate(); }

Genome DdMutation::mutate(const Genome& x, RngStream& rng) {
  last_ = dd_mutate(x, config_, rng);
  distance_evaluations_ += last_.inner_evaluations;
  return last_.mutant;
}

void DdMutation::set_steps(std::shared_ptr<const StepSizeDistribution> steps) {
  if (!steps) throw std::invalid_argument("step distribution is null");
  config_.steps = std::move(steps);
}

}  // namespace ddmut
