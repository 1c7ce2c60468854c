#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ddmut/genome.hpp"
#include "ddmut/problem.hpp"
#include "ddmut/rng.hpp"
#include "ddmut/stepdist.hpp"
#include "ddmut/umda.hpp"

namespace ddmut {

// ---------------------------------------------------------------------------
// Distance-driven mutation

struct DdMutationConfig {
  std::shared_ptr<const Metric> metric;
  std::shared_ptr<const StepSizeDistribution> steps;
  UmdaConfig inner;
  /// When set, step sizes live in transformed space 1 - exp(-gamma^2 d^2)
  /// (black-box mode); otherwise they are raw distances.
  std::optional<double> gamma;

  void validate() const;
};

struct DdMutationResult {
  Genome mutant;
  /// Sampled step size s.
  double target = 0.0;
  /// Step size of the mutant in the same space as s.
  double achieved = 0.0;
  double gap = 0.0;
  std::int64_t inner_evaluations = 0;
};

/// Samples s from the step distribution and returns the inner optimizer's best
/// y for |D(x, y) - s|, where D is the metric or its transform. y = x is
/// excluded, so the result always differs from x. The inner run stops on gap 0
/// or when its budget is spent.
DdMutationResult dd_mutate(const Genome& x, const DdMutationConfig& config, RngStream& rng);

/// dd_mutate with a given step size instead of a sampled one.
DdMutationResult dd_mutate_to(const Genome& x, double step, const DdMutationConfig& config, RngStream& rng);

// ---------------------------------------------------------------------------
// Classical variation

/// Flips `count` distinct, uniformly chosen positions of a binary genome.
Genome flip_positions(const Genome& x, int count, RngStream& rng);

/// Samples l ~ Bin(n, p) conditioned on l >= 1 and flips l distinct positions.
Genome standard_bit_mutation(const Genome& x, double p, RngStream& rng);

/// Conditional Bin(n, p) >= 1 draw used by standard_bit_mutation.
int sample_mutation_strength(int n, double p, RngStream& rng);

/// Takes each component from `xprime` with probability c, otherwise from `x`.
Genome biased_crossover(const Genome& x, const Genome& xprime, double c, RngStream& rng);

/// Per-component step sizes for RLS-ab style mutation, kept within [lower, upper_i].
struct VelocityState {
  std::vector<double> velocity;
  std::vector<double> upper;
  double lower = 1.0;
  double success_factor = 2.0;
  double failure_factor = 0.5;

  /// Velocities start at `initial` clamped into [1, max(1, (c_i - 1) / 2)].
  static VelocityState for_space(const SearchSpace& space, double initial = 1.0, double success_factor = 2.0,
                                 double failure_factor = 0.5);
  bool within_bounds() const;
};

/// Adds +-round(v_i) (sign uniform, magnitude >= 1) to each selected component,
/// reflecting off the walls of [0, c_i - 1].
Genome velocity_mutate(const Genome& x, const VelocityState& state, std::span<const std::size_t> positions,
                       RngStream& rng);

/// Reflects an out-of-range value back into [0, c - 1].
int reflect_into_range(int value, int c);

/// Multiplies the selected velocities by the success or failure factor and clamps them.
VelocityState velocity_update(VelocityState state, std::span<const std::size_t> positions, bool success);

// ---------------------------------------------------------------------------
// Mutation bindings used by the outer algorithms

class MutationOperator {
 public:
  virtual ~MutationOperator() = default;

  virtual std::string name() const = 0;
  /// Called once per iteration before the offspring of that iteration are made.
  virtual void begin_iteration(const Genome& /*parent*/, RngStream& /*rng*/) {}
  virtual Genome mutate(const Genome& x, RngStream& rng) = 0;
  /// Mean of the step-size distribution, if the operator has one.
  virtual std::optional<double> mean_param() const { return std::nullopt; }

  std::int64_t distance_evaluations() const { return distance_evaluations_; }

 protected:
  std::int64_t distance_evaluations_ = 0;
};

/// Standard bit mutation with rate p. With a shared strength the number of
/// flipped bits is drawn once per iteration and reused by every offspring.
class StandardBitMutation final : public MutationOperator {
 public:
  StandardBitMutation(double p, bool shared_strength);

  std::string name() const override { return "standard_bit"; }
  void begin_iteration(const Genome& parent, RngStream& rng) override;
  Genome mutate(const Genome& x, RngStream& rng) override;

 private:
  double p_;
  bool shared_;
  int strength_ = 1;
};

class DdMutation final : public MutationOperator {
 public:
  explicit DdMutation(DdMutationConfig config);

  std::string name() const override { return "distance_driven"; }
  Genome mutate(const Genome& x, RngStream& rng) override;
  std::optional<double> mean_param() const override { return config_.steps->mean(); }

  const DdMutationConfig& config() const { return config_; }
  void set_steps(std::shared_ptr<const StepSizeDistribution> steps);
  const DdMutationResult& last() const { return last_; }

 private:
  DdMutationConfig config_;
  DdMutationResult last_;
};

}  // namespace ddmut
