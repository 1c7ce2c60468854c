#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ddmut/problem.hpp"
#include "ddmut/rng.hpp"
#include "ddmut/umda.hpp"

namespace ddmut {

/// Distribution over mutation step sizes. Samples are non-negative.
class StepSizeDistribution {
 public:
  virtual ~StepSizeDistribution() = default;
  virtual double sample(RngStream& rng) const = 0;
  virtual double mean() const = 0;
  virtual std::string describe() const = 0;
};

/// Bin(trials, p), optionally conditioned on being at least one.
class BinomialStepDist final : public StepSizeDistribution {
 public:
  BinomialStepDist(int trials, double p, bool at_least_one = false);

  double sample(RngStream& rng) const override;
  /// np, or np / (1 - (1-p)^n) when conditioned on >= 1.
  double mean() const override;
  std::string describe() const override;

  int trials() const { return trials_; }
  double p() const { return p_; }
  bool at_least_one() const { return at_least_one_; }

 private:
  int trials_;
  double p_;
  bool at_least_one_;
};

// ---------------------------------------------------------------------------
// Distance transform and its parameters

/// 1 - exp(-gamma^2 d^2): maps [0, inf) monotonically onto [0, 1).
double transform_distance(double d, double gamma);

struct TransformParams {
  double eps1 = 0.0;
  double eps2 = 0.0;
  double gamma = 0.0;
  double zeta_min_hat = 0.0;
  double zeta_max_hat = 0.0;
};

/// Raised when the metric shows no spread (estimated min and max distance coincide).
class DegenerateMetric : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when no eps1 on the scan grid admits eps2 <= eps1.
class ScanFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ChainConstants {
  /// Chain length on each side.
  int k = 10;
  /// Growth factor of the ascending chain: d(x, z_i) >= grow * d(x, z_{i-1}).
  double grow = 2.0;
  /// Shrink divisor of the descending chain: d(x, z_{-i}) <= d(x, z_{-i+1}) / shrink.
  double shrink = 1.2;
  /// Number of eps1 grid points, eps1 = scan_step * j.
  int scan_steps = 100;
  double scan_step = 1e-4;

  void validate() const;
};

/// eps1/eps2 scan and gamma for known distance extremes.
TransformParams transform_params_from_extremes(double zeta_min, double zeta_max, const ChainConstants& constants = {});

struct TransformEstimate {
  TransformParams params;
  /// d(x, z_0), d(x, z_1), ... as accepted into the ascending chain.
  std::vector<double> ascending;
  /// d(x, z_0), d(x, z_{-1}), ... as accepted into the descending chain.
  std::vector<double> descending;
  std::int64_t distance_evaluations = 0;
};

/// Explores the distances around `anchor` with two chains of inner UMDA runs
/// (growing and shrinking distance), then derives eps1, eps2 and gamma.
/// A chain stops early once the inner optimizer can no longer move past its
/// last distance. Throws DegenerateMetric or ScanFailure.
TransformEstimate estimate_transform_params(const Metric& metric, const SearchSpace& space, const Genome& anchor,
                                            const ChainConstants& constants, const UmdaConfig& inner, RngStream& rng);

/// estimate_transform_params at uniformly random anchors, drawing a new anchor
/// after each ScanFailure, at most `attempts` times. The last failure is
/// rethrown. Distance evaluations of failed attempts are included.
TransformEstimate estimate_transform_params_random_anchor(const Metric& metric, const SearchSpace& space,
                                                          const ChainConstants& constants, const UmdaConfig& inner,
                                                          RngStream& rng, int attempts = 5);

// ---------------------------------------------------------------------------
// Maximum-entropy distribution with a fixed mean on [a, b]

class MeanOutOfRange : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NoSignChange : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mean of the density proportional to exp(lambda1 x) on [a, b].
double maxent_mean(double lambda1, double a, double b);

/// Left minus right side of the combined normalization/mean equation:
/// e^{l b}(l b - 1) - e^{l a}(l a - 1) - l m (e^{l b} - e^{l a}).
double combined_residual(double lambda1, double m, double a, double b);

/// combined_residual divided by l (e^{l b} - e^{l a}); equals maxent_mean - m.
double normalized_residual(double lambda1, double m, double a, double b);

/// Root lambda1 < 0 of the combined equation by bisection on (-K, 0).
/// K <= 0 selects max(1e6, 10 / (m - a)). Requires a < m < (a + b) / 2.
double solve_lambda1(double m, double a, double b, double K = 0.0, double tol = 1e-12);

/// ln(lambda1 / (e^{lambda1 b} - e^{lambda1 a})). Requires lambda1 != 0.
double solve_lambda0(double lambda1, double a, double b);

/// Density exp(lambda0 + lambda1 x) on [a, b] with mean m, the maximum-entropy
/// density under those constraints. Immutable; with_mean() re-solves.
class MaxEntropyStepDist final : public StepSizeDistribution {
 public:
  MaxEntropyStepDist(double a, double b, double m);

  double sample(RngStream& rng) const override { return quantile(rng.uniform01()); }
  double mean() const override { return m_; }
  std::string describe() const override;

  /// Inverse CDF at u in [0, 1].
  double quantile(double u) const;
  double pdf(double x) const;
  /// Differential entropy -(lambda0 + lambda1 m).
  double entropy() const;

  double lower() const { return a_; }
  double upper() const { return b_; }
  double lambda0() const { return lambda0_; }
  double lambda1() const { return lambda1_; }
  bool is_uniform() const { return uniform_; }
  /// Interval narrower than 1e-6: all mass at the midpoint.
  bool is_degenerate() const { return degenerate_; }

  /// Admissible means are [a + delta, (a + b)/2 - delta], delta = 1e-6 (b - a).
  double min_mean() const;
  double max_mean() const;

  MaxEntropyStepDist with_mean(double m) const { return MaxEntropyStepDist(a_, b_, m); }

 private:
  double a_;
  double b_;
  double m_;
  double lambda0_ = 0.0;
  double lambda1_ = 0.0;
  bool uniform_ = false;
  bool degenerate_ = false;
};

/// Multiplies the mean by `up` on success and by `down` otherwise, clamps it to
/// the admissible range and re-solves the density.
MaxEntropyStepDist update_mean(const MaxEntropyStepDist& dist, bool success, double up = 1.001, double down = 0.999);

}  // namespace ddmut
