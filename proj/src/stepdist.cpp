#include "ddmut/stepdist.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>

namespace ddmut {

BinomialStepDist::BinomialStepDist(int trials, double p, bool at_least_one)
    : trials_(trials), p_(p), at_least_one_(at_least_one) {
  if (trials < 1) throw std::invalid_argument("binomial step distribution needs >= 1 trial");
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("binomial success probability must be in (0, 1]");
}

double BinomialStepDist::sample(RngStream& rng) const {
  int s = rng.binomial(trials_, p_);
  while (at_least_one_ && s == 0) s = rng.binomial(trials_, p_);
  return s;
}

double BinomialStepDist::mean() const {
  const double np = trials_ * p_;
  if (!at_least_one_) return np;
  return np / -std::expm1(trials_ * std::log1p(-p_));
}

std::string BinomialStepDist::describe() const {
  std::ostringstream out;
  out << "Bin(" << trials_ << ", " << p_ << ")" << (at_least_one_ ? " | >= 1" : "");
  return out.str();
}

// ---------------------------------------------------------------------------

double transform_distance(double d, double gamma) {
  const double c = gamma * d;
  return -std::expm1(-c * c);
}

void ChainConstants::validate() const {
  if (k < 1) throw std::invalid_argument("chain length k must be >= 1");
  if (!(grow > 1.0)) throw std::invalid_argument("growth factor must be > 1");
  if (!(shrink > 1.0)) throw std::invalid_argument("shrink divisor must be > 1");
  if (scan_steps < 1) throw std::invalid_argument("scan needs >= 1 step");
  if (!(scan_step > 0.0)) throw std::invalid_argument("scan step must be positive");
}

TransformParams transform_params_from_extremes(double zeta_min, double zeta_max, const ChainConstants& constants) {
  if (!(zeta_min > 0.0)) throw DegenerateMetric("smallest estimated distance is not positive");
  if (!(zeta_max > zeta_min)) throw DegenerateMetric("estimated distance extremes coincide");
  const double ratio2 = (zeta_max / zeta_min) * (zeta_max / zeta_min);

  for (int j = 1; j <= constants.scan_steps; ++j) {
    const double eps1 = constants.scan_step * j;
    // -ln(eps2); kept in log form because eps2 underflows for large ratios.
    const double neg_log_eps2 = -ratio2 * std::log1p(-eps1);
    const double eps2 = std::max(std::exp(-neg_log_eps2), std::numeric_limits<double>::min());
    if (eps2 > eps1) continue;
    const double gamma_lo = std::sqrt(neg_log_eps2) / zeta_max;
    const double gamma_hi = std::sqrt(-std::log1p(-eps1)) / zeta_min;
    return {eps1, eps2, 0.5 * (gamma_lo + gamma_hi), zeta_min, zeta_max};
  }
  std::ostringstream msg;
  msg << "no eps1 <= " << constants.scan_step * constants.scan_steps << " admits eps2 <= eps1 (zeta_max/zeta_min = "
      << zeta_max / zeta_min << ")";
  throw ScanFailure(msg.str());
}

namespace {

Genome random_genome(const SearchSpace& space, RngStream& rng) {
  Genome g(space);
  for (std::size_t i = 0; i < space.size(); ++i) g.set(i, rng.uniform_int(0, space.cardinality(i) - 1));
  return g;
}

constexpr int kStartAttempts = 1000;

}  // namespace

namespace {

// Ascending and descending chains around the anchor; params are left unset.
// Distance evaluations are counted into `est` even when this throws.
void build_chains(const Metric& metric, const SearchSpace& space, const Genome& anchor, const ChainConstants& constants,
                  const UmdaConfig& inner, RngStream& rng, TransformEstimate& est) {
  auto dist = [&](const Genome& z) {
    ++est.distance_evaluations;
    return metric.distance(anchor, z);
  };

  // z_0: uniform over points at positive distance from the anchor.
  double d0 = 0.0;
  for (int attempt = 0; attempt < kStartAttempts && d0 <= 0.0; ++attempt) d0 = dist(random_genome(space, rng));
  if (d0 <= 0.0) throw DegenerateMetric("no point at positive distance from the anchor found");
  est.ascending.push_back(d0);
  est.descending.push_back(d0);

  for (int i = 1; i <= constants.k; ++i) {
    const double prev = est.ascending.back();
    const double target = constants.grow * prev;
    Objective f1 = [&](const Genome& z) { return dist(z) - target; };
    StopPredicate reached = [](const Genome&, double v) { return v >= 0.0; };
    const UmdaResult r = umda_run(f1, space, inner, rng, reached);
    if (!r.evaluated) break;
    const double d = dist(r.best);
    if (!(d > prev)) break;
    est.ascending.push_back(d);
  }

  for (int i = 1; i <= constants.k; ++i) {
    const double prev = est.descending.back();
    const double target = prev / constants.shrink;
    Objective f2 = [&](const Genome& z) {
      const double d = dist(z);
      return d > 0.0 ? target - d : -std::numeric_limits<double>::infinity();
    };
    StopPredicate reached = [target](const Genome&, double v) { return v >= 0.0 && v < target; };
    const UmdaResult r = umda_run(f2, space, inner, rng, reached);
    if (!r.evaluated || !std::isfinite(r.value)) break;
    const double d = dist(r.best);
    if (!(d > 0.0 && d < prev)) break;
    est.descending.push_back(d);
  }

}

}  // namespace

TransformEstimate estimate_transform_params(const Metric& metric, const SearchSpace& space, const Genome& anchor,
                                            const ChainConstants& constants, const UmdaConfig& inner, RngStream& rng) {
  constants.validate();
  inner.validate();
  TransformEstimate est;
  build_chains(metric, space, anchor, constants, inner, rng, est);
  est.params = transform_params_from_extremes(est.descending.back(), est.ascending.back(), constants);
  return est;
}

TransformEstimate estimate_transform_params_random_anchor(const Metric& metric, const SearchSpace& space,
                                                          const ChainConstants& constants, const UmdaConfig& inner,
                                                          RngStream& rng, int attempts) {
  if (attempts < 1) throw std::invalid_argument("attempts must be positive");
  constants.validate();
  inner.validate();
  TransformEstimate est;
  for (int attempt = 1;; ++attempt) {
    est.ascending.clear();
    est.descending.clear();
    try {
      build_chains(metric, space, random_genome(space, rng), constants, inner, rng, est);
      est.params = transform_params_from_extremes(est.descending.back(), est.ascending.back(), constants);
      return est;
    } catch (const DegenerateMetric&) {
      if (attempt == attempts) throw;
    } catch (const ScanFailure&) {
      if (attempt == attempts) throw;
    }
  }
}

// ---------------------------------------------------------------------------

namespace {

// Mean of the density proportional to exp(u t) on [0, 1].
double unit_mean(double u) {
  if (std::abs(u) < 1e-4) return 0.5 + u / 12.0 - u * u * u / 720.0;
  return -1.0 / std::expm1(-u) - 1.0 / u;
}

constexpr int kMaxBisections = 200;
constexpr double kUniformThreshold = 1e-12;
constexpr double kDegenerateWidth = 1e-6;
constexpr double kClampFraction = 1e-6;

}  // namespace

double maxent_mean(double lambda1, double a, double b) { return a + (b - a) * unit_mean(lambda1 * (b - a)); }

double combined_residual(double lambda1, double m, double a, double b) {
  const double eb = std::exp(lambda1 * b);
  const double ea = std::exp(lambda1 * a);
  return eb * (lambda1 * b - 1.0) - ea * (lambda1 * a - 1.0) - lambda1 * m * (eb - ea);
}

double normalized_residual(double lambda1, double m, double a, double b) { return maxent_mean(lambda1, a, b) - m; }

double solve_lambda1(double m, double a, double b, double K, double tol) {
  if (!(a < b)) throw std::invalid_argument("interval must satisfy a < b");
  const double mid = 0.5 * (a + b);
  if (!(m > a && m < mid)) {
    std::ostringstream msg;
    msg << "mean " << m << " outside (" << a << ", " << mid << ")";
    throw MeanOutOfRange(msg.str());
  }
  if (K <= 0.0) K = std::max(1e6, 10.0 / (m - a));

  double lo = -K;
  double hi = 0.0;
  // maxent_mean increases with lambda1, from a at -inf to (a+b)/2 at 0.
  if (!(normalized_residual(lo, m, a, b) < 0.0)) throw NoSignChange("residual has no sign change on (-K, 0)");
  for (int it = 0; it < kMaxBisections && hi - lo > tol; ++it) {
    const double mid_lambda = 0.5 * (lo + hi);
    if (normalized_residual(mid_lambda, m, a, b) < 0.0) {
      lo = mid_lambda;
    } else {
      hi = mid_lambda;
    }
  }
  return 0.5 * (lo + hi);
}

double solve_lambda0(double lambda1, double a, double b) {
  if (lambda1 == 0.0) throw std::invalid_argument("lambda1 = 0 is the uniform case");
  return std::log(lambda1 / std::expm1(lambda1 * (b - a))) - lambda1 * a;
}

MaxEntropyStepDist::MaxEntropyStepDist(double a, double b, double m) : a_(a), b_(b), m_(m) {
  if (!(a < b) && !(a == b)) throw std::invalid_argument("interval must satisfy a <= b");
  if (b - a < kDegenerateWidth) {
    degenerate_ = true;
    m_ = 0.5 * (a + b);
    std::clog << "warning: step interval [" << a << ", " << b << "] is degenerate; using its midpoint\n";
    return;
  }
  const double mid = 0.5 * (a + b);
  if (m == mid) {
    uniform_ = true;
  } else {
    lambda1_ = solve_lambda1(m, a, b);
    uniform_ = std::abs(lambda1_) < kUniformThreshold;
  }
  if (uniform_) {
    lambda1_ = 0.0;
    lambda0_ = -std::log(b - a);
  } else {
    lambda0_ = solve_lambda0(lambda1_, a, b);
  }
}

double MaxEntropyStepDist::quantile(double u) const {
  if (degenerate_) return m_;
  if (uniform_) return a_ + u * (b_ - a_);
  const double s = a_ + std::log1p(u * std::expm1(lambda1_ * (b_ - a_))) / lambda1_;
  return std::clamp(s, a_, b_);
}

double MaxEntropyStepDist::pdf(double x) const {
  if (x < a_ || x > b_) return 0.0;
  if (degenerate_) return std::numeric_limits<double>::infinity();
  return std::exp(lambda0_ + lambda1_ * x);
}

double MaxEntropyStepDist::entropy() const {
  if (degenerate_) return -std::numeric_limits<double>::infinity();
  return -(lambda0_ + lambda1_ * m_);
}

double MaxEntropyStepDist::min_mean() const { return a_ + kClampFraction * (b_ - a_); }
double MaxEntropyStepDist::max_mean() const { return 0.5 * (a_ + b_) - kClampFraction * (b_ - a_); }

std::string MaxEntropyStepDist::describe() const {
  std::ostringstream out;
  out << "MaxEnt[" << a_ << ", " << b_ << "](m=" << m_ << ", l0=" << lambda0_ << ", l1=" << lambda1_ << ")";
  return out.str();
}

MaxEntropyStepDist update_mean(const MaxEntropyStepDist& dist, bool success, double up, double down) {
  if (!(up > 1.0 && down < 1.0 && down > 0.0)) throw std::invalid_argument("mean factors must satisfy up > 1 > down > 0");
  if (dist.is_degenerate()) return dist;
  const double m = std::clamp(dist.mean() * (success ? up : down), dist.min_mean(), dist.max_mean());
  return dist.with_mean(m);
}

}  // namespace ddmut
