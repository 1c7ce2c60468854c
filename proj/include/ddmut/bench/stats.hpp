#pragma once

#include <span>
#include <vector>

namespace ddmut::bench {

/// Median; +infinity entries count as the largest values.
double median(std::span<const double> values);
double mean(std::span<const double> values);
/// Sample standard deviation (n - 1); 0 for fewer than two values.
double stddev(std::span<const double> values);
double stderr_of_mean(std::span<const double> values);

struct RankSumResult {
  /// Mann-Whitney U of the first sample.
  double u = 0.0;
  /// Two-sided p-value, normal approximation with tie and continuity corrections.
  double p = 1.0;
};

/// Two-sided Wilcoxon rank-sum test. Infinite values tie with each other, so
/// censored observations can be passed as +infinity. p = 1 when every value ties.
RankSumResult rank_sum_test(std::span<const double> a, std::span<const double> b);

}  // namespace ddmut::bench
