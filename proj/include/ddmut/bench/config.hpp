#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ddmut/algorithms.hpp"
#include "ddmut/problem.hpp"
#include "ddmut/problems.hpp"

namespace ddmut::bench {

/// Schema violation. what() carries "line L, column C: ..." when the location is known.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, int line = 0, int column = 0);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

enum class ProblemKind { onemax, ruggedness, sphere, ellipsoid, rastrigin, sharp_ridge };
enum class MetricKind { hamming, ruggedness, permuted_l2 };
enum class AlgorithmKind { one_plus_lambda_ea, one_plus_lambda_lambda_ea, rls_ab, ea_ab, dd_ea_ab, umda };
enum class MutationKind { classical, distance_driven };

std::string_view to_string(ProblemKind kind);
std::string_view to_string(MetricKind kind);
std::string_view to_string(AlgorithmKind kind);
std::string_view to_string(MutationKind kind);
const std::vector<std::string>& problem_kind_names();
const std::vector<std::string>& algorithm_kind_names();

struct ProblemSpec {
  ProblemKind kind = ProblemKind::onemax;
  std::size_t n = 0;
  /// Ruggedness block size.
  int v = 1;
  /// Integer problems only.
  int cardinality = 2;
  bool identity_permutation = false;
  /// Seeds the permutation and the optimum location of integer problems.
  std::uint64_t instance_seed = 0;
  std::optional<MetricKind> metric;
  std::string label;

  bool is_integer() const;
  /// Metric named in the config, or the natural one for the kind.
  MetricKind effective_metric() const;
};

struct AlgorithmSpec {
  AlgorithmKind kind = AlgorithmKind::one_plus_lambda_ea;
  MutationKind mutation = MutationKind::classical;
  int lambda = 1;
  /// (1+(lambda,lambda)) EA bias; 1/lambda when unset.
  std::optional<double> crossover_bias;
  /// Standard bit mutation rate; 1/n for (1+lambda), lambda/n for (1+(lambda,lambda)) when unset.
  std::optional<double> mutation_rate;
  /// Standalone UMDA.
  int mu = 50;
  /// Inner optimizer of distance-driven mutation.
  UmdaConfig inner{50, 100, 1000, std::nullopt};
  VelocityOptions velocity;
  double initial_mean = 0.02;
  double mean_up = 1.001;
  double mean_down = 0.999;
  ChainConstants chain;
  std::string label;
};

struct BudgetSpec {
  std::optional<std::int64_t> max_evaluations;
  std::optional<std::int64_t> max_iterations;

  Budget make() const { return Budget(max_evaluations, max_iterations); }
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::vector<ProblemSpec> problems;
  std::vector<AlgorithmSpec> algorithms;
  int repetitions = 1;
  std::uint64_t master_seed = 0;
  BudgetSpec budget;
  std::filesystem::path output = "results";
  bool record_wall_time = false;
  bool stop_at_optimum = true;
};

/// Parses and validates a YAML document. Throws ConfigError.
ExperimentConfig parse_config(const std::string& text);
/// Reads `path` and parses it; a relative `output` is kept as written.
ExperimentConfig load_config(const std::filesystem::path& path);

/// The problem instance described by `spec`.
std::shared_ptr<Problem> build_problem(const ProblemSpec& spec);
/// The metric for `spec`, sharing the instance's permutation where relevant.
std::shared_ptr<Metric> build_metric(const ProblemSpec& spec);

}  // namespace ddmut::bench
