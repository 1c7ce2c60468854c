#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "ddmut/budget.hpp"
#include "ddmut/operators.hpp"
#include "ddmut/problem.hpp"
#include "ddmut/rng.hpp"
#include "ddmut/stepdist.hpp"
#include "ddmut/trace.hpp"
#include "ddmut/umda.hpp"

namespace ddmut {

struct RunRecord {
  std::vector<TraceRow> trace;
  Genome best;
  /// -infinity if nothing could be evaluated.
  double best_fitness = 0.0;
  std::int64_t iterations = 0;
  std::int64_t evaluations = 0;
  std::int64_t distance_evaluations = 0;
  bool reached_optimum = false;
  /// Set by the black-box distance-driven algorithm.
  std::optional<TransformParams> transform;
};

struct RunOptions {
  /// Stop as soon as the problem's known optimum is reached.
  bool stop_at_optimum = true;
  bool record_wall_time = false;
};

/// Uniform random genome.
Genome random_genome(const SearchSpace& space, RngStream& rng);

/// Elitist (1+lambda) EA: lambda offspring per iteration from `mutation`; the
/// best offspring (earliest on ties) replaces the parent when at least as good.
RunRecord run_one_plus_lambda_ea(const Problem& problem, MutationOperator& mutation, int lambda, Budget budget,
                                 RngStream& rng, const RunOptions& options = {});

/// (1+(lambda,lambda)) EA: lambda mutants, the best of them is recombined lambda
/// times with the parent by biased crossover (bias c); the best of all 2 lambda
/// samples replaces the parent when at least as good.
RunRecord run_one_plus_lambda_lambda_ea(const Problem& problem, MutationOperator& mutation, int lambda, double c,
                                        Budget budget, RngStream& rng, const RunOptions& options = {});

struct VelocityOptions {
  double initial = 1.0;
  double success_factor = 2.0;
  double failure_factor = 0.5;
};

/// RLS-ab: one uniformly chosen component per step, moved by its velocity.
RunRecord run_rls_ab(const Problem& problem, Budget budget, RngStream& rng, const VelocityOptions& velocity = {},
                     const RunOptions& options = {});

/// (1+lambda) EA-ab: each offspring moves Bin(n, 1/n) >= 1 components by their velocities.
RunRecord run_ea_ab(const Problem& problem, int lambda, Budget budget, RngStream& rng,
                    const VelocityOptions& velocity = {}, const RunOptions& options = {});

struct DdEaAbOptions {
  ChainConstants chain;
  UmdaConfig inner{100, 1000, 40000, std::nullopt};
  /// Inner optimizer used while estimating the transform; defaults to `inner`.
  std::optional<UmdaConfig> estimation_inner;
  /// Starting mean of the step distribution, clamped into its admissible range.
  double initial_mean = 0.02;
  double mean_up = 1.001;
  double mean_down = 0.999;
  /// Skips the estimation when given.
  std::optional<TransformParams> params;
};

/// dd-(1+1) EA-ab: one distance-driven offspring per iteration in transformed
/// step space with maximum-entropy step sizes. The mean grows on strict
/// improvement, shrinks on strict deterioration and stays on ties.
/// Estimates at up to five random anchors; propagates DegenerateMetric or the
/// last ScanFailure.
RunRecord run_dd_one_plus_one_ea_ab(const Problem& problem, std::shared_ptr<const Metric> metric, Budget budget,
                                    RngStream& rng, const DdEaAbOptions& dd = {}, const RunOptions& options = {});

/// UMDA as a standalone solver; one generation is one iteration.
RunRecord run_umda_solver(const Problem& problem, int mu, int lambda, Budget budget, RngStream& rng,
                          const RunOptions& options = {});

}  // namespace ddmut
