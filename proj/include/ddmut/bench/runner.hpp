#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ddmut/bench/config.hpp"

namespace ddmut::bench {

struct CellResult {
  std::size_t problem = 0;
  std::size_t algorithm = 0;
  int run = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  std::int64_t iterations = 0;
  std::int64_t evaluations = 0;
  std::int64_t distance_evaluations = 0;
  double best_fitness = 0.0;
  bool reached_optimum = false;
  /// Relative to the output directory.
  std::string trace_path;
};

/// Transform parameters of a dd-(1+1) EA-ab column, estimated once per problem.
struct TransformResult {
  std::size_t problem = 0;
  std::size_t algorithm = 0;
  std::optional<TransformParams> params;
  std::string error;
};

struct ExperimentResult {
  std::vector<CellResult> cells;
  std::vector<TransformResult> transforms;
  std::size_t failed() const;
};

std::uint64_t run_seed(const ExperimentConfig& config, std::size_t problem, std::size_t algorithm, int run);

/// Worker count from DDMUT_WORKERS, else the hardware concurrency (at least 1).
unsigned default_workers();

/// Executes every (problem x algorithm x repetition) cell and writes
/// raw/<problem>/<algorithm>/run_<k>.csv plus manifest.json into `out_dir`.
/// Failing cells are recorded in the manifest; the others are unaffected.
ExperimentResult run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                                unsigned workers = default_workers());

}  // namespace ddmut::bench
