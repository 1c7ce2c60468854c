#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace ddmut::bench {

class AggregateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AggregateOutputs {
  std::filesystem::path targets;
  std::filesystem::path checkpoints;
  std::filesystem::path pvalues;
};

/// Reads manifest.json and the raw traces of a run directory and writes
/// targets.csv, checkpoints.csv and pvalues.csv next to the manifest.
/// Output depends only on the raw files, so re-aggregation is byte-identical.
AggregateOutputs aggregate_directory(const std::filesystem::path& dir);

/// At most `max_levels` fitness targets taken from the sorted distinct values,
/// always keeping the smallest and the largest.
std::vector<double> target_levels(std::vector<double> observed, std::size_t max_levels = 101);

}  // namespace ddmut::bench
