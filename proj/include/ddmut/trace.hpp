#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

namespace ddmut {

struct TraceRow {
  std::int64_t iteration = 0;
  std::int64_t evaluations = 0;
  double best_fitness = 0.0;
  std::optional<double> mean_param;
  std::optional<double> wall_ms;

  bool operator==(const TraceRow&) const = default;
};

/// Geometric grid {1, 2, 5, 10, 20, 50, ...} up to `limit`, plus `limit` itself.
std::vector<std::int64_t> checkpoint_grid(std::int64_t limit);

/// Smallest grid point of {1, 2, 5, 10, ...} strictly greater than `evaluations`.
std::int64_t next_checkpoint(std::int64_t evaluations);

/// Collects trace rows: one per best-so-far improvement, one whenever the
/// evaluation count passes a checkpoint of the geometric grid, and a final row.
class TraceRecorder {
 public:
  explicit TraceRecorder(bool wall_clock = false);

  void observe(std::int64_t iteration, std::int64_t evaluations, double best_fitness,
               std::optional<double> mean_param = std::nullopt);
  /// Adds a closing row unless the last row already describes this state.
  void finish(std::int64_t iteration, std::int64_t evaluations, double best_fitness,
              std::optional<double> mean_param = std::nullopt);

  const std::vector<TraceRow>& rows() const { return rows_; }
  std::vector<TraceRow> take() { return std::move(rows_); }

 private:
  void push(std::int64_t iteration, std::int64_t evaluations, double best_fitness, std::optional<double> mean_param);

  bool wall_clock_;
  std::chrono::steady_clock::time_point start_;
  std::int64_t next_checkpoint_ = 1;
  std::vector<TraceRow> rows_;
};

}  // namespace ddmut
