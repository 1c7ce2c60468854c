#include "ddmut/trace.hpp"

namespace ddmut {

std::int64_t next_checkpoint(std::int64_t evaluations) {
  std::int64_t decade = 1;
  while (true) {
    for (std::int64_t m : {1, 2, 5}) {
      if (m * decade > evaluations) return m * decade;
    }
    decade *= 10;
  }
}

std::vector<std::int64_t> checkpoint_grid(std::int64_t limit) {
  std::vector<std::int64_t> grid;
  for (std::int64_t g = 1; g <= limit; g = next_checkpoint(g)) grid.push_back(g);
  if (limit >= 1 && grid.back() != limit) grid.push_back(limit);
  return grid;
}

TraceRecorder::TraceRecorder(bool wall_clock) : wall_clock_(wall_clock), start_(std::chrono::steady_clock::now()) {}

void TraceRecorder::push(std::int64_t iteration, std::int64_t evaluations, double best_fitness,
                         std::optional<double> mean_param) {
  TraceRow row{iteration, evaluations, best_fitness, mean_param, std::nullopt};
  if (wall_clock_) {
    row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }
  rows_.push_back(row);
  next_checkpoint_ = next_checkpoint(evaluations);
}

void TraceRecorder::observe(std::int64_t iteration, std::int64_t evaluations, double best_fitness,
                            std::optional<double> mean_param) {
  const bool improved = rows_.empty() || best_fitness > rows_.back().best_fitness;
  if (improved || evaluations >= next_checkpoint_) push(iteration, evaluations, best_fitness, mean_param);
}

void TraceRecorder::finish(std::int64_t iteration, std::int64_t evaluations, double best_fitness,
                           std::optional<double> mean_param) {
  if (!rows_.empty() && rows_.back().iteration == iteration && rows_.back().evaluations == evaluations &&
      rows_.back().best_fitness == best_fitness) {
    return;
  }
  push(iteration, evaluations, best_fitness, mean_param);
}

}  // namespace ddmut
