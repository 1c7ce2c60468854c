#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>

namespace ddmut {

/// Raised when an evaluation is requested after the fitness cap was reached.
class BudgetExhausted : public std::runtime_error {
 public:
  BudgetExhausted() : std::runtime_error("fitness evaluation budget exhausted") {}
};

/// Evaluation and iteration caps plus counters for one run. Counters only grow.
/// Distance evaluations are tracked for auditing and never consume the fitness cap.
class Budget {
 public:
  Budget() = default;
  Budget(std::optional<std::int64_t> max_fitness_evals, std::optional<std::int64_t> max_iterations);

  static Budget evaluations(std::int64_t max_fitness_evals) { return Budget(max_fitness_evals, std::nullopt); }
  static Budget iterations(std::int64_t max_iterations) { return Budget(std::nullopt, max_iterations); }
  static Budget unlimited() { return Budget(); }

  std::optional<std::int64_t> max_fitness_evals() const { return max_evals_; }
  std::optional<std::int64_t> max_iterations() const { return max_iters_; }

  std::int64_t fitness_evals() const { return evals_; }
  std::int64_t distance_evals() const { return dist_evals_; }
  std::int64_t iterations() const { return iters_; }

  bool fitness_exhausted() const { return max_evals_ && evals_ >= *max_evals_; }
  bool iterations_exhausted() const { return max_iters_ && iters_ >= *max_iters_; }
  bool exhausted() const { return fitness_exhausted() || iterations_exhausted(); }

  /// Throws BudgetExhausted if the fitness cap is already reached.
  void charge_fitness();
  void charge_distance(std::int64_t count) { dist_evals_ += count; }
  void next_iteration() { ++iters_; }

 private:
  std::optional<std::int64_t> max_evals_;
  std::optional<std::int64_t> max_iters_;
  std::int64_t evals_ = 0;
  std::int64_t dist_evals_ = 0;
  std::int64_t iters_ = 0;
};

}  // namespace ddmut
