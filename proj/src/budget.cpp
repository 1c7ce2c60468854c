#include "ddmut/budget.hpp"

namespace ddmut {

Budget::Budget(std::optional<std::int64_t> max_fitness_evals, std::optional<std::int64_t> max_iterations)
    : max_evals_(max_fitness_evals), max_iters_(max_iterations) {
  if (max_evals_ && *max_evals_ < 0) throw std::invalid_argument("negative evaluation cap");
  if (max_iters_ && *max_iters_ < 0) throw std::invalid_argument("negative iteration cap");
}

void Budget::charge_fitness() {
  if (fitness_exhausted()) throw BudgetExhausted();
  ++evals_;
}

}  // namespace ddmut
