#include "ddmut/algorithms.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace ddmut {

Genome random_genome(const SearchSpace& space, RngStream& rng) {
  Genome g(space);
  for (std::size_t i = 0; i < space.size(); ++i) g.set(i, rng.uniform_int(0, space.cardinality(i) - 1));
  return g;
}

namespace {

// Book-keeping shared by the single-parent algorithms.
class Run {
 public:
  Run(const Problem& problem, Budget budget, const RunOptions& options)
      : problem_(problem), budget_(budget), options_(options), recorder_(options.record_wall_time) {
    record_.best_fitness = -std::numeric_limits<double>::infinity();
  }

  Budget& budget() { return budget_; }

  /// Evaluates x; std::nullopt when the fitness cap is reached.
  std::optional<double> evaluate(const Genome& x) {
    if (budget_.fitness_exhausted()) return std::nullopt;
    return evaluate_counted(problem_, x, budget_);
  }

  bool at_optimum(double fitness) const {
    const auto opt = problem_.optimum();
    return options_.stop_at_optimum && opt && fitness >= *opt;
  }

  bool done() const { return budget_.exhausted() || (evaluated_ && at_optimum(record_.best_fitness)); }

  void set_best(const Genome& x, double fitness) {
    record_.best = x;
    record_.best_fitness = fitness;
    evaluated_ = true;
  }

  void observe(std::optional<double> mean = std::nullopt) {
    recorder_.observe(budget_.iterations(), budget_.fitness_evals(), record_.best_fitness, mean);
  }

  RunRecord finish(std::optional<double> mean = std::nullopt) {
    if (evaluated_) recorder_.finish(budget_.iterations(), budget_.fitness_evals(), record_.best_fitness, mean);
    record_.trace = recorder_.take();
    record_.iterations = budget_.iterations();
    record_.evaluations = budget_.fitness_evals();
    record_.distance_evaluations = budget_.distance_evals();
    const auto opt = problem_.optimum();
    record_.reached_optimum = evaluated_ && opt && record_.best_fitness >= *opt;
    return std::move(record_);
  }

  RunRecord& record() { return record_; }
  bool evaluated() const { return evaluated_; }

 private:
  const Problem& problem_;
  Budget budget_;
  RunOptions options_;
  TraceRecorder recorder_;
  RunRecord record_;
  bool evaluated_ = false;
};

void require_positive_lambda(int lambda) {
  if (lambda < 1) throw std::invalid_argument("lambda must be >= 1");
}

// Initializes `run` with a uniform random parent; false if it could not be evaluated.
bool initialize(Run& run, const Problem& problem, RngStream& rng, std::optional<double> mean = std::nullopt) {
  Genome x = random_genome(problem.space(), rng);
  run.record().best = x;
  const auto fx = run.evaluate(x);
  if (!fx) return false;
  run.set_best(x, *fx);
  run.observe(mean);
  return true;
}

}  // namespace

RunRecord run_one_plus_lambda_ea(const Problem& problem, MutationOperator& mutation, int lambda, Budget budget,
                                 RngStream& rng, const RunOptions& options) {
  require_positive_lambda(lambda);
  Run run(problem, budget, options);
  if (!initialize(run, problem, rng)) return run.finish();
  const std::int64_t dist_before = mutation.distance_evaluations();

  while (!run.done()) {
    const Genome parent = run.record().best;
    const double parent_fitness = run.record().best_fitness;
    mutation.begin_iteration(parent, rng);
    std::optional<Genome> best;
    double best_fitness = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < lambda; ++k) {
      if (run.budget().fitness_exhausted()) break;
      Genome y = mutation.mutate(parent, rng);
      const double fy = *run.evaluate(y);
      if (!best || fy > best_fitness) {
        best = std::move(y);
        best_fitness = fy;
      }
    }
    if (best && best_fitness >= parent_fitness) run.set_best(*best, best_fitness);
    run.budget().next_iteration();
    run.observe(mutation.mean_param());
  }
  run.budget().charge_distance(mutation.distance_evaluations() - dist_before);
  return run.finish(mutation.mean_param());
}

RunRecord run_one_plus_lambda_lambda_ea(const Problem& problem, MutationOperator& mutation, int lambda, double c,
                                        Budget budget, RngStream& rng, const RunOptions& options) {
  require_positive_lambda(lambda);
  if (!(c >= 0.0 && c <= 1.0)) throw std::invalid_argument("crossover bias must be in [0, 1]");
  Run run(problem, budget, options);
  if (!initialize(run, problem, rng)) return run.finish();
  const std::int64_t dist_before = mutation.distance_evaluations();

  while (!run.done()) {
    const Genome parent = run.record().best;
    const double parent_fitness = run.record().best_fitness;
    mutation.begin_iteration(parent, rng);

    std::optional<Genome> best_mutant;
    double best_mutant_fitness = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < lambda; ++k) {
      if (run.budget().fitness_exhausted()) break;
      Genome y = mutation.mutate(parent, rng);
      const double fy = *run.evaluate(y);
      if (!best_mutant || fy > best_mutant_fitness) {
        best_mutant = std::move(y);
        best_mutant_fitness = fy;
      }
    }

    std::optional<Genome> best = best_mutant;
    double best_fitness = best_mutant_fitness;
    if (best_mutant) {
      for (int k = 0; k < lambda; ++k) {
        if (run.budget().fitness_exhausted()) break;
        Genome child = biased_crossover(parent, *best_mutant, c, rng);
        const double fc = *run.evaluate(child);
        if (fc > best_fitness) {
          best = std::move(child);
          best_fitness = fc;
        }
      }
    }
    if (best && best_fitness >= parent_fitness) run.set_best(*best, best_fitness);
    run.budget().next_iteration();
    run.observe(mutation.mean_param());
  }
  run.budget().charge_distance(mutation.distance_evaluations() - dist_before);
  return run.finish(mutation.mean_param());
}

RunRecord run_rls_ab(const Problem& problem, Budget budget, RngStream& rng, const VelocityOptions& velocity,
                     const RunOptions& options) {
  Run run(problem, budget, options);
  if (!initialize(run, problem, rng)) return run.finish();
  VelocityState state = VelocityState::for_space(problem.space(), velocity.initial, velocity.success_factor,
                                                 velocity.failure_factor);
  const std::size_t n = problem.dimension();

  while (!run.done()) {
    const std::size_t position = rng.index(n);
    const std::span<const std::size_t> positions(&position, 1);
    const Genome& parent = run.record().best;
    Genome y = velocity_mutate(parent, state, positions, rng);
    const double fy = *run.evaluate(y);
    const double parent_fitness = run.record().best_fitness;
    state = velocity_update(std::move(state), positions, fy > parent_fitness);
    if (fy >= parent_fitness) run.set_best(y, fy);
    run.budget().next_iteration();
    run.observe();
  }
  return run.finish();
}

RunRecord run_ea_ab(const Problem& problem, int lambda, Budget budget, RngStream& rng, const VelocityOptions& velocity,
                    const RunOptions& options) {
  require_positive_lambda(lambda);
  Run run(problem, budget, options);
  if (!initialize(run, problem, rng)) return run.finish();
  VelocityState state = VelocityState::for_space(problem.space(), velocity.initial, velocity.success_factor,
                                                 velocity.failure_factor);
  const int n = static_cast<int>(problem.dimension());
  const double rate = 1.0 / n;

  struct Offspring {
    std::vector<std::size_t> positions;
    double fitness;
  };
  std::vector<Offspring> offspring;

  while (!run.done()) {
    const Genome parent = run.record().best;
    const double parent_fitness = run.record().best_fitness;
    offspring.clear();
    std::optional<Genome> best;
    double best_fitness = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < lambda; ++k) {
      if (run.budget().fitness_exhausted()) break;
      const int count = sample_mutation_strength(n, rate, rng);
      std::vector<std::size_t> positions = rng.sample_without_replacement(static_cast<std::size_t>(n), count);
      Genome y = velocity_mutate(parent, state, positions, rng);
      const double fy = *run.evaluate(y);
      offspring.push_back({std::move(positions), fy});
      if (!best || fy > best_fitness) {
        best = std::move(y);
        best_fitness = fy;
      }
    }
    for (const Offspring& o : offspring) state = velocity_update(std::move(state), o.positions, o.fitness > parent_fitness);
    if (best && best_fitness >= parent_fitness) run.set_best(*best, best_fitness);
    run.budget().next_iteration();
    run.observe();
  }
  return run.finish();
}

RunRecord run_dd_one_plus_one_ea_ab(const Problem& problem, std::shared_ptr<const Metric> metric, Budget budget,
                                    RngStream& rng, const DdEaAbOptions& dd, const RunOptions& options) {
  if (!metric) throw std::invalid_argument("dd-(1+1) EA-ab needs a metric");
  Run run(problem, budget, options);
  RngStream estimation_rng = rng.child(0x65737469ULL);

  TransformParams params;
  if (dd.params) {
    params = *dd.params;
  } else {
    const TransformEstimate est = estimate_transform_params_random_anchor(
        *metric, problem.space(), dd.chain, dd.estimation_inner.value_or(dd.inner), estimation_rng);
    params = est.params;
    run.budget().charge_distance(est.distance_evaluations);
  }
  run.record().transform = params;

  const double lo = params.eps1;
  const double hi = 1.0 - params.eps2;
  MaxEntropyStepDist steps = MaxEntropyStepDist(lo, hi, 0.5 * (lo + hi));
  steps = steps.with_mean(std::clamp(dd.initial_mean, steps.min_mean(), steps.max_mean()));

  DdMutation mutation(DdMutationConfig{std::move(metric), std::make_shared<MaxEntropyStepDist>(steps), dd.inner,
                                       params.gamma});
  if (!initialize(run, problem, rng, steps.mean())) return run.finish(steps.mean());

  while (!run.done()) {
    const Genome parent = run.record().best;
    const double parent_fitness = run.record().best_fitness;
    Genome y = mutation.mutate(parent, rng);
    const double fy = *run.evaluate(y);
    if (fy != parent_fitness) {
      steps = update_mean(steps, fy > parent_fitness, dd.mean_up, dd.mean_down);
      mutation.set_steps(std::make_shared<MaxEntropyStepDist>(steps));
    }
    if (fy >= parent_fitness) run.set_best(y, fy);
    run.budget().next_iteration();
    run.observe(steps.mean());
  }
  run.budget().charge_distance(mutation.distance_evaluations());
  return run.finish(steps.mean());
}

RunRecord run_umda_solver(const Problem& problem, int mu, int lambda, Budget budget, RngStream& rng,
                          const RunOptions& options) {
  Run run(problem, budget, options);
  std::int64_t evals = std::numeric_limits<std::int64_t>::max();
  if (budget.max_fitness_evals()) evals = *budget.max_fitness_evals();
  if (budget.max_iterations()) evals = std::min(evals, *budget.max_iterations() * static_cast<std::int64_t>(lambda));
  const UmdaConfig config{mu, lambda, evals, std::nullopt};

  Objective objective = [&](const Genome& g) { return *run.evaluate(g); };
  StopPredicate stop;
  if (options.stop_at_optimum && problem.optimum()) {
    const double opt = *problem.optimum();
    stop = [opt](const Genome&, double v) { return v >= opt; };
  }
  GenerationObserver observer = [&](const MarginalModel&, const UmdaResult& r) {
    if (r.evaluated) run.set_best(r.best, r.value);
    run.budget().next_iteration();
    run.observe();
  };
  UmdaResult r = umda_run(objective, problem.space(), config, rng, stop, observer);
  if (r.evaluated) {
    run.set_best(r.best, r.value);
  } else {
    run.record().best = std::move(r.best);
  }
  return run.finish();
}

}  // namespace ddmut
