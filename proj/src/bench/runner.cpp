#include "ddmut/bench/runner.hpp"

#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <string>
#include <thread>

#include "ddmut/bench/csv.hpp"

namespace ddmut::bench {

namespace {

using nlohmann::ordered_json;

constexpr std::uint64_t kEstimationTag = 0x65737469ULL;

struct Instance {
  std::shared_ptr<Problem> problem;
  std::shared_ptr<Metric> metric;
};

std::shared_ptr<const StepSizeDistribution> binomial_steps(const AlgorithmSpec& a, std::size_t n) {
  const double p = a.mutation_rate.value_or(1.0 / static_cast<double>(n));
  return std::make_shared<BinomialStepDist>(static_cast<int>(n), p, true);
}

RunRecord run_cell(const ExperimentConfig& config, const Instance& inst, const AlgorithmSpec& a,
                   const std::optional<TransformParams>& transform, std::uint64_t seed) {
  const Problem& problem = *inst.problem;
  const std::size_t n = problem.dimension();
  const double dim = static_cast<double>(n);
  RngStream rng(seed);
  const RunOptions options{config.stop_at_optimum, config.record_wall_time};
  const Budget budget = config.budget.make();
  const bool dd = a.mutation == MutationKind::distance_driven;

  switch (a.kind) {
    case AlgorithmKind::one_plus_lambda_ea: {
      if (dd) {
        DdMutation m({inst.metric, binomial_steps(a, n), a.inner, std::nullopt});
        return run_one_plus_lambda_ea(problem, m, a.lambda, budget, rng, options);
      }
      StandardBitMutation m(a.mutation_rate.value_or(1.0 / dim), false);
      return run_one_plus_lambda_ea(problem, m, a.lambda, budget, rng, options);
    }
    case AlgorithmKind::one_plus_lambda_lambda_ea: {
      const double c = a.crossover_bias.value_or(1.0 / a.lambda);
      if (dd) {
        DdMutation m({inst.metric, binomial_steps(a, n), a.inner, std::nullopt});
        return run_one_plus_lambda_lambda_ea(problem, m, a.lambda, c, budget, rng, options);
      }
      StandardBitMutation m(a.mutation_rate.value_or(std::min(1.0, a.lambda / dim)), true);
      return run_one_plus_lambda_lambda_ea(problem, m, a.lambda, c, budget, rng, options);
    }
    case AlgorithmKind::rls_ab:
      return run_rls_ab(problem, budget, rng, a.velocity, options);
    case AlgorithmKind::ea_ab:
      return run_ea_ab(problem, a.lambda, budget, rng, a.velocity, options);
    case AlgorithmKind::dd_ea_ab: {
      DdEaAbOptions dd_options;
      dd_options.chain = a.chain;
      dd_options.inner = a.inner;
      dd_options.initial_mean = a.initial_mean;
      dd_options.mean_up = a.mean_up;
      dd_options.mean_down = a.mean_down;
      dd_options.params = transform;
      return run_dd_one_plus_one_ea_ab(problem, inst.metric, budget, rng, dd_options, options);
    }
    case AlgorithmKind::umda:
      return run_umda_solver(problem, a.mu, a.lambda, budget, rng, options);
  }
  throw std::logic_error("unhandled algorithm kind");
}

ordered_json number_or_null(double x) { return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr); }

template <typename T>
ordered_json optional_json(const std::optional<T>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json manifest_json(const ExperimentConfig& config, const std::vector<Instance>& instances,
                           const ExperimentResult& result) {
  ordered_json m;
  m["format"] = "ddmut-run/1";
  m["name"] = config.name;
  m["master_seed"] = config.master_seed;
  m["repetitions"] = config.repetitions;
  m["budget"] = {{"max_evaluations", optional_json(config.budget.max_evaluations)},
                 {"max_iterations", optional_json(config.budget.max_iterations)}};
  m["stop_at_optimum"] = config.stop_at_optimum;

  ordered_json problems = ordered_json::array();
  for (std::size_t i = 0; i < config.problems.size(); ++i) {
    const ProblemSpec& p = config.problems[i];
    ordered_json j{{"label", p.label}, {"kind", to_string(p.kind)}, {"n", p.n}};
    if (p.kind == ProblemKind::ruggedness) j["v"] = p.v;
    if (p.is_integer()) {
      j["cardinality"] = p.cardinality;
      j["permutation"] = p.identity_permutation ? "identity" : "random";
      j["instance_seed"] = p.instance_seed;
    }
    j["metric"] = to_string(p.effective_metric());
    const auto opt = instances[i].problem->optimum();
    j["optimum"] = opt ? ordered_json(*opt) : ordered_json(nullptr);
    problems.push_back(j);
  }
  m["problems"] = problems;

  ordered_json algorithms = ordered_json::array();
  for (const AlgorithmSpec& a : config.algorithms) {
    ordered_json j{{"label", a.label}, {"kind", to_string(a.kind)}, {"mutation", to_string(a.mutation)},
                   {"lambda", a.lambda}};
    if (a.kind == AlgorithmKind::umda) j["mu"] = a.mu;
    if (a.kind == AlgorithmKind::one_plus_lambda_lambda_ea) j["crossover_bias"] = a.crossover_bias.value_or(1.0 / a.lambda);
    if (a.mutation_rate) j["mutation_rate"] = *a.mutation_rate;
    if (a.mutation == MutationKind::distance_driven) {
      j["inner"] = {{"mu", a.inner.mu}, {"lambda", a.inner.lambda}, {"budget", a.inner.budget}};
    }
    if (a.kind == AlgorithmKind::dd_ea_ab) {
      j["initial_mean"] = a.initial_mean;
      j["mean_up"] = a.mean_up;
      j["mean_down"] = a.mean_down;
      j["estimation"] = {{"k", a.chain.k}, {"grow", a.chain.grow}, {"shrink", a.chain.shrink}};
    }
    if (a.kind == AlgorithmKind::rls_ab || a.kind == AlgorithmKind::ea_ab) {
      j["velocity"] = {{"initial", a.velocity.initial},
                       {"success_factor", a.velocity.success_factor},
                       {"failure_factor", a.velocity.failure_factor}};
    }
    algorithms.push_back(j);
  }
  m["algorithms"] = algorithms;

  ordered_json transforms = ordered_json::array();
  for (const TransformResult& t : result.transforms) {
    ordered_json j{{"problem", config.problems[t.problem].label}, {"algorithm", config.algorithms[t.algorithm].label}};
    if (t.params) {
      j["status"] = "ok";
      j["eps1"] = t.params->eps1;
      j["eps2"] = t.params->eps2;
      j["gamma"] = t.params->gamma;
      j["zeta_min_hat"] = t.params->zeta_min_hat;
      j["zeta_max_hat"] = t.params->zeta_max_hat;
    } else {
      j["status"] = "failed";
      j["error"] = t.error;
    }
    transforms.push_back(j);
  }
  m["transforms"] = transforms;

  ordered_json cells = ordered_json::array();
  for (const CellResult& c : result.cells) {
    ordered_json j{{"problem", config.problems[c.problem].label},
                   {"algorithm", config.algorithms[c.algorithm].label},
                   {"run", c.run},
                   {"seed", c.seed},
                   {"status", c.ok ? "ok" : "failed"}};
    if (c.ok) {
      j["trace"] = c.trace_path;
      j["iterations"] = c.iterations;
      j["evaluations"] = c.evaluations;
      j["distance_evaluations"] = c.distance_evaluations;
      j["best_fitness"] = number_or_null(c.best_fitness);
      j["reached_optimum"] = c.reached_optimum;
    } else {
      j["error"] = c.error;
    }
    cells.push_back(j);
  }
  m["cells"] = cells;
  return m;
}

}  // namespace

std::size_t ExperimentResult::failed() const {
  std::size_t count = 0;
  for (const CellResult& c : cells) count += !c.ok;
  return count;
}

std::uint64_t run_seed(const ExperimentConfig& config, std::size_t problem, std::size_t algorithm, int run) {
  return derive_seed(config.master_seed, {problem, algorithm, static_cast<std::uint64_t>(run)});
}

unsigned default_workers() {
  if (const char* env = std::getenv("DDMUT_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

ExperimentResult run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir, unsigned workers) {
  std::vector<Instance> instances;
  for (const ProblemSpec& spec : config.problems) instances.push_back({build_problem(spec), build_metric(spec)});

  ExperimentResult result;
  // One transform estimate per (problem, dd-(1+1) EA-ab column), shared by its runs.
  std::vector<std::vector<std::optional<TransformParams>>> transform(
      config.problems.size(), std::vector<std::optional<TransformParams>>(config.algorithms.size()));
  std::vector<std::vector<std::string>> transform_error(config.problems.size(),
                                                        std::vector<std::string>(config.algorithms.size()));
  for (std::size_t p = 0; p < config.problems.size(); ++p) {
    for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
      const AlgorithmSpec& alg = config.algorithms[a];
      if (alg.kind != AlgorithmKind::dd_ea_ab) continue;
      TransformResult t{p, a, std::nullopt, {}};
      try {
        RngStream rng(derive_seed(config.master_seed, {p, a, kEstimationTag}));
        const SearchSpace& space = instances[p].problem->space();
        t.params = estimate_transform_params_random_anchor(*instances[p].metric, space, alg.chain, alg.inner, rng).params;
        transform[p][a] = t.params;
      } catch (const std::exception& e) {
        t.error = e.what();
        transform_error[p][a] = e.what();
      }
      result.transforms.push_back(t);
    }
  }

  for (std::size_t p = 0; p < config.problems.size(); ++p) {
    for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
      for (int r = 0; r < config.repetitions; ++r) {
        CellResult c;
        c.problem = p;
        c.algorithm = a;
        c.run = r;
        c.seed = run_seed(config, p, a, r);
        c.trace_path = (std::filesystem::path("raw") / config.problems[p].label / config.algorithms[a].label /
                        ("run_" + std::to_string(r) + ".csv"))
                           .generic_string();
        result.cells.push_back(c);
      }
    }
  }

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < result.cells.size(); i = next++) {
      CellResult& c = result.cells[i];
      const AlgorithmSpec& alg = config.algorithms[c.algorithm];
      try {
        if (alg.kind == AlgorithmKind::dd_ea_ab && !transform[c.problem][c.algorithm]) {
          throw std::runtime_error("transform estimation failed: " + transform_error[c.problem][c.algorithm]);
        }
        const RunRecord rec =
            run_cell(config, instances[c.problem], alg, transform[c.problem][c.algorithm], c.seed);
        write_file_atomic(out_dir / c.trace_path, trace_csv({c.run, c.seed, rec.trace}));
        c.iterations = rec.iterations;
        c.evaluations = rec.evaluations;
        c.distance_evaluations = rec.distance_evaluations;
        c.best_fitness = rec.best_fitness;
        c.reached_optimum = rec.reached_optimum;
        c.ok = true;
      } catch (const std::exception& e) {
        c.ok = false;
        c.error = e.what();
      }
    }
  };

  const unsigned count = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(result.cells.size())));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < count; ++w) pool.emplace_back(work);
  work();
  for (std::thread& t : pool) t.join();

  write_file_atomic(out_dir / "manifest.json", manifest_json(config, instances, result).dump(2) + "\n");
  return result;
}

}  // namespace ddmut::bench
