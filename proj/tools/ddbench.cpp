#include <CLI11.hpp>

#include <iostream>

#include "ddmut/bench/aggregate.hpp"
#include "ddmut/bench/config.hpp"
#include "ddmut/bench/runner.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeFailure = 2;

void describe(const ddmut::bench::ExperimentConfig& c) {
  std::cout << c.name << ": " << c.problems.size() << " problem(s) x " << c.algorithms.size() << " algorithm(s) x "
            << c.repetitions << " repetition(s), master seed " << c.master_seed << "\n";
  for (const auto& p : c.problems) std::cout << "  problem   " << p.label << " (metric " << to_string(p.effective_metric()) << ")\n";
  for (const auto& a : c.algorithms) std::cout << "  algorithm " << a.label << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  using namespace ddmut::bench;
  CLI::App app{"Distance-driven mutation benchmark harness"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output;
  unsigned workers = 0;
  auto* run = app.add_subcommand("run", "Run every cell of an experiment config");
  run->add_option("config", config_path, "YAML experiment config")->required();
  run->add_option("-o,--output", output, "Output directory (overrides the config)");
  run->add_option("-j,--workers", workers, "Worker threads (default: DDMUT_WORKERS or all cores)");

  std::string dir;
  auto* aggregate = app.add_subcommand("aggregate", "Aggregate the raw traces of a run directory");
  aggregate->add_option("dir", dir, "Directory holding manifest.json")->required();

  auto* list = app.add_subcommand("list-problems", "List problem, metric and algorithm kinds");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check an experiment config without running it");
  validate->add_option("config", validate_path, "YAML experiment config")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfigError;
  }

  try {
    if (*run) {
      ExperimentConfig config = load_config(config_path);
      if (!output.empty()) config.output = output;
      describe(config);
      const ExperimentResult result = run_experiment(config, config.output, workers ? workers : default_workers());
      std::cout << "wrote " << result.cells.size() << " cell(s) to " << config.output.string() << "\n";
      if (result.failed() > 0) {
        for (const auto& c : result.cells) {
          if (!c.ok) std::cerr << "failed: " << c.trace_path << ": " << c.error << "\n";
        }
        return kRuntimeFailure;
      }
      return kOk;
    }
    if (*aggregate) {
      const AggregateOutputs out = aggregate_directory(dir);
      std::cout << out.targets.string() << "\n" << out.checkpoints.string() << "\n" << out.pvalues.string() << "\n";
      return kOk;
    }
    if (*list) {
      std::cout << "problems:\n";
      for (const auto& name : problem_kind_names()) std::cout << "  " << name << "\n";
      std::cout << "metrics:\n  hamming\n  ruggedness\n  permuted_l2\n";
      std::cout << "algorithms:\n";
      for (const auto& name : algorithm_kind_names()) std::cout << "  " << name << "\n";
      return kOk;
    }
    if (*validate) {
      describe(load_config(validate_path));
      std::cout << "ok\n";
      return kOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const AggregateError& e) {
    std::cerr << "aggregate error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeFailure;
  }
  return kOk;
}
