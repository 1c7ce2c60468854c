#include "ddmut/bench/aggregate.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include "ddmut/bench/csv.hpp"
#include "ddmut/bench/stats.hpp"
#include "ddmut/trace.hpp"

namespace ddmut::bench {

namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Column {
  std::string label;
  std::vector<TraceFile> runs;
};

struct ProblemData {
  std::string label;
  std::optional<double> optimum;
  std::vector<Column> columns;
};

json load_manifest(const std::filesystem::path& dir) {
  const std::filesystem::path path = dir / "manifest.json";
  std::ifstream in(path);
  if (!in) throw AggregateError("no manifest.json in " + dir.string());
  json m;
  try {
    in >> m;
  } catch (const json::exception& e) {
    throw AggregateError("manifest.json is not valid JSON: " + std::string(e.what()));
  }
  if (!m.is_object() || m.value("format", "") != "ddmut-run/1") {
    throw AggregateError("manifest.json has an unsupported format");
  }
  for (const char* key : {"problems", "algorithms", "cells", "budget"}) {
    if (!m.contains(key)) throw AggregateError(std::string("manifest.json lacks '") + key + "'");
  }
  return m;
}

std::vector<ProblemData> load_runs(const std::filesystem::path& dir, const json& m) {
  std::vector<ProblemData> problems;
  std::vector<std::string> algorithms;
  for (const json& a : m["algorithms"]) algorithms.push_back(a.at("label").get<std::string>());
  for (const json& p : m["problems"]) {
    ProblemData d;
    d.label = p.at("label").get<std::string>();
    if (p.contains("optimum") && !p["optimum"].is_null()) d.optimum = p["optimum"].get<double>();
    for (const std::string& a : algorithms) d.columns.push_back({a, {}});
    problems.push_back(std::move(d));
  }
  auto index_of = [](const auto& items, const std::string& label, auto key) -> std::size_t {
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (key(items[i]) == label) return i;
    }
    throw AggregateError("manifest cell refers to unknown label '" + label + "'");
  };

  for (const json& cell : m["cells"]) {
    if (cell.at("status").get<std::string>() != "ok") continue;
    const std::size_t p = index_of(problems, cell.at("problem").get<std::string>(), [](const ProblemData& d) { return d.label; });
    const std::size_t a = index_of(algorithms, cell.at("algorithm").get<std::string>(), [](const std::string& s) { return s; });
    TraceFile trace;
    try {
      trace = read_trace_csv(dir / cell.at("trace").get<std::string>());
    } catch (const std::exception& e) {
      throw AggregateError(e.what());
    }
    if (trace.seed != cell.at("seed").get<std::uint64_t>() || trace.run_id != cell.at("run").get<std::int64_t>()) {
      throw AggregateError(cell.at("trace").get<std::string>() + " does not belong to this manifest");
    }
    for (std::size_t i = 1; i < trace.rows.size(); ++i) {
      if (trace.rows[i].best_fitness < trace.rows[i - 1].best_fitness) {
        throw AggregateError(cell.at("trace").get<std::string>() + " has a decreasing best-so-far column");
      }
    }
    problems[p].columns[a].runs.push_back(std::move(trace));
  }
  return problems;
}

std::string cell(double v) { return format_double(v); }

// "median,mean,sd,se" with mean/sd/se over the finite values only.
std::string summary(const std::vector<double>& values) {
  std::vector<double> finite;
  for (double v : values) {
    if (std::isfinite(v)) finite.push_back(v);
  }
  std::string out = values.empty() ? "" : cell(median(values));
  out += ',';
  if (!finite.empty()) out += cell(mean(finite)) + ',' + cell(stddev(finite)) + ',' + cell(stderr_of_mean(finite));
  else out += ",,";
  return out;
}

// First (iteration, evaluations) at which best-so-far reaches `target`.
std::optional<std::pair<double, double>> hitting(const TraceFile& t, double target) {
  for (const TraceRow& row : t.rows) {
    if (row.best_fitness >= target) return std::make_pair(double(row.iteration), double(row.evaluations));
  }
  return std::nullopt;
}

std::optional<double> best_at(const TraceFile& t, std::int64_t evaluations) {
  std::optional<double> best;
  for (const TraceRow& row : t.rows) {
    if (row.evaluations > evaluations) break;
    best = row.best_fitness;
  }
  return best;
}

void pairwise(std::ostringstream& out, const std::string& problem, const char* measure, double level,
              const std::vector<std::pair<std::string, std::vector<double>>>& samples) {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (std::size_t j = i + 1; j < samples.size(); ++j) {
      if (samples[i].second.empty() || samples[j].second.empty()) continue;
      const RankSumResult r = rank_sum_test(samples[i].second, samples[j].second);
      out << problem << ',' << measure << ',' << cell(level) << ',' << samples[i].first << ',' << samples[j].first
          << ',' << cell(r.u) << ',' << cell(r.p) << '\n';
    }
  }
}

}  // namespace

std::vector<double> target_levels(std::vector<double> observed, std::size_t max_levels) {
  observed.erase(std::remove_if(observed.begin(), observed.end(), [](double v) { return !std::isfinite(v); }),
                 observed.end());
  std::sort(observed.begin(), observed.end());
  observed.erase(std::unique(observed.begin(), observed.end()), observed.end());
  if (observed.size() <= max_levels || max_levels < 2) return observed;
  std::vector<double> out;
  const std::size_t last = observed.size() - 1;
  for (std::size_t k = 0; k < max_levels; ++k) {
    const std::size_t idx = (k * last + (max_levels - 1) / 2) / (max_levels - 1);
    if (out.empty() || observed[idx] != out.back()) out.push_back(observed[idx]);
  }
  return out;
}

AggregateOutputs aggregate_directory(const std::filesystem::path& dir) {
  const json m = load_manifest(dir);
  const std::vector<ProblemData> problems = load_runs(dir, m);
  std::optional<std::int64_t> budget_evals;
  if (!m["budget"].value("max_evaluations", json()).is_null()) budget_evals = m["budget"]["max_evaluations"].get<std::int64_t>();

  std::ostringstream targets;
  std::ostringstream checkpoints;
  std::ostringstream pvalues;
  targets << "problem,algorithm,target,runs,reached,censored,median_iterations,mean_iterations,sd_iterations,"
             "se_iterations,median_evaluations,mean_evaluations,sd_evaluations,se_evaluations\n";
  checkpoints << "problem,algorithm,evaluations,runs,median_best,mean_best,sd_best,se_best,median_regret,mean_regret,"
                 "sd_regret,se_regret\n";
  pvalues << "problem,measure,level,algorithm_a,algorithm_b,u,p\n";

  for (const ProblemData& p : problems) {
    std::vector<double> observed;
    std::int64_t max_evals = 0;
    for (const Column& c : p.columns) {
      for (const TraceFile& t : c.runs) {
        for (const TraceRow& row : t.rows) {
          observed.push_back(row.best_fitness);
          max_evals = std::max(max_evals, row.evaluations);
        }
      }
    }

    for (double target : target_levels(observed)) {
      std::vector<std::pair<std::string, std::vector<double>>> samples;
      for (const Column& c : p.columns) {
        if (c.runs.empty()) continue;
        std::vector<double> iters;
        std::vector<double> evals;
        for (const TraceFile& t : c.runs) {
          const auto hit = hitting(t, target);
          iters.push_back(hit ? hit->first : kInf);
          evals.push_back(hit ? hit->second : kInf);
        }
        const auto reached = std::count_if(iters.begin(), iters.end(), [](double v) { return std::isfinite(v); });
        targets << p.label << ',' << c.label << ',' << cell(target) << ',' << c.runs.size() << ',' << reached << ','
                << (c.runs.size() - reached) << ',' << summary(iters) << ',' << summary(evals) << '\n';
        samples.emplace_back(c.label, std::move(iters));
      }
      pairwise(pvalues, p.label, "iterations_to_target", target, samples);
    }

    for (std::int64_t e : checkpoint_grid(budget_evals.value_or(max_evals))) {
      std::vector<std::pair<std::string, std::vector<double>>> samples;
      for (const Column& c : p.columns) {
        std::vector<double> best;
        for (const TraceFile& t : c.runs) {
          if (const auto b = best_at(t, e)) best.push_back(*b);
        }
        if (best.empty()) continue;
        checkpoints << p.label << ',' << c.label << ',' << e << ',' << best.size() << ',' << summary(best) << ',';
        if (p.optimum) {
          std::vector<double> regret;
          for (double b : best) regret.push_back(*p.optimum - b);
          checkpoints << summary(regret);
        } else {
          checkpoints << ",,,";
        }
        checkpoints << '\n';
        samples.emplace_back(c.label, std::move(best));
      }
      pairwise(pvalues, p.label, "best_at_checkpoint", static_cast<double>(e), samples);
    }
  }

  AggregateOutputs out{dir / "targets.csv", dir / "checkpoints.csv", dir / "pvalues.csv"};
  write_file_atomic(out.targets, targets.str());
  write_file_atomic(out.checkpoints, checkpoints.str());
  write_file_atomic(out.pvalues, pvalues.str());
  return out;
}

}  // namespace ddmut::bench
