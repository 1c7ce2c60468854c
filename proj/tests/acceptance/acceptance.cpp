// Acceptance checks. Each criterion prints detail lines followed by one
// PASS or FAIL line; the exit status is nonzero when any selected check fails.
//
//   ddmut_acceptance [criterion...]     (default: all)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "ddmut/algorithms.hpp"
#include "ddmut/bench/config.hpp"
#include "ddmut/bench/runner.hpp"
#include "ddmut/bench/stats.hpp"
#include "ddmut/operators.hpp"
#include "ddmut/problems.hpp"
#include "ddmut/stepdist.hpp"
#include "ddmut/umda.hpp"

using namespace ddmut;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;

  void check(bool ok, const std::string& what) {
    details.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
    pass = pass && ok;
  }
  void note(const std::string& what) { details.push_back("     " + what); }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

double simpson(const std::function<double(double)>& f, double a, double b, int intervals = 200000) {
  const double h = (b - a) / intervals;
  double s = f(a) + f(b);
  for (int i = 1; i < intervals; ++i) s += f(a + i * h) * (i % 2 ? 4 : 2);
  return s * h / 3;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("ddmut_acceptance_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

/// Values of one (problem, algorithm) column of an experiment.
std::vector<double> column(const bench::ExperimentResult& r, std::size_t problem, std::size_t algorithm,
                           const std::function<double(const bench::CellResult&)>& value) {
  std::vector<double> out;
  for (const auto& c : r.cells)
    if (c.problem == problem && c.algorithm == algorithm) out.push_back(value(c));
  return out;
}

// ---------------------------------------------------------------------------

Outcome maxent_solver() {
  Outcome o;
  const auto start = Clock::now();
  for (double m : {0.05, 0.1, 0.25, 0.4, 0.499}) {
    const MaxEntropyStepDist d(0.0, 1.0, m);
    const double mass = simpson([&](double x) { return d.pdf(x); }, 0.0, 1.0);
    const double mean = simpson([&](double x) { return x * d.pdf(x); }, 0.0, 1.0);
    const double l1 = d.lambda1();
    o.check(std::abs(mass - 1) <= 1e-6 && std::abs(mean - m) <= 1e-4 && l1 >= -1 / m && l1 < 0,
            fmt("m=%.3f mass-1=%.2e mean-m=%.2e lambda1=%.6f in [%.3f, 0)", m, mass - 1, mean - m, l1, -1 / m));
  }
  const double elapsed = seconds_since(start);
  o.check(elapsed < 1.0, fmt("runtime %.3f s < 1 s", elapsed));
  return o;
}

Outcome transform_constraints() {
  Outcome o;
  const auto start = Clock::now();
  const UmdaConfig inner{100, 1000, 40000, std::nullopt};
  auto verify = [&](const std::string& label, const Metric& metric, const SearchSpace& space, RngStream& rng) {
    const Genome anchor = random_genome(space, rng);
    try {
      const TransformParams p = estimate_transform_params(metric, space, anchor, ChainConstants{}, inner, rng).params;
      const double lo = transform_distance(p.zeta_min_hat, p.gamma);
      const double hi = transform_distance(p.zeta_max_hat, p.gamma);
      o.check(p.eps2 <= p.eps1 && p.eps1 <= 1e-2 && lo <= p.eps1 * (1 + 1e-6) && hi >= (1 - p.eps2) * (1 - 1e-6),
              fmt("%s eps1=%.4g eps2=%.4g gamma=%.4g zeta=[%.4g, %.4g] tau=[%.4g, %.10g]", label.c_str(), p.eps1,
                  p.eps2, p.gamma, p.zeta_min_hat, p.zeta_max_hat, lo, hi));
    } catch (const std::exception& e) {
      o.check(false, label + " estimation failed: " + e.what());
    }
  };
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    RngStream rng(derive_seed(0xacce55, {2, 1, seed}));
    verify(fmt("ruggedness n=100 v=5 seed=%d", int(seed)), RuggednessMetric(5), SearchSpace::binary(100), rng);
  }
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    RngStream rng(derive_seed(0xacce55, {2, 2, seed}));
    const Permutation perm = random_permutation(20, rng);
    verify(fmt("permuted sphere n=10 c=20 seed=%d", int(seed)), PermutedL2Metric(perm), SearchSpace::uniform(10, 20),
           rng);
  }
  const double elapsed = seconds_since(start);
  o.check(elapsed < 60.0, fmt("runtime %.1f s < 60 s", elapsed));
  return o;
}

Outcome ruggedness_bijection() {
  Outcome o;
  const auto start = Clock::now();
  int bad = 0;
  bool identity = true;
  for (int n = 1; n <= 128; ++n) {
    for (int v = 1; v <= 8; ++v) {
      std::vector<bool> hit(n + 1, false);
      for (int l = 0; l <= n; ++l) {
        const int r = ruggedness_perm(l, n, v);
        if (r < 0 || r > n || hit[r]) {
          ++bad;
          break;
        }
        hit[r] = true;
        if (v == 1 && r != l) identity = false;
      }
    }
  }
  o.check(bad == 0, fmt("bijection on {0..n} for all n <= 128, v in 1..8 (%d violations)", bad));
  o.check(identity, "v=1 is the identity");
  const int a = ruggedness_perm(99, 100, 5);
  const int b = ruggedness_perm(100, 100, 5);
  o.check(a == 95 && b == 100, fmt("n=100 v=5: 99 -> %d, 100 -> %d", a, b));
  const double elapsed = seconds_since(start);
  o.check(elapsed < 1.0, fmt("runtime %.3f s < 1 s", elapsed));
  return o;
}

class FixedStep final : public StepSizeDistribution {
 public:
  explicit FixedStep(double s) : s_(s) {}
  double sample(RngStream&) const override { return s_; }
  double mean() const override { return s_; }
  std::string describe() const override { return "fixed"; }

 private:
  double s_;
};

Outcome inner_oracle() {
  Outcome o;
  const auto start = Clock::now();
  constexpr int n = 12;
  constexpr int trials = 200;
  const SearchSpace space = SearchSpace::binary(n);
  std::vector<Genome> all;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> bits(n);
    for (int i = 0; i < n; ++i) bits[i] = (mask >> i) & 1;
    all.emplace_back(bits, space);
  }
  for (int v : {1, 2, 3, 5}) {
    const auto metric = std::make_shared<RuggednessMetric>(v);
    RngStream rng(derive_seed(0xacce55, {4, static_cast<std::uint64_t>(v)}));
    int reachable = 0;
    int exact = 0;
    bool never_worse = true;
    for (int s = 1; s <= n; ++s) {
      for (int t = 0; t < trials; ++t) {
        const Genome x = random_genome(space, rng);
        double oracle = kInf;
        for (const Genome& y : all)
          if (!(y == x)) oracle = std::min(oracle, std::abs(metric->distance(x, y) - s));
        const DdMutationConfig config{metric, std::make_shared<FixedStep>(s), UmdaConfig{50, 100, 1000, std::nullopt},
                                      std::nullopt};
        const DdMutationResult r = dd_mutate_to(x, s, config, rng);
        never_worse = never_worse && r.gap >= oracle && !(r.mutant == x);
        if (oracle == 0.0) {
          ++reachable;
          exact += r.gap == 0.0;
        }
      }
    }
    const double rate = reachable ? double(exact) / reachable : 0.0;
    o.check(never_worse, fmt("v=%d dd gap never below the exhaustive optimum, mutant != x", v));
    o.check(rate >= 0.9, fmt("v=%d exact hits %d/%d reachable trials = %.3f (need >= 0.9)", v, exact, reachable, rate));
  }
  const double elapsed = seconds_since(start);
  o.check(elapsed < 120.0, fmt("runtime %.1f s < 120 s", elapsed));
  return o;
}

fs::path config_dir() { return fs::path(DDMUT_CONFIG_DIR); }

Outcome binary_speedup() {
  Outcome o;
  const auto start = Clock::now();
  bench::ExperimentConfig config = bench::load_config(config_dir() / "binary_ruggedness.yaml");
  const fs::path dir = scratch_dir("binary");
  const bench::ExperimentResult r = bench::run_experiment(config, dir);
  o.check(r.failed() == 0, fmt("%d failed cells", int(r.failed())));

  std::map<std::string, std::size_t> alg;
  for (std::size_t a = 0; a < config.algorithms.size(); ++a) alg[config.algorithms[a].label] = a;
  const std::pair<std::string, std::string> pairs[] = {{"one_plus_lambda_ea_4", "dd_one_plus_lambda_ea_4"},
                                                       {"one_plus_lambda_lambda_ea_4", "dd_one_plus_lambda_lambda_ea_4"}};
  auto iterations = [](const bench::CellResult& c) { return c.reached_optimum ? double(c.iterations) : kInf; };
  for (std::size_t p = 0; p < config.problems.size(); ++p) {
    const int v = config.problems[p].v;
    for (const auto& [classic, dd] : pairs) {
      const std::vector<double> a = column(r, p, alg.at(classic), iterations);
      const std::vector<double> b = column(r, p, alg.at(dd), iterations);
      const double ma = bench::median(a);
      const double mb = bench::median(b);
      const bench::RankSumResult t = bench::rank_sum_test(a, b);
      const std::string head = fmt("v=%d %s median %g vs %s median %g (p=%.3g)", v, dd.c_str(), mb, classic.c_str(), ma, t.p);
      if (v == 1) {
        const bool finite = std::isfinite(ma) && std::isfinite(mb);
        const double ratio = finite ? std::max(ma, mb) / std::min(ma, mb) : kInf;
        o.check(finite && ratio <= 2.0, head + fmt(": ratio %.2f within factor 2", ratio));
      } else {
        o.check(mb < ma && t.p < 0.05, head + ": dd strictly lower with p < 0.05");
      }
    }
  }
  fs::remove_all(dir);
  const double elapsed = seconds_since(start);
  o.check(elapsed < 900.0, fmt("runtime %.1f s < 900 s", elapsed));
  return o;
}

Outcome integer_advantage() {
  Outcome o;
  const auto start = Clock::now();
  auto make = [](const std::string& algorithms, int repetitions) {
    return bench::parse_config(
        "master_seed: 7\n"
        "repetitions: " + std::to_string(repetitions) + "\n"
        "budget: {max_evaluations: 2000}\n"
        "problem: {kind: sphere, n: 10, cardinality: 20}\n"
        "algorithms: " + algorithms + "\n");
  };
  const auto baseline_config = make("[{kind: rls_ab}, {kind: ea_ab, lambda: 1}]", 30);
  const auto dd_config = make("[{kind: dd_ea_ab, inner: {mu: 100, lambda: 1000, budget: 40000}}]", 10);
  const fs::path dir = scratch_dir("integer");
  const bench::ExperimentResult base = bench::run_experiment(baseline_config, dir / "baseline");
  const bench::ExperimentResult dd = bench::run_experiment(dd_config, dir / "dd");
  o.check(base.failed() == 0 && dd.failed() == 0, "no failed cells");
  if (!dd.transforms.empty() && dd.transforms[0].params) {
    const TransformParams& p = *dd.transforms[0].params;
    o.note(fmt("transform eps1=%.4g eps2=%.4g gamma=%.4g zeta=[%.4g, %.4g]", p.eps1, p.eps2, p.gamma, p.zeta_min_hat,
               p.zeta_max_hat));
  }
  // The problem reports -regret, so the optimum is 0.
  auto regret = [](const bench::CellResult& c) { return -c.best_fitness; };
  const double dd_median = bench::median(column(dd, 0, 0, regret));
  const double rls_median = bench::median(column(base, 0, 0, regret));
  const double ea_median = bench::median(column(base, 0, 1, regret));
  o.check(dd_median < rls_median, fmt("dd_ea_ab median regret %g (10 runs) < rls_ab %g (30 runs)", dd_median, rls_median));
  o.check(dd_median < ea_median, fmt("dd_ea_ab median regret %g (10 runs) < ea_ab %g (30 runs)", dd_median, ea_median));
  fs::remove_all(dir);
  const double elapsed = seconds_since(start);
  o.check(elapsed < 1200.0, fmt("runtime %.1f s < 1200 s", elapsed));
  return o;
}

Outcome rerun_determinism() {
  Outcome o;
  std::vector<bench::ExperimentConfig> configs;
  // Shipped configurations, shortened so that both reruns stay cheap.
  bench::ExperimentConfig binary = bench::load_config(config_dir() / "binary_ruggedness.yaml");
  binary.repetitions = 2;
  binary.budget.max_iterations = 300;
  configs.push_back(binary);
  bench::ExperimentConfig integer = bench::load_config(config_dir() / "integer_suite.yaml");
  integer.repetitions = 2;
  integer.budget.max_evaluations = 200;
  configs.push_back(integer);

  for (const auto& config : configs) {
    const fs::path first = scratch_dir(config.name + "_a");
    const fs::path second = scratch_dir(config.name + "_b");
    const bench::ExperimentResult ra = bench::run_experiment(config, first, 1);
    bench::run_experiment(config, second, 3);
    int files = 0;
    int differing = 0;
    for (const auto& c : ra.cells) {
      ++files;
      const std::string a = slurp(first / c.trace_path);
      differing += a.empty() || a != slurp(second / c.trace_path);
    }
    o.check(differing == 0 && files > 0 && ra.failed() == 0,
            fmt("%s: %d raw CSVs, %d differ between a 1-worker and a 3-worker rerun", config.name.c_str(), files, differing));
    fs::remove_all(first);
    fs::remove_all(second);
  }
  return o;
}

Outcome umda_sanity() {
  Outcome o;
  const auto start = Clock::now();
  const SearchSpace binary = SearchSpace::binary(50);
  int solved = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RngStream rng(derive_seed(0xacce55, {8, seed}));
    const UmdaResult r = umda_run([](const Genome& x) { return double(onemax(x)); }, binary,
                                  {50, 100, 10000, std::nullopt}, rng, [](const Genome&, double v) { return v >= 50; });
    solved += r.value == 50 && r.evaluations <= 10000;
  }
  o.check(solved >= 19, fmt("OneMax n=50 solved within 10^4 evaluations in %d/20 seeds (need >= 19)", solved));

  // A categorical model shaped by a few generations on a small integer objective.
  const SearchSpace space = SearchSpace::uniform(6, 5);
  RngStream rng(derive_seed(0xacce55, {8, 100}));
  std::unique_ptr<MarginalModel> model;
  auto objective = [](const Genome& x) {
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s -= std::abs(x[i] - static_cast<int>(i % 5));
    return s;
  };
  umda_run(objective, space, {10, 30, 90, std::nullopt}, rng, {},
           [&](const MarginalModel& m, const UmdaResult&) { model = std::make_unique<MarginalModel>(m); });
  constexpr int draws = 100000;
  std::vector<std::vector<int>> counts(space.size(), std::vector<int>(5, 0));
  Genome out(space);
  for (int t = 0; t < draws; ++t) {
    model->sample(rng, out);
    for (std::size_t i = 0; i < space.size(); ++i) ++counts[i][out[i]];
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < space.size(); ++i) {
    for (int v = 0; v < 5; ++v) {
      const double p = model->probability(i, v);
      worst = std::max(worst, std::abs(counts[i][v] - draws * p) / std::sqrt(draws * p * (1 - p)));
    }
  }
  o.check(worst <= 3.0, fmt("categorical frequencies over 10^5 samples: max deviation %.2f sigma (need <= 3)", worst));
  const double elapsed = seconds_since(start);
  o.check(elapsed < 60.0, fmt("runtime %.1f s < 60 s", elapsed));
  return o;
}

struct Criterion {
  int id;
  const char* title;
  Outcome (*run)();
};

const Criterion kCriteria[] = {
    {1, "max-entropy solver", maxent_solver},
    {2, "transform parameter constraints", transform_constraints},
    {3, "ruggedness permutation bijection", ruggedness_bijection},
    {4, "inner mutation matches the exhaustive oracle", inner_oracle},
    {5, "binary end-to-end speedup", binary_speedup},
    {6, "integer end-to-end advantage", integer_advantage},
    {7, "rerun determinism", rerun_determinism},
    {8, "UMDA sanity", umda_sanity},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  bool all_pass = true;
  for (const Criterion& c : kCriteria) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    for (const std::string& d : o.details) std::printf("  %s\n", d.c_str());
    std::printf("%s %d %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title);
    std::fflush(stdout);
    all_pass = all_pass && o.pass;
  }
  return all_pass ? 0 : 1;
}
