#include "ddmut/bench/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace ddmut::bench {

namespace {

std::string located(const std::string& message, int line, int column) {
  if (line <= 0) return message;
  std::ostringstream out;
  out << "line " << line << ", column " << column << ": " << message;
  return out.str();
}

[[noreturn]] void fail(const YAML::Node& node, const std::string& message) {
  const YAML::Mark mark = node.Mark();
  if (mark.is_null()) throw ConfigError(message);
  throw ConfigError(message, mark.line + 1, mark.column + 1);
}

template <typename Enum, std::size_t N>
Enum lookup(const std::string& name, const std::pair<const char*, Enum> (&table)[N], const char* what,
            const YAML::Node& node) {
  for (const auto& [key, value] : table) {
    if (name == key) return value;
  }
  std::string options;
  for (const auto& entry : table) options += std::string(options.empty() ? "" : ", ") + entry.first;
  fail(node, "unknown " + std::string(what) + " '" + name + "' (expected one of: " + options + ")");
}

constexpr std::pair<const char*, ProblemKind> kProblems[] = {
    {"onemax", ProblemKind::onemax}, {"ruggedness", ProblemKind::ruggedness},
    {"sphere", ProblemKind::sphere}, {"ellipsoid", ProblemKind::ellipsoid},
    {"rastrigin", ProblemKind::rastrigin}, {"sharp_ridge", ProblemKind::sharp_ridge},
};
constexpr std::pair<const char*, MetricKind> kMetrics[] = {
    {"hamming", MetricKind::hamming}, {"ruggedness", MetricKind::ruggedness}, {"permuted_l2", MetricKind::permuted_l2}};
constexpr std::pair<const char*, AlgorithmKind> kAlgorithms[] = {
    {"one_plus_lambda_ea", AlgorithmKind::one_plus_lambda_ea},
    {"one_plus_lambda_lambda_ea", AlgorithmKind::one_plus_lambda_lambda_ea},
    {"rls_ab", AlgorithmKind::rls_ab},
    {"ea_ab", AlgorithmKind::ea_ab},
    {"dd_ea_ab", AlgorithmKind::dd_ea_ab},
    {"umda", AlgorithmKind::umda},
};
constexpr std::pair<const char*, MutationKind> kMutations[] = {{"classical", MutationKind::classical},
                                                               {"dd", MutationKind::distance_driven}};

template <typename Enum, std::size_t N>
std::string_view name_of(Enum value, const std::pair<const char*, Enum> (&table)[N]) {
  for (const auto& [key, v] : table) {
    if (v == value) return key;
  }
  return "?";
}

template <typename Enum, std::size_t N>
std::vector<std::string> names_of(const std::pair<const char*, Enum> (&table)[N]) {
  std::vector<std::string> out;
  for (const auto& entry : table) out.emplace_back(entry.first);
  return out;
}

void require_map(const YAML::Node& node, const char* what) {
  if (!node.IsMap()) fail(node, std::string(what) + " must be a mapping");
}

void check_keys(const YAML::Node& node, std::initializer_list<const char*> allowed) {
  for (const auto& item : node) {
    const std::string key = item.first.as<std::string>();
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      fail(item.first, "unknown key '" + key + "'");
    }
  }
}

template <typename T>
T scalar(const YAML::Node& node, const char* key) {
  if (!node.IsScalar()) fail(node, std::string("'") + key + "' must be a scalar");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    fail(node, std::string("'") + key + "' has an invalid value '" + node.Scalar() + "'");
  }
}

template <typename T>
void read(const YAML::Node& parent, const char* key, T& out) {
  if (const YAML::Node node = parent[key]) out = scalar<T>(node, key);
}

template <typename T>
void read(const YAML::Node& parent, const char* key, std::optional<T>& out) {
  if (const YAML::Node node = parent[key]) out = scalar<T>(node, key);
}

template <typename T>
T required(const YAML::Node& parent, const char* key, const char* what) {
  const YAML::Node node = parent[key];
  if (!node) fail(parent, std::string(what) + " needs '" + key + "'");
  return scalar<T>(node, key);
}

void positive(const YAML::Node& parent, const char* key, double value) {
  if (!(value > 0)) fail(parent[key] ? parent[key] : parent, std::string("'") + key + "' must be positive");
}

UmdaConfig parse_inner(const YAML::Node& node, UmdaConfig inner) {
  require_map(node, "inner");
  check_keys(node, {"mu", "lambda", "budget"});
  read(node, "mu", inner.mu);
  read(node, "lambda", inner.lambda);
  read(node, "budget", inner.budget);
  if (inner.mu < 1 || inner.mu > inner.lambda) fail(node, "inner optimizer needs 1 <= mu <= lambda");
  if (inner.budget < inner.lambda) fail(node, "inner budget must be at least lambda");
  return inner;
}

ProblemSpec parse_problem(const YAML::Node& node, std::uint64_t master_seed, std::size_t index) {
  require_map(node, "problem");
  check_keys(node, {"kind", "n", "v", "cardinality", "permutation", "instance_seed", "metric", "label"});
  ProblemSpec p;
  p.kind = lookup(required<std::string>(node, "kind", "problem"), kProblems, "problem kind", node["kind"]);
  const auto n = required<long long>(node, "n", "problem");
  if (n < 1) fail(node["n"], "'n' must be >= 1");
  p.n = static_cast<std::size_t>(n);
  read(node, "v", p.v);
  if (p.v < 1) fail(node["v"], "'v' must be >= 1");
  if (node["v"] && p.kind != ProblemKind::ruggedness) fail(node["v"], "'v' applies to ruggedness problems only");

  if (p.is_integer()) {
    p.cardinality = required<int>(node, "cardinality", "integer problem");
    if (p.cardinality < 2) fail(node["cardinality"], "'cardinality' must be >= 2");
    std::string perm = "random";
    read(node, "permutation", perm);
    if (perm != "random" && perm != "identity") fail(node["permutation"], "'permutation' must be random or identity");
    p.identity_permutation = perm == "identity";
  } else {
    if (node["cardinality"]) fail(node["cardinality"], "binary problems have cardinality 2");
    if (node["permutation"]) fail(node["permutation"], "'permutation' applies to integer problems only");
  }
  p.instance_seed = derive_seed(master_seed, {0x696e7374ULL, index});
  read(node, "instance_seed", p.instance_seed);

  if (const YAML::Node m = node["metric"]) p.metric = lookup(scalar<std::string>(m, "metric"), kMetrics, "metric", m);
  const MetricKind metric = p.effective_metric();
  if (p.is_integer() && metric != MetricKind::permuted_l2) {
    fail(node["metric"], "integer problems support the permuted_l2 metric only");
  }
  if (!p.is_integer() && metric == MetricKind::permuted_l2) {
    fail(node["metric"], "permuted_l2 applies to integer problems only");
  }

  std::ostringstream label;
  label << to_string(p.kind) << "_n" << p.n;
  if (p.kind == ProblemKind::ruggedness) label << "_v" << p.v;
  if (p.is_integer()) label << "_c" << p.cardinality;
  p.label = label.str();
  read(node, "label", p.label);
  return p;
}

std::string default_label(const AlgorithmSpec& a) {
  std::ostringstream out;
  if (a.mutation == MutationKind::distance_driven && a.kind != AlgorithmKind::dd_ea_ab) out << "dd_";
  out << to_string(a.kind);
  if (a.kind != AlgorithmKind::rls_ab && a.kind != AlgorithmKind::dd_ea_ab) out << "_" << a.lambda;
  return out.str();
}

AlgorithmSpec parse_algorithm(const YAML::Node& node) {
  require_map(node, "algorithm");
  check_keys(node, {"kind", "label", "mutation", "lambda", "mu", "crossover_bias", "mutation_rate", "inner",
                    "estimation", "velocity", "initial_mean", "mean_up", "mean_down"});
  AlgorithmSpec a;
  a.kind = lookup(required<std::string>(node, "kind", "algorithm"), kAlgorithms, "algorithm kind", node["kind"]);
  if (const YAML::Node m = node["mutation"]) a.mutation = lookup(scalar<std::string>(m, "mutation"), kMutations, "mutation", m);
  if (a.kind == AlgorithmKind::dd_ea_ab) a.mutation = MutationKind::distance_driven;
  const bool dd_capable = a.kind == AlgorithmKind::one_plus_lambda_ea ||
                          a.kind == AlgorithmKind::one_plus_lambda_lambda_ea || a.kind == AlgorithmKind::dd_ea_ab;
  if (a.mutation == MutationKind::distance_driven && !dd_capable) {
    fail(node["mutation"], std::string(to_string(a.kind)) + " has no distance-driven variant");
  }

  if (a.kind == AlgorithmKind::umda) {
    a.lambda = 100;
    read(node, "mu", a.mu);
  } else if (node["mu"]) {
    fail(node["mu"], "'mu' applies to umda only");
  }
  read(node, "lambda", a.lambda);
  if (a.lambda < 1) fail(node["lambda"], "'lambda' must be >= 1");
  if (a.kind == AlgorithmKind::umda && (a.mu < 1 || a.mu > a.lambda)) fail(node, "umda needs 1 <= mu <= lambda");
  if ((a.kind == AlgorithmKind::rls_ab || a.kind == AlgorithmKind::dd_ea_ab) && a.lambda != 1) {
    fail(node["lambda"], std::string(to_string(a.kind)) + " has a single offspring");
  }

  read(node, "crossover_bias", a.crossover_bias);
  if (a.crossover_bias) {
    if (a.kind != AlgorithmKind::one_plus_lambda_lambda_ea) fail(node["crossover_bias"], "'crossover_bias' applies to one_plus_lambda_lambda_ea only");
    if (*a.crossover_bias < 0 || *a.crossover_bias > 1) fail(node["crossover_bias"], "'crossover_bias' must be in [0, 1]");
  }
  read(node, "mutation_rate", a.mutation_rate);
  if (a.mutation_rate && !(*a.mutation_rate > 0 && *a.mutation_rate <= 1)) fail(node["mutation_rate"], "'mutation_rate' must be in (0, 1]");

  if (a.kind == AlgorithmKind::dd_ea_ab) a.inner = UmdaConfig{100, 1000, 40000, std::nullopt};
  if (const YAML::Node inner = node["inner"]) {
    if (a.mutation != MutationKind::distance_driven) fail(inner, "'inner' applies to distance-driven mutation only");
    a.inner = parse_inner(inner, a.inner);
  }
  if (const YAML::Node est = node["estimation"]) {
    if (a.kind != AlgorithmKind::dd_ea_ab) fail(est, "'estimation' applies to dd_ea_ab only");
    require_map(est, "estimation");
    check_keys(est, {"k", "grow", "shrink"});
    read(est, "k", a.chain.k);
    read(est, "grow", a.chain.grow);
    read(est, "shrink", a.chain.shrink);
    try {
      a.chain.validate();
    } catch (const std::invalid_argument& e) {
      fail(est, e.what());
    }
  }
  if (const YAML::Node vel = node["velocity"]) {
    if (a.kind != AlgorithmKind::rls_ab && a.kind != AlgorithmKind::ea_ab) fail(vel, "'velocity' applies to rls_ab and ea_ab only");
    require_map(vel, "velocity");
    check_keys(vel, {"initial", "success_factor", "failure_factor"});
    read(vel, "initial", a.velocity.initial);
    read(vel, "success_factor", a.velocity.success_factor);
    read(vel, "failure_factor", a.velocity.failure_factor);
    if (!(a.velocity.success_factor > 1)) fail(vel, "'success_factor' must be > 1");
    if (!(a.velocity.failure_factor > 0 && a.velocity.failure_factor < 1)) fail(vel, "'failure_factor' must be in (0, 1)");
  }
  for (const char* key : {"initial_mean", "mean_up", "mean_down"}) {
    if (node[key] && a.kind != AlgorithmKind::dd_ea_ab) fail(node[key], std::string("'") + key + "' applies to dd_ea_ab only");
  }
  read(node, "initial_mean", a.initial_mean);
  read(node, "mean_up", a.mean_up);
  read(node, "mean_down", a.mean_down);
  positive(node, "initial_mean", a.initial_mean);
  if (!(a.mean_up > 1)) fail(node["mean_up"], "'mean_up' must be > 1");
  if (!(a.mean_down > 0 && a.mean_down < 1)) fail(node["mean_down"], "'mean_down' must be in (0, 1)");

  a.label = default_label(a);
  read(node, "label", a.label);
  return a;
}

}  // namespace

ConfigError::ConfigError(const std::string& message, int line, int column)
    : std::runtime_error(located(message, line, column)), line_(line), column_(column) {}

std::string_view to_string(ProblemKind kind) { return name_of(kind, kProblems); }
std::string_view to_string(MetricKind kind) { return name_of(kind, kMetrics); }
std::string_view to_string(AlgorithmKind kind) { return name_of(kind, kAlgorithms); }
std::string_view to_string(MutationKind kind) { return name_of(kind, kMutations); }

const std::vector<std::string>& problem_kind_names() {
  static const std::vector<std::string> names = names_of(kProblems);
  return names;
}

const std::vector<std::string>& algorithm_kind_names() {
  static const std::vector<std::string> names = names_of(kAlgorithms);
  return names;
}

bool ProblemSpec::is_integer() const { return kind != ProblemKind::onemax && kind != ProblemKind::ruggedness; }

MetricKind ProblemSpec::effective_metric() const {
  if (metric) return *metric;
  return is_integer() ? MetricKind::permuted_l2 : MetricKind::ruggedness;
}

ExperimentConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(e.msg, e.mark.line + 1, e.mark.column + 1);
  }
  if (!root.IsMap()) throw ConfigError("config must be a mapping");
  check_keys(root, {"name", "problem", "problems", "algorithms", "repetitions", "master_seed", "budget", "output",
                    "record_wall_time", "stop_at_optimum"});

  ExperimentConfig c;
  read(root, "name", c.name);
  read(root, "master_seed", c.master_seed);
  read(root, "repetitions", c.repetitions);
  if (c.repetitions < 1) fail(root["repetitions"], "'repetitions' must be >= 1");
  if (const YAML::Node out = root["output"]) c.output = scalar<std::string>(out, "output");
  read(root, "record_wall_time", c.record_wall_time);
  read(root, "stop_at_optimum", c.stop_at_optimum);

  if (root["problem"] && root["problems"]) fail(root["problems"], "use either 'problem' or 'problems'");
  if (const YAML::Node one = root["problem"]) {
    c.problems.push_back(parse_problem(one, c.master_seed, 0));
  } else if (const YAML::Node list = root["problems"]) {
    if (!list.IsSequence() || list.size() == 0) fail(list, "'problems' must be a non-empty list");
    for (std::size_t i = 0; i < list.size(); ++i) c.problems.push_back(parse_problem(list[i], c.master_seed, i));
  } else {
    fail(root, "config needs 'problem' or 'problems'");
  }

  const YAML::Node algs = root["algorithms"];
  if (!algs) fail(root, "config needs 'algorithms'");
  if (!algs.IsSequence() || algs.size() == 0) fail(algs, "'algorithms' must be a non-empty list");
  for (std::size_t i = 0; i < algs.size(); ++i) {
    AlgorithmSpec a = parse_algorithm(algs[i]);
    for (const ProblemSpec& p : c.problems) {
      const bool binary_only = a.kind == AlgorithmKind::one_plus_lambda_ea ||
                               a.kind == AlgorithmKind::one_plus_lambda_lambda_ea;
      if (binary_only && a.mutation == MutationKind::classical && p.is_integer()) {
        fail(algs[i], "classical " + std::string(to_string(a.kind)) + " needs binary problems, got " + p.label);
      }
    }
    c.algorithms.push_back(std::move(a));
  }

  std::set<std::string> seen;
  for (std::size_t i = 0; i < c.problems.size(); ++i) {
    if (!seen.insert("p:" + c.problems[i].label).second) {
      fail(root["problems"] ? root["problems"][i] : root["problem"], "duplicate problem label '" + c.problems[i].label + "'");
    }
  }
  for (std::size_t i = 0; i < c.algorithms.size(); ++i) {
    if (!seen.insert("a:" + c.algorithms[i].label).second) {
      fail(algs[i], "duplicate algorithm label '" + c.algorithms[i].label + "'");
    }
  }

  if (const YAML::Node b = root["budget"]) {
    require_map(b, "budget");
    check_keys(b, {"max_evaluations", "max_iterations"});
    read(b, "max_evaluations", c.budget.max_evaluations);
    read(b, "max_iterations", c.budget.max_iterations);
    if (c.budget.max_evaluations && *c.budget.max_evaluations < 0) fail(b["max_evaluations"], "'max_evaluations' must be >= 0");
    if (c.budget.max_iterations && *c.budget.max_iterations < 0) fail(b["max_iterations"], "'max_iterations' must be >= 0");
  }
  if (!c.budget.max_evaluations && !c.budget.max_iterations) {
    fail(root["budget"] ? root["budget"] : root, "a budget with max_evaluations or max_iterations is required");
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

namespace {

Permutation instance_permutation(const ProblemSpec& spec) {
  if (spec.identity_permutation) return identity_permutation(spec.cardinality);
  RngStream rng(derive_seed(spec.instance_seed, {0x7065726dULL}));
  return random_permutation(spec.cardinality, rng);
}

IntegerFunction integer_kind(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::sphere: return IntegerFunction::sphere;
    case ProblemKind::ellipsoid: return IntegerFunction::ellipsoid;
    case ProblemKind::rastrigin: return IntegerFunction::rastrigin;
    case ProblemKind::sharp_ridge: return IntegerFunction::sharp_ridge;
    default: throw std::invalid_argument("not an integer problem");
  }
}

}  // namespace

std::shared_ptr<Problem> build_problem(const ProblemSpec& spec) {
  switch (spec.kind) {
    case ProblemKind::onemax: return std::make_shared<OneMaxProblem>(spec.n);
    case ProblemKind::ruggedness: return std::make_shared<RuggednessProblem>(spec.n, spec.v);
    default:
      return make_integer_problem(integer_kind(spec.kind), spec.n, spec.cardinality, instance_permutation(spec),
                                  spec.instance_seed);
  }
}

std::shared_ptr<Metric> build_metric(const ProblemSpec& spec) {
  switch (spec.effective_metric()) {
    case MetricKind::hamming: return std::make_shared<HammingMetric>();
    case MetricKind::ruggedness: return std::make_shared<RuggednessMetric>(spec.kind == ProblemKind::ruggedness ? spec.v : 1);
    case MetricKind::permuted_l2: return std::make_shared<PermutedL2Metric>(instance_permutation(spec));
  }
  throw std::logic_error("unhandled metric kind");
}

}  // namespace ddmut::bench
