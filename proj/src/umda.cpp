#include "ddmut/umda.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ddmut {

void UmdaConfig::validate() const {
  if (mu < 1) throw std::invalid_argument("UMDA mu must be >= 1");
  if (lambda < mu) throw std::invalid_argument("UMDA lambda must be >= mu");
  if (budget < 0) throw std::invalid_argument("UMDA budget must be >= 0");
  if (anchor && anchor->size() == 0) throw std::invalid_argument("UMDA anchor is empty");
}

MarginalModel::MarginalModel(SearchSpace space) : space_(std::move(space)) {
  const std::size_t n = space_.size();
  offset_.resize(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) offset_[i + 1] = offset_[i] + space_.cardinality(i);
  probs_.resize(offset_[n]);
  cdf_.resize(offset_[n]);
  margin_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int c = space_.cardinality(i);
    margin_[i] = 1.0 / (static_cast<double>(n) * c);
    std::fill(probs_.begin() + offset_[i], probs_.begin() + offset_[i + 1], 1.0 / c);
    rebuild_cdf(i);
  }
}

MarginalModel MarginalModel::warm_start(const Genome& anchor) {
  MarginalModel model(anchor.space());
  for (std::size_t i = 0; i < anchor.size(); ++i) {
    const int c = model.space_.cardinality(i);
    for (int v = 0; v < c; ++v) model.probs_[model.offset_[i] + v] = v == anchor[i] ? 0.5 : 0.5 / (c - 1);
    model.clamp_component(i);
    model.rebuild_cdf(i);
  }
  return model;
}

void MarginalModel::rebuild_cdf(std::size_t i) {
  double acc = 0.0;
  for (std::size_t k = offset_[i]; k < offset_[i + 1]; ++k) {
    acc += probs_[k];
    cdf_[k] = acc;
  }
  cdf_[offset_[i + 1] - 1] = 1.0;
}

void MarginalModel::clamp_component(std::size_t i) {
  const std::size_t lo = offset_[i];
  const std::size_t hi = offset_[i + 1];
  const double m = margin_[i];
  const double c = static_cast<double>(hi - lo);
  // Entries below the margin are raised to it; the others share the remaining
  // mass in proportion to their excess over the margin.
  double excess = 0.0;
  for (std::size_t k = lo; k < hi; ++k) {
    if (probs_[k] > m) excess += probs_[k] - m;
  }
  const double free_mass = 1.0 - c * m;
  if (excess <= 0.0) {
    std::fill(probs_.begin() + lo, probs_.begin() + hi, 1.0 / c);
    return;
  }
  for (std::size_t k = lo; k < hi; ++k) {
    probs_[k] = probs_[k] > m ? m + (probs_[k] - m) * free_mass / excess : m;
  }
}

void MarginalModel::update(const std::vector<const Genome*>& selected) {
  if (selected.empty()) return;
  std::fill(probs_.begin(), probs_.end(), 0.0);
  const double w = 1.0 / static_cast<double>(selected.size());
  for (const Genome* g : selected) {
    for (std::size_t i = 0; i < g->size(); ++i) probs_[offset_[i] + (*g)[i]] += w;
  }
  for (std::size_t i = 0; i < space_.size(); ++i) {
    clamp_component(i);
    rebuild_cdf(i);
  }
}

void MarginalModel::sample(RngStream& rng, Genome& out) const {
  for (std::size_t i = 0; i < space_.size(); ++i) {
    const double u = rng.uniform01();
    const std::size_t lo = offset_[i];
    const std::size_t hi = offset_[i + 1];
    std::size_t k = lo;
    while (k + 1 < hi && u >= cdf_[k]) ++k;
    out.set(i, static_cast<int>(k - lo));
  }
}

UmdaResult umda_run(const Objective& objective, const SearchSpace& space, const UmdaConfig& config, RngStream& rng,
                    const StopPredicate& stop, const GenerationObserver& observer) {
  config.validate();
  MarginalModel model = config.anchor ? MarginalModel::warm_start(*config.anchor) : MarginalModel(space);

  UmdaResult result;
  result.best = Genome(space);
  result.value = -std::numeric_limits<double>::infinity();

  if (config.budget == 0) {
    model.sample(rng, result.best);
    return result;
  }

  std::vector<Genome> population(config.lambda, Genome(space));
  std::vector<double> values(config.lambda);
  std::vector<std::size_t> order(config.lambda);
  std::vector<const Genome*> selected;
  selected.reserve(config.mu);

  while (result.evaluations < config.budget && !result.stopped) {
    const auto size = static_cast<std::size_t>(
        std::min<std::int64_t>(config.lambda, config.budget - result.evaluations));
    std::size_t sampled = 0;
    for (; sampled < size; ++sampled) {
      model.sample(rng, population[sampled]);
      values[sampled] = objective(population[sampled]);
      ++result.evaluations;
      if (!result.evaluated || values[sampled] > result.value) {
        result.best = population[sampled];
        result.value = values[sampled];
        result.evaluated = true;
      }
      if (stop && stop(result.best, result.value)) {
        result.stopped = true;
        ++sampled;
        break;
      }
    }
    ++result.generations;

    order.resize(sampled);
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t keep = std::min<std::size_t>(config.mu, sampled);
    std::partial_sort(order.begin(), order.begin() + keep, order.end(), [&](std::size_t a, std::size_t b) {
      if (values[a] != values[b]) return values[a] > values[b];
      return a < b;
    });
    selected.clear();
    for (std::size_t k = 0; k < keep; ++k) selected.push_back(&population[order[k]]);
    model.update(selected);
    order.resize(config.lambda);

    if (observer) observer(model, result);
  }
  return result;
}

}  // namespace ddmut
