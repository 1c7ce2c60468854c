#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "ddmut/genome.hpp"
#include "ddmut/rng.hpp"

namespace ddmut {

/// Objective to maximize. Must not throw; -infinity marks forbidden points.
using Objective = std::function<double(const Genome&)>;
/// Checked on the best individual after every evaluation; true stops the run.
using StopPredicate = std::function<bool(const Genome&, double)>;

struct UmdaConfig {
  int mu = 50;
  int lambda = 100;
  /// Maximum number of objective evaluations; a final generation may be truncated.
  std::int64_t budget = 1000;
  /// Optional warm start: the anchor's values get initial mass 0.5.
  std::optional<Genome> anchor;

  /// Throws std::invalid_argument unless 1 <= mu <= lambda and budget >= 0.
  void validate() const;
};

/// Independent categorical marginals, one per component. Probabilities are kept
/// in [margin_i, 1 - margin_i (c_i - 1)] with margin_i = 1 / (n c_i).
class MarginalModel {
 public:
  /// Uniform marginals.
  explicit MarginalModel(SearchSpace space);
  /// Mass 0.5 on the anchor's value in every component, the rest spread uniformly.
  static MarginalModel warm_start(const Genome& anchor);

  const SearchSpace& space() const { return space_; }
  double probability(std::size_t component, int value) const { return probs_[offset_[component] + value]; }
  double margin(std::size_t component) const { return margin_[component]; }

  /// Draws every component independently into `out`, which must belong to the same space.
  void sample(RngStream& rng, Genome& out) const;

  /// Sets each marginal to the empirical frequency among `selected`, then clamps
  /// into the margin bounds while keeping every vector normalized.
  void update(const std::vector<const Genome*>& selected);

 private:
  void clamp_component(std::size_t i);
  void rebuild_cdf(std::size_t i);

  SearchSpace space_;
  std::vector<std::size_t> offset_;
  std::vector<double> probs_;
  std::vector<double> cdf_;
  std::vector<double> margin_;
};

struct UmdaResult {
  Genome best;
  /// -infinity when nothing was evaluated (budget 0).
  double value = 0.0;
  bool evaluated = false;
  std::int64_t evaluations = 0;
  int generations = 0;
  bool stopped = false;
};

/// Called after every generation with the model and the result so far.
using GenerationObserver = std::function<void(const MarginalModel&, const UmdaResult&)>;

/// Univariate marginal distribution algorithm on a (possibly categorical) space.
/// Each generation samples lambda genomes, keeps the mu best (earlier sample
/// wins ties) and re-estimates the marginals from them.
UmdaResult umda_run(const Objective& objective, const SearchSpace& space, const UmdaConfig& config, RngStream& rng,
                    const StopPredicate& stop = {}, const GenerationObserver& observer = {});

}  // namespace ddmut
