#pragma once

#include <optional>
#include <string>

#include "ddmut/budget.hpp"
#include "ddmut/genome.hpp"

namespace ddmut {

/// Black-box objective, maximized. evaluate() must be deterministic.
class Problem {
 public:
  virtual ~Problem() = default;

  virtual std::string name() const = 0;
  virtual const SearchSpace& space() const = 0;
  virtual double evaluate(const Genome& x) const = 0;
  /// Value of the global optimum when it is known.
  virtual std::optional<double> optimum() const { return std::nullopt; }

  std::size_t dimension() const { return space().size(); }
};

/// Distance over genomes. May be a pseudo-metric (distinct points at distance 0).
class Metric {
 public:
  virtual ~Metric() = default;

  virtual std::string name() const = 0;
  virtual double distance(const Genome& x, const Genome& y) const = 0;
};

/// Evaluates x and charges one fitness evaluation. Throws BudgetExhausted when
/// the cap is already reached; the counter is untouched in that case.
double evaluate_counted(const Problem& problem, const Genome& x, Budget& budget);

}  // namespace ddmut
