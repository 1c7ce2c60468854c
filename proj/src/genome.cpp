#include "ddmut/genome.hpp"

#include <algorithm>
#include <stdexcept>

namespace ddmut {

SearchSpace::SearchSpace(std::vector<int> cardinalities) {
  if (cardinalities.empty()) throw std::invalid_argument("search space must have at least one component");
  for (int c : cardinalities) {
    if (c < 2) throw std::invalid_argument("cardinality must be >= 2, got " + std::to_string(c));
  }
  binary_ = std::all_of(cardinalities.begin(), cardinalities.end(), [](int c) { return c == 2; });
  cards_ = std::make_shared<const std::vector<int>>(std::move(cardinalities));
}

SearchSpace SearchSpace::binary(std::size_t n) { return SearchSpace(std::vector<int>(n, 2)); }

SearchSpace SearchSpace::uniform(std::size_t n, int cardinality) {
  return SearchSpace(std::vector<int>(n, cardinality));
}

bool SearchSpace::operator==(const SearchSpace& other) const {
  if (cards_ == other.cards_) return true;
  if (!cards_ || !other.cards_) return false;
  return *cards_ == *other.cards_;
}

Genome::Genome(std::vector<int> values, SearchSpace space) : values_(std::move(values)), space_(std::move(space)) {
  if (values_.size() != space_.size()) {
    throw std::invalid_argument("genome has " + std::to_string(values_.size()) + " components, search space has " +
                                std::to_string(space_.size()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] < 0 || values_[i] >= space_.cardinality(i)) {
      throw std::invalid_argument("component " + std::to_string(i) + " = " + std::to_string(values_[i]) +
                                  " outside [0, " + std::to_string(space_.cardinality(i)) + ")");
    }
  }
}

Genome::Genome(SearchSpace space) : values_(space.size(), 0), space_(std::move(space)) {}

void Genome::set(std::size_t i, int value) {
  if (value < 0 || value >= space_.cardinality(i)) {
    throw std::out_of_range("component " + std::to_string(i) + " = " + std::to_string(value) + " outside [0, " +
                            std::to_string(space_.cardinality(i)) + ")");
  }
  values_[i] = value;
}

std::string Genome::to_string() const {
  std::string out;
  const bool binary = space_.is_binary();
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!binary && i > 0) out += ' ';
    out += std::to_string(values_[i]);
  }
  return out;
}

void require_same_dimension(const Genome& a, const Genome& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("dimension mismatch: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }
}

}  // namespace ddmut
