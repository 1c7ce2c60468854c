#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace ddmut {

/// Per-component cardinalities of an integer search space. Cheap to copy; the
/// underlying vector is shared and immutable.
class SearchSpace {
 public:
  SearchSpace() = default;
  explicit SearchSpace(std::vector<int> cardinalities);

  static SearchSpace binary(std::size_t n);
  static SearchSpace uniform(std::size_t n, int cardinality);

  std::size_t size() const { return cards_ ? cards_->size() : 0; }
  int cardinality(std::size_t i) const { return (*cards_)[i]; }
  std::span<const int> cardinalities() const { return *cards_; }
  bool is_binary() const { return binary_; }

  bool operator==(const SearchSpace& other) const;

 private:
  std::shared_ptr<const std::vector<int>> cards_;
  bool binary_ = false;
};

/// A point of the search space: n integer components with 0 <= x_i < c_i.
class Genome {
 public:
  Genome() = default;
  Genome(std::vector<int> values, SearchSpace space);

  /// All-zeros genome.
  explicit Genome(SearchSpace space);

  std::size_t size() const { return values_.size(); }
  int operator[](std::size_t i) const { return values_[i]; }
  std::span<const int> values() const { return values_; }
  const SearchSpace& space() const { return space_; }

  /// Throws std::out_of_range if value is outside [0, c_i).
  void set(std::size_t i, int value);

  bool operator==(const Genome& other) const { return values_ == other.values_; }

  std::string to_string() const;

 private:
  std::vector<int> values_;
  SearchSpace space_;
};

/// Throws std::invalid_argument unless both genomes have the same dimension.
void require_same_dimension(const Genome& a, const Genome& b);

}  // namespace ddmut
