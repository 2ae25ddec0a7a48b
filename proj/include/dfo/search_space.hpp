#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dfo/random.hpp"

namespace dfo {

/// Feasible region for candidate vectors: either an axis-aligned continuous
/// box or the binary hypercube {0,1}^dim (bits stored as 0.0 / 1.0 doubles).
class SearchSpace {
 public:
  enum class Kind { ContinuousBox, BinaryHypercube };

  static SearchSpace continuous(std::vector<double> lower,
                                std::vector<double> upper);
  static SearchSpace continuous(std::size_t dim, double lower, double upper);
  static SearchSpace binary(std::size_t dim);

  Kind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return dim_; }
  bool is_binary() const noexcept { return kind_ == Kind::BinaryHypercube; }

  /// Box bounds; only meaningful for ContinuousBox.
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  double width(std::size_t j) const { return upper_[j] - lower_[j]; }
  double max_width() const;

  bool contains(const std::vector<double>& v) const;

 private:
  SearchSpace() = default;

  Kind kind_ = Kind::ContinuousBox;
  std::size_t dim_ = 0;
  std::vector<double> lower_;
  std::vector<double> upper_;
};

/// A decision vector plus its (optional, cached) loss value.
struct Candidate {
  std::vector<double> values;
  std::optional<double> loss;
};

/// Ordered multiset of candidates. `sorted` means ascending loss.
struct Population {
  std::vector<Candidate> members;
  bool sorted = false;

  std::size_t size() const noexcept { return members.size(); }
  Candidate& operator[](std::size_t i) { return members[i]; }
  const Candidate& operator[](std::size_t i) const { return members[i]; }

  /// Stable ascending sort by loss; every member must be evaluated.
  void sort_by_loss();
};

/// Uniform draw from the space: per-coordinate uniform in [lower, upper) for
/// boxes, Bernoulli(0.5) bits for the hypercube. Loss left unset.
Candidate sample_uniform(const SearchSpace& space, RandomStream& rng);

/// Projects v onto the box. Throws UnsupportedSpaceError on binary spaces.
std::vector<double> clamp(const SearchSpace& space, std::vector<double> v);

}  // namespace dfo
