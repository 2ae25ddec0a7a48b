#include "dfo/search_space.hpp"

#include <algorithm>
#include <stdexcept>

#include "dfo/errors.hpp"

namespace dfo {

SearchSpace SearchSpace::continuous(std::vector<double> lower,
                                    std::vector<double> upper) {
  if (lower.empty() || lower.size() != upper.size())
    throw std::invalid_argument("SearchSpace: bounds must be nonempty and equal length");
  for (std::size_t j = 0; j < lower.size(); ++j) {
    if (!(lower[j] < upper[j]))
      throw std::invalid_argument("SearchSpace: lower[j] < upper[j] required");
  }
  SearchSpace s;
  s.kind_ = Kind::ContinuousBox;
  s.dim_ = lower.size();
  s.lower_ = std::move(lower);
  s.upper_ = std::move(upper);
  return s;
}

SearchSpace SearchSpace::continuous(std::size_t dim, double lower, double upper) {
  return continuous(std::vector<double>(dim, lower), std::vector<double>(dim, upper));
}

SearchSpace SearchSpace::binary(std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("SearchSpace: dim >= 1 required");
  SearchSpace s;
  s.kind_ = Kind::BinaryHypercube;
  s.dim_ = dim;
  return s;
}

double SearchSpace::max_width() const {
  double w = 0.0;
  for (std::size_t j = 0; j < dim_; ++j) w = std::max(w, width(j));
  return w;
}

bool SearchSpace::contains(const std::vector<double>& v) const {
  if (v.size() != dim_) return false;
  if (kind_ == Kind::BinaryHypercube) {
    return std::all_of(v.begin(), v.end(),
                       [](double x) { return x == 0.0 || x == 1.0; });
  }
  for (std::size_t j = 0; j < dim_; ++j) {
    if (v[j] < lower_[j] || v[j] > upper_[j]) return false;
  }
  return true;
}

void Population::sort_by_loss() {
  for (const Candidate& c : members) {
    if (!c.loss)
      throw std::logic_error("Population::sort_by_loss: unevaluated member");
  }
  std::stable_sort(members.begin(), members.end(),
                   [](const Candidate& a, const Candidate& b) {
                     return *a.loss < *b.loss;
                   });
  sorted = true;
}

Candidate sample_uniform(const SearchSpace& space, RandomStream& rng) {
  Candidate c;
  c.values.resize(space.dim());
  if (space.is_binary()) {
    for (std::size_t j = 0; j < space.dim(); ++j)
      c.values[j] = rng.uniform() < 0.5 ? 1.0 : 0.0;
  } else {
    for (std::size_t j = 0; j < space.dim(); ++j)
      c.values[j] = rng.uniform(space.lower()[j], space.upper()[j]);
  }
  return c;
}

std::vector<double> clamp(const SearchSpace& space, std::vector<double> v) {
  if (space.is_binary())
    throw UnsupportedSpaceError("clamp: binary hypercube has no box to project onto");
  if (v.size() != space.dim())
    throw std::invalid_argument("clamp: dimension mismatch");
  for (std::size_t j = 0; j < v.size(); ++j)
    v[j] = std::clamp(v[j], space.lower()[j], space.upper()[j]);
  return v;
}

}  // namespace dfo
