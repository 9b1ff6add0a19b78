#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "topics/errors.hpp"

namespace topics {

// Shannon entropy with natural logarithm and the convention 0*ln(0) = 0.
template <class Derived>
typename Derived::Scalar shannon_entropy(const Eigen::MatrixBase<Derived>& p) {
  using Scalar = typename Derived::Scalar;
  Scalar h = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const Scalar value = p(i);
    if (value > Scalar(0)) {
      h -= value * std::log(value);
    }
  }
  return h;
}

// exp(H(p)): the number of evenly weighted components with the same entropy.
// Lies in [1, dim(p)] for simplex vectors.
template <class Derived>
typename Derived::Scalar effective_species(const Eigen::MatrixBase<Derived>& p) {
  return std::exp(shannon_entropy(p));
}

// Component-wise arithmetic mean; the mean of simplex vectors stays on the
// simplex.
template <class Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> centroid(
    const std::vector<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>& vectors) {
  if (vectors.empty()) {
    throw InputError("centroid of an empty set");
  }
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> sum =
      Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(vectors.front().size());
  for (const auto& v : vectors) {
    if (v.size() != sum.size()) {
      throw InputError("centroid: vectors of unequal length");
    }
    sum += v;
  }
  return sum / static_cast<Scalar>(vectors.size());
}

}  // namespace topics
