#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "topics/errors.hpp"
#include "topics/factorization.hpp"
#include "topics/random.hpp"

namespace topics {

template <class Scalar>
using Points2d = Eigen::Matrix<Scalar, Eigen::Dynamic, 2>;

// Symmetric matrix of Euclidean distances, zero diagonal.
template <class Scalar>
DenseMatrix<Scalar> pairwise_distances(
    const std::vector<DenseVector<Scalar>>& vectors) {
  if (vectors.size() < 2) {
    throw InputError("pairwise_distances: need at least two vectors");
  }
  const auto m = static_cast<Eigen::Index>(vectors.size());
  for (const auto& v : vectors) {
    if (v.size() != vectors.front().size()) {
      throw InputError("pairwise_distances: vectors of unequal length");
    }
  }
  DenseMatrix<Scalar> distances = DenseMatrix<Scalar>::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const Scalar d = (vectors[i] - vectors[j]).norm();
      distances(i, j) = d;
      distances(j, i) = d;
    }
  }
  return distances;
}

// Raw stress: sum over unordered pairs of squared differences between target
// and embedded distances.
template <class Scalar>
Scalar stress(const DenseMatrix<Scalar>& distances,
              const Points2d<Scalar>& points) {
  if (distances.rows() != distances.cols() ||
      points.rows() != distances.rows()) {
    throw InputError("stress: shape mismatch");
  }
  Scalar total = 0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < points.rows(); ++j) {
      const Scalar d = (points.row(i) - points.row(j)).norm();
      const Scalar diff = distances(i, j) - d;
      total += diff * diff;
    }
  }
  return total;
}

struct MdsOptions {
  int n_init = 4;
  int max_iterations = 300;
  double tolerance = 1e-7;  // relative stress improvement
};

template <class Scalar>
struct Embedding2d {
  Points2d<Scalar> points;
  Scalar stress = 0;
  std::uint64_t seed = 0;
  int iterations = 0;
  std::vector<Scalar> stress_history;  // of the winning start
};

namespace detail {

template <class Scalar>
Embedding2d<Scalar> smacof_run(const DenseMatrix<Scalar>& distances,
                               std::uint64_t seed, const MdsOptions& options) {
  const Eigen::Index m = distances.rows();
  const Scalar scale = distances.maxCoeff();

  std::mt19937_64 engine(seed);
  Points2d<Scalar> points(m, 2);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index c = 0; c < 2; ++c) {
      points(i, c) = static_cast<Scalar>(2 * uniform_unit(engine) - 1) *
                     (scale > Scalar(0) ? scale : Scalar(1));
    }
  }

  Embedding2d<Scalar> result;
  result.seed = seed;
  result.stress_history.push_back(stress(distances, points));

  DenseMatrix<Scalar> b(m, m);
  for (int iteration = 0; iteration < options.max_iterations; ++iteration) {
    // Guttman transform with unit weights: X <- B(X) X / m
    b.setZero();
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) {
        if (i == j) {
          continue;
        }
        const Scalar d = (points.row(i) - points.row(j)).norm();
        if (d > Scalar(0)) {
          b(i, j) = -distances(i, j) / d;
          b(i, i) -= b(i, j);
        }
      }
    }
    points = (b * points / static_cast<Scalar>(m)).eval();

    const Scalar current = stress(distances, points);
    const Scalar previous = result.stress_history.back();
    result.stress_history.push_back(current);
    result.iterations = iteration + 1;
    if (previous <= Scalar(0) ||
        (previous - current) / previous <
            static_cast<Scalar>(options.tolerance)) {
      break;
    }
  }

  result.stress = result.stress_history.back();
  result.points = std::move(points);
  return result;
}

}  // namespace detail

// SMACOF stress majorization from n_init seeded random starts; returns the
// embedding with the lowest raw stress. Deterministic for a fixed seed.
template <class Scalar>
Embedding2d<Scalar> mds(const DenseMatrix<Scalar>& distances,
                        std::uint64_t seed, const MdsOptions& options = {}) {
  if (distances.rows() != distances.cols() || distances.rows() < 2) {
    throw InputError("mds: need a square distance matrix of size >= 2");
  }
  if (!distances.allFinite()) {
    throw InputError("mds: non-finite distances");
  }
  if (options.n_init < 1 || options.max_iterations < 1) {
    throw InputError("mds: n_init and max_iterations must be >= 1");
  }

  Embedding2d<Scalar> best;
  for (int start = 0; start < options.n_init; ++start) {
    Embedding2d<Scalar> candidate = detail::smacof_run(
        distances, seed + static_cast<std::uint64_t>(start), options);
    if (start == 0 || candidate.stress < best.stress) {
      best = std::move(candidate);
    }
  }
  return best;
}

}  // namespace topics
