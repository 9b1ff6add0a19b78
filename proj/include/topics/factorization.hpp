#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "topics/errors.hpp"
#include "topics/random.hpp"

namespace topics {

template <class Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

struct FactorizationOptions {
  int max_iterations = 400;
  double relative_tolerance = 1e-5;  // stop when (prev-err)/prev drops below
  double denominator_guard = 1e-12;
};

template <class Scalar>
struct FitTrace {
  std::vector<Scalar> errors;  // errors[0] is the error of the initial factors
  int iterations = 0;
  bool converged = false;
  std::uint64_t seed = 0;
};

template <class Scalar>
struct FactorPair {
  DenseMatrix<Scalar> W;  // n x t
  DenseMatrix<Scalar> H;  // t x d
};

template <class Scalar>
Scalar frobenius_norm(const Eigen::SparseMatrix<Scalar>& m) {
  Scalar sum = 0;
  for (int col = 0; col < m.outerSize(); ++col) {
    for (typename Eigen::SparseMatrix<Scalar>::InnerIterator it(m, col); it;
         ++it) {
      sum += it.value() * it.value();
    }
  }
  return std::sqrt(sum);
}

// ||V - WH||_F computed from the explicit residual. This is the reference
// route; factorize_matrix tracks the same quantity through Gram matrices.
template <class Scalar, class DW, class DH>
Scalar reconstruction_error(const Eigen::SparseMatrix<Scalar>& V,
                            const Eigen::MatrixBase<DW>& W,
                            const Eigen::MatrixBase<DH>& H) {
  if (W.rows() != V.rows() || H.cols() != V.cols() || W.cols() != H.rows()) {
    throw InputError("reconstruction_error: shape mismatch");
  }
  DenseMatrix<Scalar> residual = W * H;
  for (int col = 0; col < V.outerSize(); ++col) {
    for (typename Eigen::SparseMatrix<Scalar>::InnerIterator it(V, col); it;
         ++it) {
      residual(it.row(), it.col()) -= it.value();
    }
  }
  return residual.norm();
}

template <class DV, class DW, class DH>
typename DV::Scalar reconstruction_error(const Eigen::MatrixBase<DV>& V,
                                         const Eigen::MatrixBase<DW>& W,
                                         const Eigen::MatrixBase<DH>& H) {
  if (W.rows() != V.rows() || H.cols() != V.cols() || W.cols() != H.rows()) {
    throw InputError("reconstruction_error: shape mismatch");
  }
  return (V.derived() - W.derived() * H.derived()).norm();
}

template <class Scalar>
FactorPair<Scalar> random_factor_pair(Eigen::Index n, Eigen::Index d,
                                      Eigen::Index t, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  FactorPair<Scalar> factors;
  factors.W.resize(n, t);
  for (Eigen::Index j = 0; j < t; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      factors.W(i, j) = static_cast<Scalar>(uniform_unit(engine));
    }
  }
  factors.H.resize(t, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < t; ++i) {
      factors.H(i, j) = static_cast<Scalar>(uniform_unit(engine));
    }
  }
  return factors;
}

namespace detail {

template <class Scalar>
void check_factorizable(const Eigen::SparseMatrix<Scalar>& V, Eigen::Index t) {
  for (int col = 0; col < V.outerSize(); ++col) {
    typename Eigen::SparseMatrix<Scalar>::InnerIterator it(V, col);
    if (!it) {
      throw InputError("input matrix has an all-zero column at index " +
                       std::to_string(col));
    }
  }
  if (t < 1 || t >= std::min(V.rows(), V.cols())) {
    throw InputError("topic count must satisfy 1 <= t < min(n, d)");
  }
}

template <class Scalar, class DV>
void check_factorizable(const Eigen::MatrixBase<DV>& V, Eigen::Index t) {
  for (Eigen::Index col = 0; col < V.cols(); ++col) {
    if (V.col(col).isZero(Scalar(0))) {
      throw InputError("input matrix has an all-zero column at index " +
                       std::to_string(col));
    }
  }
  if (t < 1 || t >= std::min(V.rows(), V.cols())) {
    throw InputError("topic count must satisfy 1 <= t < min(n, d)");
  }
}

template <class Scalar>
Scalar squared_frobenius(const Eigen::SparseMatrix<Scalar>& V) {
  Scalar s = frobenius_norm(V);
  return s * s;
}

template <class Scalar, class DV>
Scalar squared_frobenius(const Eigen::MatrixBase<DV>& V) {
  return V.squaredNorm();
}

}  // namespace detail

// Frobenius multiplicative updates, H then W each iteration, batch updates
// over the full matrix. Deterministic for a fixed seed.
template <class Scalar, class MatV>
std::pair<FactorPair<Scalar>, FitTrace<Scalar>> factorize_matrix(
    const MatV& V, Eigen::Index t, std::uint64_t seed,
    const FactorizationOptions& options = {}) {
  if (options.max_iterations < 1) {
    throw InputError("max_iterations must be >= 1");
  }
  detail::check_factorizable<Scalar>(V, t);

  const Eigen::Index n = V.rows();
  const Eigen::Index d = V.cols();
  const auto delta = static_cast<Scalar>(options.denominator_guard);
  const Scalar v_squared = detail::squared_frobenius<Scalar>(V);

  FactorPair<Scalar> factors = random_factor_pair<Scalar>(n, d, t, seed);
  DenseMatrix<Scalar>& W = factors.W;
  DenseMatrix<Scalar>& H = factors.H;

  FitTrace<Scalar> trace;
  trace.seed = seed;
  trace.errors.reserve(static_cast<std::size_t>(options.max_iterations) + 1);

  // error^2 = ||V||^2 - 2 tr(V' W H) + tr((W'W)(HH')), clamped against
  // cancellation near exact fits.
  auto gram_error = [&](const DenseMatrix<Scalar>& vht) {
    const Scalar cross = W.cwiseProduct(vht).sum();
    const DenseMatrix<Scalar> wtw = W.transpose() * W;
    const DenseMatrix<Scalar> hht = H * H.transpose();
    const Scalar squared =
        v_squared - Scalar(2) * cross + wtw.cwiseProduct(hht).sum();
    return std::sqrt(std::max(squared, Scalar(0)));
  };

  {
    const DenseMatrix<Scalar> vht = V * H.transpose();
    trace.errors.push_back(gram_error(vht));
  }

  for (int iteration = 0; iteration < options.max_iterations; ++iteration) {
    const DenseMatrix<Scalar> wtv = W.transpose() * V;
    const DenseMatrix<Scalar> wtw = W.transpose() * W;
    H.array() *= wtv.array() / ((wtw * H).array() + delta);

    const DenseMatrix<Scalar> vht = V * H.transpose();
    const DenseMatrix<Scalar> hht = H * H.transpose();
    W.array() *= vht.array() / ((W * hht).array() + delta);

    const Scalar error = gram_error(vht);
    const Scalar previous = trace.errors.back();
    trace.errors.push_back(error);
    trace.iterations = iteration + 1;
    if (previous <= Scalar(0) ||
        (previous - error) / previous <
            static_cast<Scalar>(options.relative_tolerance)) {
      trace.converged = true;
      break;
    }
  }
  return {std::move(factors), std::move(trace)};
}

// Step 1 scales every W column to unit L1 sum and pushes the scale into the
// matching H row, leaving WH unchanged. Step 2 scales every H column to unit
// L1 sum; the per-document scales are dropped.
template <class Scalar>
void finalize_factors(FactorPair<Scalar>& factors) {
  DenseMatrix<Scalar>& W = factors.W;
  DenseMatrix<Scalar>& H = factors.H;
  for (Eigen::Index j = 0; j < W.cols(); ++j) {
    const Scalar scale = W.col(j).sum();
    if (scale <= Scalar(0)) {
      throw InputError("degenerate topic " + std::to_string(j) +
                       ": all-zero topic vector");
    }
    W.col(j) /= scale;
    H.row(j) *= scale;
  }
  for (Eigen::Index i = 0; i < H.cols(); ++i) {
    const Scalar scale = H.col(i).sum();
    if (scale <= Scalar(0)) {
      throw InputError("degenerate document " + std::to_string(i) +
                       ": all-zero embedding");
    }
    H.col(i) /= scale;
  }
}

// Multiplicative H updates with W fixed, started from the uniform vector 1/t,
// followed by L1 normalization onto the simplex.
template <class Scalar, class VecV>
DenseVector<Scalar> embed_column(const DenseMatrix<Scalar>& W, const VecV& column,
                                 int max_iterations = 400,
                                 double relative_tolerance = 1e-9,
                                 double denominator_guard = 1e-12) {
  if (column.rows() != W.rows()) {
    throw InputError("embed_column: vector length does not match vocabulary");
  }
  const DenseVector<Scalar> v = column;  // accepts sparse or dense input
  const DenseVector<Scalar> wtv = W.transpose() * v;
  if (wtv.isZero(Scalar(0))) {
    throw InputError(
        "embed_column: document shares no weight with any topic (zero or "
        "disjoint vector)");
  }

  const Eigen::Index t = W.cols();
  const auto delta = static_cast<Scalar>(denominator_guard);
  const DenseMatrix<Scalar> wtw = W.transpose() * W;
  DenseVector<Scalar> h =
      DenseVector<Scalar>::Constant(t, Scalar(1) / static_cast<Scalar>(t));

  Scalar previous = (v - W * h).norm();
  for (int iteration = 0; iteration < max_iterations; ++iteration) {
    h.array() *= wtv.array() / ((wtw * h).array() + delta);
    const Scalar error = (v - W * h).norm();
    if (previous <= Scalar(0) ||
        (previous - error) / previous <
            static_cast<Scalar>(relative_tolerance)) {
      break;
    }
    previous = error;
  }

  const Scalar total = h.sum();
  if (total <= Scalar(0)) {
    throw InputError("embed_column: embedding collapsed to zero");
  }
  return h / total;
}

}  // namespace topics
