#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "topics/errors.hpp"
#include "topics/mds.hpp"
#include "topics/random.hpp"

namespace topics {

// Seeded uniform sample without replacement; input order is preserved and
// everything is returned when the cap is not exceeded.
template <class T>
std::vector<T> sample_without_replacement(const std::vector<T>& items,
                                          std::size_t cap, std::uint64_t seed) {
  if (cap < 1) {
    throw InputError("sample cap must be >= 1");
  }
  if (items.size() <= cap) {
    return items;
  }
  std::vector<std::size_t> indices(items.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    indices[i] = i;
  }
  std::mt19937_64 engine(seed);
  for (std::size_t i = 0; i < cap; ++i) {
    const std::size_t j = i + uniform_index(engine, indices.size() - i);
    std::swap(indices[i], indices[j]);
  }
  indices.resize(cap);
  std::sort(indices.begin(), indices.end());
  std::vector<T> sample;
  sample.reserve(cap);
  for (std::size_t index : indices) {
    sample.push_back(items[index]);
  }
  return sample;
}

inline std::vector<std::string> sample_papers(
    const std::vector<std::string>& doc_ids, std::size_t cap,
    std::uint64_t seed) {
  return sample_without_replacement(doc_ids, cap, seed);
}

template <class Scalar>
struct DensityModel {
  Points2d<Scalar> points;
  Scalar bandwidth = 0;
};

// Isotropic bivariate Gaussian kernel density at one location.
template <class Scalar>
Scalar kde_density_at(const DensityModel<Scalar>& model, Scalar x, Scalar y) {
  const Scalar h2 = model.bandwidth * model.bandwidth;
  Scalar sum = 0;
  for (Eigen::Index i = 0; i < model.points.rows(); ++i) {
    const Scalar dx = x - model.points(i, 0);
    const Scalar dy = y - model.points(i, 1);
    sum += std::exp(-(dx * dx + dy * dy) / (2 * h2));
  }
  const Scalar norm = static_cast<Scalar>(model.points.rows()) *
                      Scalar(2) * std::numbers::pi_v<Scalar> * h2;
  return sum / norm;
}

namespace detail {

// Mean log density of the held-out points under the model fit on the rest.
template <class Scalar>
Scalar cv_score(const Points2d<Scalar>& points,
                const std::vector<int>& fold_of, int folds, Scalar bandwidth) {
  const Eigen::Index m = points.rows();
  Scalar total = 0;
  for (int fold = 0; fold < folds; ++fold) {
    Eigen::Index train_count = 0;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (fold_of[static_cast<std::size_t>(i)] != fold) {
        ++train_count;
      }
    }
    DensityModel<Scalar> model;
    model.bandwidth = bandwidth;
    model.points.resize(train_count, 2);
    Eigen::Index row = 0;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (fold_of[static_cast<std::size_t>(i)] != fold) {
        model.points.row(row++) = points.row(i);
      }
    }
    for (Eigen::Index i = 0; i < m; ++i) {
      if (fold_of[static_cast<std::size_t>(i)] == fold) {
        total += std::log(kde_density_at(model, points(i, 0), points(i, 1)));
      }
    }
  }
  return total / static_cast<Scalar>(m);
}

}  // namespace detail

template <class Scalar>
struct KdeFitResult {
  DensityModel<Scalar> model;
  std::vector<Scalar> grid;       // bandwidths as evaluated
  std::vector<Scalar> cv_scores;  // aligned with grid
  std::vector<int> fold_assignment;  // fold id per input point
};

// Seeded k-fold cross-validation over the bandwidth grid, maximizing the
// mean held-out log likelihood; ties go to the smaller bandwidth.
template <class Scalar>
KdeFitResult<Scalar> kde_fit(const Points2d<Scalar>& points,
                             const std::vector<Scalar>& bandwidth_grid,
                             int folds = 5, std::uint64_t seed = 0) {
  const Eigen::Index m = points.rows();
  if (bandwidth_grid.empty()) {
    throw InputError("kde_fit: empty bandwidth grid");
  }
  if (folds < 2 || m < folds) {
    throw InputError("kde_fit: need at least as many points as folds (>= 2)");
  }
  for (Scalar h : bandwidth_grid) {
    if (!(h > Scalar(0))) {
      throw InputError("kde_fit: bandwidths must be positive");
    }
  }
  bool degenerate = true;
  for (Eigen::Index i = 1; i < m && degenerate; ++i) {
    degenerate = points.row(i) == points.row(0);
  }
  if (degenerate) {
    throw InputError(
        "kde_fit: all points identical; inspect the data directly instead of "
        "estimating a density");
  }

  // shuffled indices split into `folds` contiguous chunks
  std::vector<std::size_t> order(static_cast<std::size_t>(m));
  for (std::size_t i = 0; i < order.size(); ++i) {
    order[i] = i;
  }
  std::mt19937_64 engine(seed);
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    const std::size_t j = i + uniform_index(engine, order.size() - i);
    std::swap(order[i], order[j]);
  }
  std::vector<int> fold_of(static_cast<std::size_t>(m));
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    fold_of[order[pos]] = static_cast<int>(pos * folds / order.size());
  }

  KdeFitResult<Scalar> result;
  result.grid = bandwidth_grid;
  result.cv_scores.reserve(bandwidth_grid.size());
  bool have_best = false;
  Scalar best_score = 0;
  Scalar best_bandwidth = 0;
  for (Scalar bandwidth : bandwidth_grid) {
    const Scalar score = detail::cv_score(points, fold_of, folds, bandwidth);
    result.cv_scores.push_back(score);
    const bool wins = !have_best || score > best_score ||
                      (score == best_score && bandwidth < best_bandwidth);
    if (wins) {
      have_best = true;
      best_score = score;
      best_bandwidth = bandwidth;
    }
  }

  result.model.points = points;
  result.model.bandwidth = best_bandwidth;
  result.fold_assignment = std::move(fold_of);
  return result;
}

// 20 log-spaced bandwidths spanning [0.01 R, R] where R is the root mean
// square pairwise distance of the points.
template <class Scalar>
std::vector<Scalar> default_bandwidth_grid(const Points2d<Scalar>& points,
                                           int count = 20) {
  const Eigen::Index m = points.rows();
  if (m < 2 || count < 1) {
    throw InputError("default_bandwidth_grid: need >= 2 points and count >= 1");
  }
  Scalar sum = 0;
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      sum += (points.row(i) - points.row(j)).squaredNorm();
    }
  }
  const Scalar rms = std::sqrt(sum / static_cast<Scalar>(m * (m - 1) / 2));
  if (!(rms > Scalar(0))) {
    throw InputError("default_bandwidth_grid: degenerate points");
  }
  std::vector<Scalar> grid;
  grid.reserve(static_cast<std::size_t>(count));
  if (count == 1) {
    grid.push_back(rms);
    return grid;
  }
  const Scalar low = std::log(Scalar(0.01) * rms);
  const Scalar high = std::log(rms);
  for (int i = 0; i < count; ++i) {
    grid.push_back(std::exp(low + (high - low) * static_cast<Scalar>(i) /
                                      static_cast<Scalar>(count - 1)));
  }
  return grid;
}

template <class Scalar>
struct DensityGrid {
  DenseVector<Scalar> xs;
  DenseVector<Scalar> ys;
  DenseMatrix<Scalar> values;  // values(iy, ix) at (xs(ix), ys(iy))
};

template <class Scalar>
DensityGrid<Scalar> kde_density_grid(const DensityModel<Scalar>& model,
                                     Scalar x_min, Scalar x_max, Scalar y_min,
                                     Scalar y_max, int resolution) {
  if (resolution < 2) {
    throw InputError("kde_density_grid: resolution must be >= 2");
  }
  if (!(x_min < x_max) || !(y_min < y_max)) {
    throw InputError("kde_density_grid: inverted or empty ranges");
  }
  DensityGrid<Scalar> grid;
  grid.xs.resize(resolution);
  grid.ys.resize(resolution);
  for (int i = 0; i < resolution; ++i) {
    const Scalar fraction =
        static_cast<Scalar>(i) / static_cast<Scalar>(resolution - 1);
    grid.xs(i) = x_min + (x_max - x_min) * fraction;
    grid.ys(i) = y_min + (y_max - y_min) * fraction;
  }
  grid.values.resize(resolution, resolution);
  for (int iy = 0; iy < resolution; ++iy) {
    for (int ix = 0; ix < resolution; ++ix) {
      grid.values(iy, ix) = kde_density_at(model, grid.xs(ix), grid.ys(iy));
    }
  }
  return grid;
}

}  // namespace topics
