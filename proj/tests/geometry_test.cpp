#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "topics/errors.hpp"
#include "topics/kde.hpp"
#include "topics/mds.hpp"
#include "support/oracles.hpp"

using namespace topics;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double value : values) {
    v(i++) = value;
  }
  return v;
}

Points2d<double> random_plane_points(std::uint64_t seed, int count,
                                     double scale = 1.0) {
  std::mt19937_64 engine(seed);
  Points2d<double> points(count, 2);
  for (int i = 0; i < count; ++i) {
    points(i, 0) = scale * (2.0 * uniform_unit(engine) - 1.0);
    points(i, 1) = scale * (2.0 * uniform_unit(engine) - 1.0);
  }
  return points;
}

Eigen::MatrixXd distances_of(const Points2d<double>& points) {
  std::vector<Eigen::VectorXd> rows;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    rows.push_back(points.row(i).transpose());
  }
  return pairwise_distances(rows);
}

std::vector<std::array<double, 2>> as_arrays(const Points2d<double>& points) {
  std::vector<std::array<double, 2>> out;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    out.push_back({points(i, 0), points(i, 1)});
  }
  return out;
}

}  // namespace

TEST_CASE("pairwise_distances basics") {
  const auto d = pairwise_distances<double>({vec({0, 0}), vec({3, 4})});
  CHECK(d(0, 1) == doctest::Approx(5.0));
  CHECK(d(1, 0) == doctest::Approx(5.0));
  CHECK(d(0, 0) == 0.0);

  const auto same = pairwise_distances<double>({vec({1, 2}), vec({1, 2})});
  CHECK(same(0, 1) == 0.0);

  CHECK_THROWS_AS(pairwise_distances<double>({vec({1})}), InputError);
  CHECK_THROWS_AS(pairwise_distances<double>({vec({1}), vec({1, 2})}),
                  InputError);
}

TEST_CASE("pairwise_distances matches the naive oracle") {
  std::mt19937_64 engine(31);
  std::vector<Eigen::VectorXd> points;
  for (int i = 0; i < 5; ++i) {
    Eigen::VectorXd v(4);
    for (int k = 0; k < 4; ++k) {
      v(k) = uniform_unit(engine);
    }
    points.push_back(v);
  }
  const Eigen::MatrixXd fast = pairwise_distances(points);
  const Eigen::MatrixXd slow = oracle::naive_distances(points);
  CHECK((fast - slow).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("stress is zero iff distances are reproduced") {
  const Points2d<double> points = random_plane_points(1, 6);
  const Eigen::MatrixXd d = distances_of(points);
  CHECK(stress(d, points) == doctest::Approx(0.0).epsilon(1e-15));

  Points2d<double> collapsed = Points2d<double>::Zero(6, 2);
  double sum_squared = 0.0;
  for (Eigen::Index i = 0; i < 6; ++i) {
    for (Eigen::Index j = i + 1; j < 6; ++j) {
      sum_squared += d(i, j) * d(i, j);
    }
  }
  CHECK(stress(d, collapsed) == doctest::Approx(sum_squared).epsilon(1e-12));
}

TEST_CASE("stress is invariant under rigid motions") {
  const Points2d<double> points = random_plane_points(2, 8);
  Eigen::MatrixXd d = distances_of(random_plane_points(3, 8));

  const double angle = 0.77;
  Eigen::Matrix2d rotation;
  rotation << std::cos(angle), -std::sin(angle), std::sin(angle),
      std::cos(angle);
  Points2d<double> moved = points * rotation.transpose();
  moved.col(0).array() += 3.5;
  moved.col(1).array() -= 1.25;
  CHECK(stress(d, moved) ==
        doctest::Approx(stress(d, points)).epsilon(1e-10));

  Points2d<double> reflected = points;
  reflected.col(0) *= -1.0;
  CHECK(stress(d, reflected) ==
        doctest::Approx(stress(d, points)).epsilon(1e-10));
}

TEST_CASE("mds embeds three equidistant points with near-zero stress") {
  Eigen::MatrixXd d = Eigen::MatrixXd::Constant(3, 3, 1.0);
  d.diagonal().setZero();
  const auto embedding = mds(d, 7);
  CHECK(embedding.stress <= 1e-6);
}

TEST_CASE("mds recovers planar configurations") {
  const Points2d<double> original = random_plane_points(11, 10);
  const Eigen::MatrixXd d = distances_of(original);
  const auto embedding = mds(d, 13);

  double sum_squared = 0.0;
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < d.cols(); ++j) {
      sum_squared += d(i, j) * d(i, j);
    }
  }
  CHECK(embedding.stress <= 1e-5 * sum_squared);

  const Eigen::MatrixXd recovered = distances_of(embedding.points);
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    for (Eigen::Index j = 0; j < d.cols(); ++j) {
      if (i != j) {
        CHECK(std::abs(recovered(i, j) - d(i, j)) <= 1e-3 * d(i, j));
      }
    }
  }
}

TEST_CASE("mds places two points at their exact distance") {
  Eigen::MatrixXd d(2, 2);
  d << 0, 7, 7, 0;
  const auto embedding = mds(d, 5);
  const double separation =
      (embedding.points.row(0) - embedding.points.row(1)).norm();
  CHECK(separation == doctest::Approx(7.0).epsilon(1e-6));
}

TEST_CASE("mds is deterministic and its stress history non-increasing") {
  const Eigen::MatrixXd d = distances_of(random_plane_points(17, 9));
  const auto first = mds(d, 99);
  const auto second = mds(d, 99);
  CHECK(first.points == second.points);
  CHECK(first.stress == second.stress);

  REQUIRE(first.stress_history.size() >= 2);
  const double slack = 1e-9 * first.stress_history.front();
  for (std::size_t i = 1; i < first.stress_history.size(); ++i) {
    CHECK(first.stress_history[i] <= first.stress_history[i - 1] + slack);
  }

  const auto other_seed = mds(d, 100);
  CHECK(other_seed.stress <= 1e-5);  // still converges from another start
}

TEST_CASE("mds validates inputs") {
  Eigen::MatrixXd not_square(2, 3);
  not_square.setZero();
  CHECK_THROWS_AS(mds(not_square, 1), InputError);
  Eigen::MatrixXd with_nan = Eigen::MatrixXd::Zero(3, 3);
  with_nan(0, 1) = std::nan("");
  CHECK_THROWS_AS(mds(with_nan, 1), InputError);
}

TEST_CASE("sample_papers honors cap, determinism and order") {
  std::vector<std::string> ids;
  for (int i = 0; i < 800; ++i) {
    ids.push_back("p" + std::to_string(i));
  }
  CHECK(sample_papers(ids, 1000, 3) == ids);

  for (int i = 800; i < 5000; ++i) {
    ids.push_back("p" + std::to_string(i));
  }
  const auto sample = sample_papers(ids, 1000, 3);
  CHECK(sample.size() == 1000);
  CHECK(std::set<std::string>(sample.begin(), sample.end()).size() == 1000);
  CHECK(sample == sample_papers(ids, 1000, 3));
  CHECK(sample != sample_papers(ids, 1000, 4));

  // original relative order is preserved
  std::vector<std::string> positions;
  for (const auto& id : sample) {
    positions.push_back(id);
  }
  auto position = [&](const std::string& id) {
    return std::find(ids.begin(), ids.end(), id) - ids.begin();
  };
  for (std::size_t i = 1; i < positions.size(); ++i) {
    CHECK(position(positions[i - 1]) < position(positions[i]));
  }
}

TEST_CASE("kde_density_at matches the kernel formula") {
  DensityModel<double> model;
  model.points = Points2d<double>::Zero(1, 2);
  model.bandwidth = 0.37;
  const double h2 = model.bandwidth * model.bandwidth;
  CHECK(kde_density_at(model, 0.0, 0.0) ==
        doctest::Approx(1.0 / (2.0 * std::numbers::pi * h2)).epsilon(1e-12));
  CHECK(kde_density_at(model, 10.0 * model.bandwidth, 0.0) < 1e-10);
}

TEST_CASE("kde_fit selects the only grid value and validates input") {
  const Points2d<double> points = random_plane_points(5, 30);
  const auto fit = kde_fit<double>(points, {0.2}, 5, 1);
  CHECK(fit.model.bandwidth == doctest::Approx(0.2));
  CHECK(fit.cv_scores.size() == 1);

  CHECK_THROWS_AS(kde_fit<double>(points, {}, 5, 1), InputError);
  CHECK_THROWS_AS(kde_fit<double>(points, {-1.0}, 5, 1), InputError);
  CHECK_THROWS_AS(kde_fit<double>(random_plane_points(5, 3), {0.2}, 5, 1),
                  InputError);

  Points2d<double> identical = Points2d<double>::Ones(10, 2);
  CHECK_THROWS_AS(kde_fit<double>(identical, {0.2}, 5, 1), InputError);
}

TEST_CASE("kde_fit scores match the brute-force fold recomputation") {
  const Points2d<double> points = random_plane_points(23, 60);
  const std::vector<double> grid = {0.1, 0.25, 0.5, 1.0};
  const auto fit = kde_fit<double>(points, grid, 5, 77);
  REQUIRE(fit.cv_scores.size() == grid.size());
  REQUIRE(fit.fold_assignment.size() == 60);

  const auto arrays = as_arrays(points);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double expected =
        oracle::kde_cv_score(arrays, fit.fold_assignment, 5, grid[g]);
    CHECK(std::abs(fit.cv_scores[g] - expected) <= 1e-9);
  }
}

TEST_CASE("kde_fit ties break to the smaller bandwidth") {
  const Points2d<double> points = random_plane_points(29, 40);
  const auto fit = kde_fit<double>(points, {0.4, 0.4}, 5, 2);
  CHECK(fit.model.bandwidth == doctest::Approx(0.4));
  CHECK(fit.cv_scores[0] == fit.cv_scores[1]);
}

TEST_CASE("kde density is invariant under sample permutation") {
  const Points2d<double> points = random_plane_points(41, 25);
  DensityModel<double> model{points, 0.3};
  Points2d<double> permuted(points.rows(), 2);
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    permuted.row(i) = points.row(points.rows() - 1 - i);
  }
  DensityModel<double> shuffled{permuted, 0.3};
  for (double x : {-0.5, 0.0, 0.8}) {
    for (double y : {-0.9, 0.1, 0.4}) {
      CHECK(kde_density_at(model, x, y) ==
            doctest::Approx(kde_density_at(shuffled, x, y)).epsilon(1e-12));
      CHECK(kde_density_at(model, x, y) > 0.0);
    }
  }
}

TEST_CASE("kde_density_grid integrates to one and validates ranges") {
  const Points2d<double> points = random_plane_points(43, 120, 1.5);
  DensityModel<double> model{points, 0.4};
  const double h = model.bandwidth;
  const double x_min = points.col(0).minCoeff() - 8 * h;
  const double x_max = points.col(0).maxCoeff() + 8 * h;
  const double y_min = points.col(1).minCoeff() - 8 * h;
  const double y_max = points.col(1).maxCoeff() + 8 * h;
  const int resolution = 160;
  const auto grid =
      kde_density_grid(model, x_min, x_max, y_min, y_max, resolution);

  const double dx = (x_max - x_min) / (resolution - 1);
  const double dy = (y_max - y_min) / (resolution - 1);
  const double integral = grid.values.sum() * dx * dy;
  CHECK(integral == doctest::Approx(1.0).epsilon(0.02));

  CHECK_THROWS_AS(kde_density_grid(model, 1.0, -1.0, 0.0, 1.0, 10),
                  InputError);
  CHECK_THROWS_AS(kde_density_grid(model, 0.0, 1.0, 0.0, 1.0, 1), InputError);
}

TEST_CASE("default_bandwidth_grid spans the stated range") {
  const Points2d<double> points = random_plane_points(47, 50);
  const auto grid = default_bandwidth_grid(points);
  REQUIRE(grid.size() == 20);
  double sum_squared = 0.0;
  int pairs = 0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < points.rows(); ++j) {
      sum_squared += (points.row(i) - points.row(j)).squaredNorm();
      ++pairs;
    }
  }
  const double rms = std::sqrt(sum_squared / pairs);
  CHECK(grid.front() == doctest::Approx(0.01 * rms).epsilon(1e-9));
  CHECK(grid.back() == doctest::Approx(rms).epsilon(1e-9));
  for (std::size_t i = 1; i < grid.size(); ++i) {
    CHECK(grid[i] > grid[i - 1]);
  }
}

TEST_CASE("kde bandwidth selection lands near the Silverman reference") {
  // 500 draws from a standard 2D Gaussian via Box-Muller
  std::mt19937_64 engine(4242);
  Points2d<double> points(500, 2);
  for (int i = 0; i < 500; ++i) {
    const double u1 = uniform_unit(engine) + 1e-16;
    const double u2 = uniform_unit(engine);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    points(i, 0) = radius * std::cos(2.0 * std::numbers::pi * u2);
    points(i, 1) = radius * std::sin(2.0 * std::numbers::pi * u2);
  }
  std::vector<double> grid;
  for (int i = 0; i < 20; ++i) {
    grid.push_back(0.05 * std::pow(1.0 / 0.05, i / 19.0));
  }
  const auto fit = kde_fit<double>(points, grid, 5, 7);
  const double silverman = oracle::silverman_bandwidth_2d(as_arrays(points));
  CHECK(fit.model.bandwidth >= silverman / 2.0);
  CHECK(fit.model.bandwidth <= silverman * 2.0);
}
