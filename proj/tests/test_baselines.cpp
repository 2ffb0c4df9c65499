#include <doctest.h>

#include <cmath>
#include <numbers>

#include "phasemap/baselines.hpp"
#include "phasemap/error.hpp"

using namespace phasemap;

namespace {

SampleMatrix ferromagnets(std::size_t n, std::size_t m) {
  std::vector<std::uint8_t> digits;
  for (std::size_t i = 0; i < m; ++i) digits.insert(digits.end(), n, static_cast<std::uint8_t>(i % 2));
  return SampleMatrix(m, n, 2, Encoding::spin_half, std::move(digits));
}

Eigen::MatrixXd gaussian_clusters(const std::vector<Eigen::Vector2d>& centres, std::size_t per, double sd,
                                  std::uint64_t seed) {
  RngStream rng(seed, 0);
  Eigen::MatrixXd x(static_cast<Eigen::Index>(centres.size() * per), 2);
  Eigen::Index row = 0;
  for (const auto& c : centres)
    for (std::size_t i = 0; i < per; ++i, ++row) {
      // Box-Muller keeps the draw independent of <random> distributions.
      const double r = std::sqrt(-2.0 * std::log(rng.uniform_open()));
      const double t = 2.0 * std::numbers::pi * rng.uniform_open();
      x.row(row) = c.transpose() + sd * Eigen::RowVector2d(r * std::cos(t), r * std::sin(t));
    }
  return x;
}

}  // namespace

TEST_CASE("pca: two ferromagnets give one principal value N") {
  const std::size_t n = 6, m = 200;
  const PcaResult p = pca(ferromagnets(n, m), 2);
  // The covariance uses 1/(M-1); rescaled to the population convention the value is exactly N.
  CHECK(p.principal_values[0] * static_cast<double>(m - 1) / static_cast<double>(m) == doctest::Approx(6.0));
  CHECK(p.principal_values.tail(n - 1).cwiseAbs().maxCoeff() < 1e-10);
  const Eigen::VectorXd pc = p.components.row(0).transpose();
  CHECK(std::abs(pc.dot(Eigen::VectorXd::Ones(n) / std::sqrt(6.0))) == doctest::Approx(1.0));
  CHECK(p.projections.rows() == static_cast<Eigen::Index>(m));
  CHECK(std::abs(p.projections(0, 0)) == doctest::Approx(std::sqrt(6.0)));
}

TEST_CASE("pca: components orthonormal and values sum to the trace") {
  RngStream rng(3, 1);
  Eigen::MatrixXd x(150, 5);
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = rng.uniform(-1.0, 1.0) * static_cast<double>(j + 1);
  const PcaResult p = pca(x, 3);
  CHECK((p.components * p.components.transpose() - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-10);
  const Eigen::MatrixXd centred = x.rowwise() - x.colwise().mean();
  const double trace = (centred.transpose() * centred).trace() / static_cast<double>(x.rows() - 1);
  CHECK(p.principal_values.sum() == doctest::Approx(trace).epsilon(1e-10));
  for (Eigen::Index i = 1; i < p.principal_values.size(); ++i) CHECK(p.principal_values[i] <= p.principal_values[i - 1]);
  CHECK((p.projections - centred * p.components.transpose()).cwiseAbs().maxCoeff() < 1e-10);
  CHECK_THROWS_AS(pca(x, 6), ArgumentError);
  CHECK_THROWS_AS(pca(Eigen::MatrixXd::Ones(1, 3), 1), ArgumentError);
}

TEST_CASE("pca: Z3 samples need the planar mapping") {
  const SampleMatrix s(4, 2, 3, Encoding::z3_phase, {0, 0, 1, 1, 2, 2, 0, 1});
  CHECK_THROWS_AS(pca(s, 1), ArgumentError);
  const Eigen::MatrixXd f = real_features(s, RealMapping::z3_planar);
  CHECK(f.cols() == 4);
  CHECK(f(1, 0) == doctest::Approx(std::cos(2.0 * std::numbers::pi / 3.0)));
  CHECK(f(1, 1) == doctest::Approx(std::sin(2.0 * std::numbers::pi / 3.0)));
  CHECK(pca(s, 2, RealMapping::z3_planar).components.cols() == 4);
}

TEST_CASE("kmeans: separated clusters are recovered with canonical labels") {
  const Eigen::MatrixXd x = gaussian_clusters({{5, 0}, {-5, 0}, {0, 8}}, 40, 0.3, 7);
  RngStream rng(1, 1);
  const KmeansResult r = kmeans(x, 3, rng);
  CHECK(r.centroids(0, 0) < r.centroids(1, 0));
  CHECK(r.centroids(1, 0) < r.centroids(2, 0));
  // Centre (-5,0) is leftmost, (0,8) middle, (5,0) rightmost.
  for (int i = 0; i < 40; ++i) CHECK(r.labels[static_cast<std::size_t>(i)] == 2);
  for (int i = 40; i < 80; ++i) CHECK(r.labels[static_cast<std::size_t>(i)] == 0);
  for (int i = 80; i < 120; ++i) CHECK(r.labels[static_cast<std::size_t>(i)] == 1);
  CHECK(r.inertia < 120 * 4 * 0.3 * 0.3);
}

TEST_CASE("kmeans: inertia never increases and k = 1 is the mean") {
  RngStream data(9, 9);
  Eigen::MatrixXd x(200, 3);
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < 3; ++j) x(i, j) = data.uniform(0.0, 1.0);
  for (std::size_t k : {2u, 4u, 7u}) {
    RngStream rng(k, 0);
    const KmeansResult r = kmeans(x, k, rng, {.restarts = 3});
    REQUIRE_FALSE(r.inertia_history.empty());
    for (std::size_t i = 1; i < r.inertia_history.size(); ++i)
      CHECK(r.inertia_history[i] <= r.inertia_history[i - 1] + 1e-12);
    CHECK(r.inertia == doctest::Approx(r.inertia_history.back()));
  }
  RngStream rng(0, 0);
  const KmeansResult one = kmeans(x, 1, rng);
  CHECK((one.centroids.row(0) - x.colwise().mean()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(kmeans(x.topRows(2), 3, rng), ArgumentError);
}

TEST_CASE("kmeans: deterministic under a fixed stream") {
  const Eigen::MatrixXd x = gaussian_clusters({{0, 0}, {1, 1}}, 30, 0.5, 2);
  RngStream a(4, 4), b(4, 4);
  CHECK(kmeans(x, 2, a).labels == kmeans(x, 2, b).labels);
}

TEST_CASE("average_label: one-based group means") {
  const std::vector<int> labels{0, 1, 1, 0, 2, 2};
  const std::vector<std::size_t> groups{0, 0, 1, 1, 2, 2};
  const auto avg = average_label(labels, groups, 3);
  CHECK(avg[0] == doctest::Approx(1.5));
  CHECK(avg[1] == doctest::Approx(1.5));
  CHECK(avg[2] == doctest::Approx(3.0));
  CHECK_THROWS_AS(average_label(labels, groups, 4), ArgumentError);
}
