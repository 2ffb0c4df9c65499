#include "phasemap/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "phasemap/error.hpp"
#include "phasemap/linalg.hpp"

namespace phasemap {

Eigen::MatrixXd real_features(const SampleMatrix& samples, RealMapping mapping) {
  const auto m = static_cast<Eigen::Index>(samples.n_samples());
  const auto n = static_cast<Eigen::Index>(samples.n_sites());
  if (samples.encoding() == Encoding::spin_half) {
    Eigen::MatrixXd x(m, n);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index s = 0; s < n; ++s)
        x(i, s) = samples.at(static_cast<std::size_t>(i), static_cast<std::size_t>(s)) == kSpinUp ? 1.0 : -1.0;
    return x;
  }
  if (mapping != RealMapping::z3_planar)
    throw ArgumentError("pca: complex (z3-phase) samples need an explicit real mapping");
  Eigen::MatrixXd x(m, 2 * n);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index s = 0; s < n; ++s) {
      const double angle =
          2.0 * std::numbers::pi * samples.at(static_cast<std::size_t>(i), static_cast<std::size_t>(s)) / 3.0;
      x(i, 2 * s) = std::cos(angle);
      x(i, 2 * s + 1) = std::sin(angle);
    }
  return x;
}

PcaResult pca(const Eigen::MatrixXd& data, std::size_t n_components) {
  const Eigen::Index m = data.rows();
  const Eigen::Index f = data.cols();
  if (m < 2) throw ArgumentError("pca: at least two samples are required");
  if (n_components > static_cast<std::size_t>(std::min(m, f)))
    throw ArgumentError("pca: n_components exceeds min(M, features)");

  PcaResult out;
  out.mean = data.colwise().mean().transpose();
  const Eigen::MatrixXd centered = data.rowwise() - out.mean.transpose();
  Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(m - 1);
  Eigen::VectorXd values;
  linalg::symmetric_eigen(cov, values);  // cov now holds eigenvectors, ascending

  out.principal_values = values.reverse();
  const auto c = static_cast<Eigen::Index>(n_components);
  out.components.resize(c, f);
  for (Eigen::Index i = 0; i < c; ++i) {
    Eigen::VectorXd v = cov.col(f - 1 - i);
    // Sign convention: largest-magnitude coefficient positive.
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v[arg] < 0) v = -v;
    out.components.row(i) = v.transpose();
  }
  out.projections = centered * out.components.transpose();
  return out;
}

PcaResult pca(const SampleMatrix& samples, std::size_t n_components, RealMapping mapping) {
  return pca(real_features(samples, mapping), n_components);
}

namespace {

struct LloydRun {
  std::vector<int> labels;
  Eigen::MatrixXd centroids;
  double inertia = std::numeric_limits<double>::infinity();
  std::size_t iterations = 0;
  std::vector<double> history;
};

Eigen::MatrixXd plus_plus_seeds(const Eigen::MatrixXd& x, std::size_t k, RngStream& rng) {
  const Eigen::Index m = x.rows();
  Eigen::MatrixXd centroids(static_cast<Eigen::Index>(k), x.cols());
  std::vector<bool> chosen(static_cast<std::size_t>(m), false);
  auto pick = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(m)));
  centroids.row(0) = x.row(pick);
  chosen[static_cast<std::size_t>(pick)] = true;
  Eigen::VectorXd d2 = (x.rowwise() - centroids.row(0)).rowwise().squaredNorm();
  for (std::size_t c = 1; c < k; ++c) {
    const double total = d2.sum();
    if (total > 0.0) {
      double target = rng.uniform_open() * total;
      pick = m - 1;
      for (Eigen::Index i = 0; i < m; ++i) {
        target -= d2[i];
        if (target < 0.0 && d2[i] > 0.0) {
          pick = i;
          break;
        }
      }
      while (d2[pick] == 0.0 && pick > 0) --pick;
    } else {
      // Every point coincides with a chosen centroid; take an unused index.
      std::vector<Eigen::Index> unused;
      for (Eigen::Index i = 0; i < m; ++i)
        if (!chosen[static_cast<std::size_t>(i)]) unused.push_back(i);
      pick = unused[rng.below(unused.size())];
    }
    chosen[static_cast<std::size_t>(pick)] = true;
    centroids.row(static_cast<Eigen::Index>(c)) = x.row(pick);
    d2 = d2.cwiseMin((x.rowwise() - x.row(pick)).rowwise().squaredNorm());
  }
  return centroids;
}

/// Assign each point to its nearest centroid; returns the inertia.
double assign(const Eigen::MatrixXd& x, const Eigen::MatrixXd& centroids, std::vector<int>& labels,
              Eigen::VectorXd& dist2) {
  const Eigen::Index m = x.rows();
  double inertia = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    Eigen::Index best = 0;
    const double d = (centroids.rowwise() - x.row(i)).rowwise().squaredNorm().minCoeff(&best);
    labels[static_cast<std::size_t>(i)] = static_cast<int>(best);
    dist2[i] = d;
    inertia += d;
  }
  return inertia;
}

LloydRun lloyd(const Eigen::MatrixXd& x, std::size_t k, RngStream& rng, std::size_t max_iter) {
  const Eigen::Index m = x.rows();
  LloydRun run;
  run.centroids = plus_plus_seeds(x, k, rng);
  run.labels.assign(static_cast<std::size_t>(m), -1);
  std::vector<int> next(static_cast<std::size_t>(m));
  Eigen::VectorXd dist2(m);

  for (run.iterations = 0; run.iterations < max_iter; ++run.iterations) {
    assign(x, run.centroids, next, dist2);
    const bool stable = next == run.labels;
    run.labels = next;

    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(run.centroids.rows(), x.cols());
    std::vector<std::size_t> counts(k, 0);
    for (Eigen::Index i = 0; i < m; ++i) {
      sums.row(run.labels[static_cast<std::size_t>(i)]) += x.row(i);
      ++counts[static_cast<std::size_t>(run.labels[static_cast<std::size_t>(i)])];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        run.centroids.row(static_cast<Eigen::Index>(c)) = sums.row(static_cast<Eigen::Index>(c)) / static_cast<double>(counts[c]);
        continue;
      }
      // Empty cluster: reseed at the point farthest from its centroid.
      Eigen::Index far = 0;
      dist2.maxCoeff(&far);
      run.centroids.row(static_cast<Eigen::Index>(c)) = x.row(far);
      dist2[far] = 0.0;
    }
    run.inertia = assign(x, run.centroids, next, dist2);
    run.history.push_back(run.inertia);
    if (stable) break;
  }
  assign(x, run.centroids, run.labels, dist2);
  return run;
}

}  // namespace

KmeansResult kmeans(const Eigen::MatrixXd& points, std::size_t k, RngStream& rng, const KmeansOptions& options) {
  if (k < 1) throw ArgumentError("kmeans: k must be at least 1");
  if (static_cast<std::size_t>(points.rows()) < k) throw ArgumentError("kmeans: need at least k points");

  LloydRun best;
  for (std::size_t r = 0; r < std::max<std::size_t>(1, options.restarts); ++r) {
    LloydRun run = lloyd(points, k, rng, options.max_iter);
    if (run.inertia < best.inertia) best = std::move(run);
  }

  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return best.centroids(static_cast<Eigen::Index>(a), 0) < best.centroids(static_cast<Eigen::Index>(b), 0);
  });
  std::vector<int> relabel(k);
  KmeansResult out;
  out.centroids.resize(static_cast<Eigen::Index>(k), points.cols());
  for (std::size_t c = 0; c < k; ++c) {
    relabel[order[c]] = static_cast<int>(c);
    out.centroids.row(static_cast<Eigen::Index>(c)) = best.centroids.row(static_cast<Eigen::Index>(order[c]));
  }
  out.labels.resize(best.labels.size());
  out.inertia = 0.0;
  for (std::size_t i = 0; i < best.labels.size(); ++i) {
    out.labels[i] = relabel[static_cast<std::size_t>(best.labels[i])];
    out.inertia += (points.row(static_cast<Eigen::Index>(i)) - out.centroids.row(out.labels[i])).squaredNorm();
  }
  out.iterations = best.iterations;
  out.inertia_history = std::move(best.history);
  return out;
}

std::vector<double> average_label(std::span<const int> labels, std::span<const std::size_t> group_of,
                                  std::size_t n_groups) {
  if (labels.size() != group_of.size()) throw ArgumentError("average_label: labels and groups differ in length");
  std::vector<double> sum(n_groups, 0.0);
  std::vector<std::size_t> count(n_groups, 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (group_of[i] >= n_groups) throw ArgumentError("average_label: group index out of range");
    sum[group_of[i]] += labels[i] + 1;
    ++count[group_of[i]];
  }
  for (std::size_t g = 0; g < n_groups; ++g) {
    if (count[g] == 0) throw ArgumentError("average_label: empty group");
    sum[g] /= static_cast<double>(count[g]);
  }
  return sum;
}

}  // namespace phasemap
