#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "phasemap/rng.hpp"
#include "phasemap/sampling.hpp"

namespace phasemap {

/// How sample digits become real features for PCA.
///  - none: spin-half only, digits encoded as +1/-1 (one feature per site).
///  - z3_planar: each Z3 digit k becomes (cos 2 pi k/3, sin 2 pi k/3), two
///    features per site; spin-half rows encode as in `none`.
enum class RealMapping { none, z3_planar };

Eigen::MatrixXd real_features(const SampleMatrix& samples, RealMapping mapping = RealMapping::none);

struct PcaResult {
  Eigen::VectorXd principal_values;  // every covariance eigenvalue, descending
  Eigen::MatrixXd components;        // n_components x features, orthonormal rows
  Eigen::MatrixXd projections;       // M x n_components
  Eigen::VectorXd mean;
};

/// PCA of the sample covariance (1/(M-1) convention).
PcaResult pca(const Eigen::MatrixXd& data, std::size_t n_components);
PcaResult pca(const SampleMatrix& samples, std::size_t n_components, RealMapping mapping = RealMapping::none);

struct KmeansOptions {
  std::size_t restarts = 10;
  std::size_t max_iter = 300;
};

struct KmeansResult {
  std::vector<int> labels;
  Eigen::MatrixXd centroids;  // k x features, ascending first coordinate
  double inertia = 0.0;
  std::size_t iterations = 0;
  /// Inertia after every Lloyd step of the winning restart; never increases.
  std::vector<double> inertia_history;
};

/// Lloyd iterations from k-means++ seeding, best of `restarts`. A cluster
/// that empties is reseeded at the point farthest from its own centroid.
/// Labels are canonicalized so that centroids ascend in the first coordinate.
KmeansResult kmeans(const Eigen::MatrixXd& points, std::size_t k, RngStream& rng, const KmeansOptions& options = {});

/// Mean of the 1-based label (label + 1) in each group. `group_of[i]` names
/// the group of sample i; every group in [0, n_groups) must be nonempty.
std::vector<double> average_label(std::span<const int> labels, std::span<const std::size_t> group_of,
                                  std::size_t n_groups);

}  // namespace phasemap
