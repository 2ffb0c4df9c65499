#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "phasemap/sampling.hpp"

namespace phasemap {

/// 10^-2.5
inline constexpr double kDefaultDelta = 0.0031622776601683794;

enum class KernelVariant { gaussian, density_normalized };

std::string_view to_string(KernelVariant v);
/// Accepts "gaussian"/"g" and "density-normalized"/"dn".
KernelVariant parse_kernel_variant(std::string_view tag);

/// Choice of the constant in d_ij^2 = (1/norm) sum_k |X_ik - X_jk|^2.
///  - max_separation: norm = N * (largest squared gap between two outcome
///    values), i.e. 4N for spin-half and 3N for Z3, so d lies in [0, 1].
///  - site_count: norm = N. Identical ordering of distances; Z3 distances
///    then reach sqrt(3) and spin-half distances reach 2.
enum class DistanceNormalization { max_separation, site_count };

std::string_view to_string(DistanceNormalization n);
DistanceNormalization parse_distance_normalization(std::string_view tag);

struct DistanceMatrix {
  Eigen::MatrixXd squared;  // d_ij^2, symmetric with zero diagonal
  double normalization = 1.0;

  std::size_t size() const noexcept { return static_cast<std::size_t>(squared.rows()); }
  Eigen::MatrixXd distances() const { return squared.cwiseSqrt(); }
};

DistanceMatrix distance_matrix(const SampleMatrix& samples,
                               DistanceNormalization normalization = DistanceNormalization::max_separation);

/// Smallest nonzero d_ij^2, or nullopt when all samples coincide.
std::optional<double> min_nonzero_squared_distance(const DistanceMatrix& d);

/// K_ij = exp(-d_ij^2 / (2 epsilon)). Far-apart pairs may underflow to 0 for
/// very small epsilon; the diagonal is always 1.
Eigen::MatrixXd gaussian_kernel(const DistanceMatrix& d, double epsilon);

/// K'_ij = K_ij / (sum_k K_ik * sum_k K_kj)
Eigen::MatrixXd density_normalize(const Eigen::MatrixXd& kernel);

struct MarkovMatrix {
  Eigen::MatrixXd transition;  // P_ij = K_ij / sum_k K_ik
  Eigen::MatrixXd kernel;      // the symmetric K that P was built from
  Eigen::VectorXd row_sums;
};

MarkovMatrix markov_matrix(const Eigen::MatrixXd& kernel);

/// Eigenvalues of P in descending order, computed from the symmetric
/// similarity transform D^{-1/2} K D^{-1/2}.
Eigen::VectorXd spectrum(const MarkovMatrix& p);

/// Eigenvalues of P from a general (nonsymmetric) solver; cross-check only.
Eigen::VectorXcd spectrum_direct(const Eigen::MatrixXd& transition);

/// Number of eigenvalues strictly greater than 1 - delta.
std::size_t count_above(const Eigen::VectorXd& eigenvalues, double delta);

struct DiffusionConfig {
  double epsilon = 0.02;
  double delta = kDefaultDelta;
  KernelVariant kernel = KernelVariant::gaussian;
  DistanceNormalization normalization = DistanceNormalization::max_separation;
};

struct DiffusionResult {
  Eigen::VectorXd eigenvalues;  // descending, one per sample
  std::size_t cluster_count = 0;
  double epsilon = 0.0;
  KernelVariant kernel = KernelVariant::gaussian;
};

/// Samples with identical rows merged. Rows of K (and of K') belonging to
/// identical samples coincide, so the M x M problem has M - U exact zero
/// eigenvalues and its remaining spectrum is that of the U x U matrix
/// sqrt(w_u) k_uv sqrt(w_v) / sqrt(q_u q_v) with multiplicities w and
/// weighted degrees q_u = sum_v w_v k_uv.
struct CollapsedSamples {
  DistanceMatrix distances;          // between unique rows
  std::vector<double> multiplicity;  // occurrences of each unique row
  std::vector<std::size_t> first_index;
  std::size_t n_samples = 0;

  std::size_t n_unique() const noexcept { return multiplicity.size(); }
};

CollapsedSamples collapse_duplicates(const SampleMatrix& samples,
                                     DistanceNormalization normalization = DistanceNormalization::max_separation);

/// Full M-length descending spectrum of P using the collapsed problem.
Eigen::VectorXd collapsed_spectrum(const CollapsedSamples& samples, double epsilon, KernelVariant kernel);

/// distance -> kernel -> (density normalization) -> Markov -> spectrum -> count.
DiffusionResult cluster_count(const SampleMatrix& samples, const DiffusionConfig& config);

/// One result per epsilon; distances are computed once.
std::vector<DiffusionResult> epsilon_sweep(const SampleMatrix& samples, std::span<const double> epsilons,
                                           KernelVariant kernel = KernelVariant::gaussian,
                                           double delta = kDefaultDelta,
                                           DistanceNormalization normalization = DistanceNormalization::max_separation);

std::vector<double> log_grid(double lo, double hi, std::size_t points);

/// 40 log-spaced values from 1e-4 to 10.
std::vector<double> default_epsilon_grid();

/// Named single-value epsilons: fig2a 0.015, fig2b 0.075, fig3 0.02,
/// supp-fig2 0.004, supp-fig4 0.029.
std::optional<double> epsilon_preset(std::string_view name);

}  // namespace phasemap
