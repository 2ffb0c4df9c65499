#include "phasemap/diffmap.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <unordered_map>

#include "phasemap/error.hpp"
#include "phasemap/linalg.hpp"

namespace phasemap {

std::string_view to_string(KernelVariant v) {
  return v == KernelVariant::gaussian ? "gaussian" : "density-normalized";
}

KernelVariant parse_kernel_variant(std::string_view tag) {
  if (tag == "gaussian" || tag == "g") return KernelVariant::gaussian;
  if (tag == "density-normalized" || tag == "dn") return KernelVariant::density_normalized;
  throw ArgumentError("unknown kernel variant '" + std::string(tag) + "'");
}

std::string_view to_string(DistanceNormalization n) {
  return n == DistanceNormalization::max_separation ? "max-separation" : "site-count";
}

DistanceNormalization parse_distance_normalization(std::string_view tag) {
  if (tag == "max-separation") return DistanceNormalization::max_separation;
  if (tag == "site-count") return DistanceNormalization::site_count;
  throw ArgumentError("unknown distance normalization '" + std::string(tag) + "'");
}

namespace {

/// Squared separations |x_a - x_b|^2 between encoded outcome values.
struct SeparationTable {
  std::array<std::array<double, 3>, 3> sep{};
  double max_sep = 0.0;
};

SeparationTable separation_table(Encoding encoding) {
  std::vector<std::complex<double>> values;
  if (encoding == Encoding::spin_half) {
    values = {1.0, -1.0};
  } else if (encoding == Encoding::z3_phase) {
    for (int k = 0; k < 3; ++k) values.push_back(std::polar(1.0, 2.0 * std::numbers::pi * k / 3.0));
  } else {
    throw ArgumentError("distance_matrix: unknown encoding");
  }
  SeparationTable t;
  for (std::size_t a = 0; a < values.size(); ++a)
    for (std::size_t b = 0; b < values.size(); ++b) {
      // Snap to 12 significant digits: |w - 1|^2 for a cube root w is 3 up to round-off.
      const double s = std::norm(values[a] - values[b]);
      t.sep[a][b] = std::round(s * 1e12) / 1e12;
      t.max_sep = std::max(t.max_sep, t.sep[a][b]);
    }
  return t;
}

DistanceMatrix distances_between(const SampleMatrix& samples, std::span<const std::size_t> rows,
                                 DistanceNormalization normalization) {
  const SeparationTable table = separation_table(samples.encoding());
  const auto n_sites = static_cast<double>(samples.n_sites());
  DistanceMatrix d;
  d.normalization = normalization == DistanceNormalization::max_separation ? n_sites * table.max_sep : n_sites;
  const double d2_max = n_sites * table.max_sep / d.normalization;
  const auto m = static_cast<Eigen::Index>(rows.size());
  d.squared = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto ri = samples.row(rows[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const auto rj = samples.row(rows[static_cast<std::size_t>(j)]);
      double sum = 0.0;
      for (std::size_t k = 0; k < ri.size(); ++k) sum += table.sep[ri[k]][rj[k]];
      const double v = std::min(sum / d.normalization, d2_max);
      d.squared(i, j) = v;
      d.squared(j, i) = v;
    }
  }
  return d;
}

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw ArgumentError("epsilon must be positive and finite");
}

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw ArgumentError("delta must lie in (0, 1)");
}

Eigen::VectorXd descending(Eigen::VectorXd ascending) {
  std::reverse(ascending.begin(), ascending.end());
  return ascending;
}

}  // namespace

DistanceMatrix distance_matrix(const SampleMatrix& samples, DistanceNormalization normalization) {
  if (samples.n_samples() < 2) throw ArgumentError("distance_matrix: at least two samples are required");
  std::vector<std::size_t> rows(samples.n_samples());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  return distances_between(samples, rows, normalization);
}

std::optional<double> min_nonzero_squared_distance(const DistanceMatrix& d) {
  std::optional<double> best;
  for (Eigen::Index i = 0; i < d.squared.rows(); ++i)
    for (Eigen::Index j = i + 1; j < d.squared.cols(); ++j) {
      const double v = d.squared(i, j);
      if (v > 0.0 && (!best || v < *best)) best = v;
    }
  return best;
}

Eigen::MatrixXd gaussian_kernel(const DistanceMatrix& d, double epsilon) {
  check_epsilon(epsilon);
  return (-d.squared.array() / (2.0 * epsilon)).exp().matrix();
}

Eigen::MatrixXd density_normalize(const Eigen::MatrixXd& kernel) {
  const Eigen::VectorXd q = kernel.rowwise().sum();
  if ((q.array() <= 0.0).any()) throw NumericError("density_normalize: nonpositive kernel row sum");
  const Eigen::VectorXd inv = q.cwiseInverse();
  return inv.asDiagonal() * kernel * inv.asDiagonal();
}

MarkovMatrix markov_matrix(const Eigen::MatrixXd& kernel) {
  if (kernel.rows() != kernel.cols()) throw ArgumentError("markov_matrix: kernel must be square");
  MarkovMatrix p;
  p.kernel = kernel;
  p.row_sums = kernel.rowwise().sum();
  if ((p.row_sums.array() <= 0.0).any()) throw NumericError("markov_matrix: nonpositive kernel row sum");
  p.transition = p.row_sums.cwiseInverse().asDiagonal() * kernel;
  return p;
}

Eigen::VectorXd spectrum(const MarkovMatrix& p) {
  const Eigen::VectorXd s = p.row_sums.cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd sym = s.asDiagonal() * p.kernel * s.asDiagonal();
  return descending(linalg::symmetric_eigenvalues(std::move(sym)));
}

Eigen::VectorXcd spectrum_direct(const Eigen::MatrixXd& transition) {
  const Eigen::EigenSolver<Eigen::MatrixXd> solver(transition, false);
  Eigen::VectorXcd values = solver.eigenvalues();
  std::sort(values.begin(), values.end(), [](const auto& a, const auto& b) { return a.real() > b.real(); });
  return values;
}

std::size_t count_above(const Eigen::VectorXd& eigenvalues, double delta) {
  check_delta(delta);
  const double threshold = 1.0 - delta;
  return static_cast<std::size_t>(std::count_if(eigenvalues.begin(), eigenvalues.end(),
                                                [threshold](double v) { return v > threshold; }));
}

CollapsedSamples collapse_duplicates(const SampleMatrix& samples, DistanceNormalization normalization) {
  CollapsedSamples out;
  out.n_samples = samples.n_samples();
  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < samples.n_samples(); ++i) {
    const auto row = samples.row(i);
    std::string key(row.begin(), row.end());
    const auto [it, inserted] = seen.try_emplace(std::move(key), out.first_index.size());
    if (inserted) {
      out.first_index.push_back(i);
      out.multiplicity.push_back(1.0);
    } else {
      out.multiplicity[it->second] += 1.0;
    }
  }
  out.distances = distances_between(samples, out.first_index, normalization);
  return out;
}

Eigen::VectorXd collapsed_spectrum(const CollapsedSamples& samples, double epsilon, KernelVariant kernel) {
  Eigen::MatrixXd k = gaussian_kernel(samples.distances, epsilon);
  const Eigen::Map<const Eigen::VectorXd> w(samples.multiplicity.data(),
                                            static_cast<Eigen::Index>(samples.multiplicity.size()));
  Eigen::VectorXd q = k * w;
  if (kernel == KernelVariant::density_normalized) {
    const Eigen::VectorXd inv = q.cwiseInverse();
    k = inv.asDiagonal() * k * inv.asDiagonal();
    q = k * w;
  }
  if ((q.array() <= 0.0).any()) throw NumericError("collapsed_spectrum: nonpositive kernel row sum");
  const Eigen::VectorXd scale = (w.array() / q.array()).sqrt().matrix();
  Eigen::MatrixXd sym = scale.asDiagonal() * k * scale.asDiagonal();
  const Eigen::VectorXd reduced = linalg::symmetric_eigenvalues(std::move(sym));

  // Descending: positive reduced values, the M - U exact zeros, then the rest.
  Eigen::VectorXd full = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(samples.n_samples));
  std::vector<double> vals(reduced.begin(), reduced.end());
  vals.resize(samples.n_samples, 0.0);
  std::sort(vals.begin(), vals.end(), std::greater<>());
  for (std::size_t i = 0; i < vals.size(); ++i) full[static_cast<Eigen::Index>(i)] = vals[i];
  return full;
}

DiffusionResult cluster_count(const SampleMatrix& samples, const DiffusionConfig& config) {
  const std::vector<double> eps{config.epsilon};
  return epsilon_sweep(samples, eps, config.kernel, config.delta, config.normalization).front();
}

std::vector<DiffusionResult> epsilon_sweep(const SampleMatrix& samples, std::span<const double> epsilons,
                                           KernelVariant kernel, double delta,
                                           DistanceNormalization normalization) {
  if (epsilons.empty()) throw ArgumentError("epsilon_sweep: empty epsilon grid");
  if (samples.n_samples() < 2) throw ArgumentError("cluster_count: at least two samples are required");
  check_delta(delta);
  for (double e : epsilons) check_epsilon(e);
  const CollapsedSamples collapsed = collapse_duplicates(samples, normalization);
  std::vector<DiffusionResult> out;
  out.reserve(epsilons.size());
  for (double e : epsilons) {
    DiffusionResult r;
    r.eigenvalues = collapsed_spectrum(collapsed, e, kernel);
    r.cluster_count = count_above(r.eigenvalues, delta);
    r.epsilon = e;
    r.kernel = kernel;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<double> log_grid(double lo, double hi, std::size_t points) {
  if (!(lo > 0.0 && hi >= lo) || points == 0) throw ArgumentError("log_grid: need 0 < lo <= hi and points > 0");
  std::vector<double> grid(points);
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (std::size_t i = 0; i < points; ++i)
    grid[i] = points == 1 ? lo : std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1));
  return grid;
}

std::vector<double> default_epsilon_grid() { return log_grid(1e-4, 10.0, 40); }

std::optional<double> epsilon_preset(std::string_view name) {
  if (name == "fig2a") return 0.015;
  if (name == "fig2b") return 0.075;
  if (name == "fig3") return 0.02;
  if (name == "supp-fig2") return 0.004;
  if (name == "supp-fig4") return 0.029;
  return std::nullopt;
}

}  // namespace phasemap
