#include "phasemap/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "phasemap/error.hpp"
#include "phasemap/linalg.hpp"
#include "phasemap/rng.hpp"

namespace phasemap {
namespace {

struct LanczosRun {
  double value = std::numeric_limits<double>::infinity();
  Eigen::VectorXcd vector;
  double residual = std::numeric_limits<double>::infinity();
  std::size_t steps = 0;
  bool converged = false;
};

Eigen::VectorXcd random_unit_vector(std::size_t dim, RngStream& rng) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(dim));
  for (auto& x : v) x = Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
  v.normalize();
  return v;
}

/// Applies (1 - |d><d|) H (1 - |d><d|) when a deflation vector is given.
class Operator {
 public:
  Operator(const SparseHamiltonian& h, const Eigen::VectorXcd* deflate) : h_(h), deflate_(deflate) {}

  void project(Eigen::VectorXcd& v) const {
    if (deflate_) v -= *deflate_ * deflate_->dot(v);
  }

  void apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const {
    h_.apply(x, y);
    project(y);
  }

 private:
  const SparseHamiltonian& h_;
  const Eigen::VectorXcd* deflate_;
};

/// Restarted Lanczos for the lowest eigenpair of `op`.
LanczosRun lanczos_lowest(const Operator& op, Eigen::VectorXcd start, std::size_t krylov_cap, double tol,
                          std::size_t max_steps) {
  const Eigen::Index dim = start.size();
  const auto cap = static_cast<Eigen::Index>(std::min<std::size_t>(krylov_cap, static_cast<std::size_t>(dim)));
  LanczosRun best;
  Eigen::MatrixXcd basis(dim, cap);
  Eigen::VectorXcd w(dim);
  std::vector<double> alpha;
  std::vector<double> beta;

  op.project(start);
  if (start.norm() == 0.0) return best;  // nothing left after deflation
  start.normalize();

  while (best.steps < max_steps) {
    alpha.clear();
    beta.clear();
    basis.col(0) = start;
    double theta = 0.0;
    Eigen::VectorXd ritz;
    Eigen::Index k = 0;
    for (;; ++k) {
      op.apply(basis.col(k), w);
      ++best.steps;
      const double a = basis.col(k).dot(w).real();
      alpha.push_back(a);
      w -= a * basis.col(k);
      if (k > 0) w -= beta.back() * basis.col(k - 1);
      // Full reorthogonalization, two passes of classical Gram-Schmidt.
      for (int pass = 0; pass < 2; ++pass) {
        w -= basis.leftCols(k + 1) * (basis.leftCols(k + 1).adjoint() * w);
        op.project(w);
      }
      const double b = w.norm();

      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
      const Eigen::Map<const Eigen::VectorXd> diag(alpha.data(), k + 1);
      const Eigen::Map<const Eigen::VectorXd> sub(beta.data(), k);
      tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
      theta = tri.eigenvalues()[0];
      ritz = tri.eigenvectors().col(0);

      const double scale = std::max(1.0, std::abs(theta));
      const double estimate = b * std::abs(ritz[k]);
      const bool breakdown = b <= 1e-14 * std::max(scale, std::abs(a));
      if (estimate <= 0.1 * tol * scale || breakdown || k + 1 == cap || best.steps >= max_steps) break;
      beta.push_back(b);
      basis.col(k + 1) = w / b;
    }

    Eigen::VectorXcd x = basis.leftCols(k + 1) * ritz.cast<Complex>();
    x.normalize();
    op.apply(x, w);
    const double residual = (w - theta * x).norm();
    if (residual < best.residual) {
      best.value = theta;
      best.vector = x;
      best.residual = residual;
    }
    if (residual <= tol * std::max(1.0, std::abs(theta))) {
      best.converged = true;
      break;
    }
    start = x;
  }
  return best;
}

std::size_t krylov_cap_for(const SparseHamiltonian& h) { return std::max<std::size_t>(200, 4 * h.n_sites()); }

}  // namespace

GroundState ground_state(const SparseHamiltonian& h, const LanczosOptions& options) {
  RngStream rng(options.seed, options.stream);
  const Operator full(h, nullptr);
  const std::size_t cap = krylov_cap_for(h);
  LanczosRun run = lanczos_lowest(full, random_unit_vector(h.dim(), rng), cap, options.tol, options.max_iter);
  if (!run.converged)
    throw ConvergenceError("ground_state: Lanczos did not converge after " + std::to_string(run.steps) +
                               " iterations (best residual " + std::to_string(run.residual) + ")",
                           run.residual);

  bool degenerate = false;
  if (h.dim() > 1) {
    const Operator deflated(h, &run.vector);
    const LanczosRun second =
        lanczos_lowest(deflated, random_unit_vector(h.dim(), rng), cap, options.tol, options.max_iter);
    // Ritz values bound the true level from above, so an unconverged second
    // run can only miss a degeneracy, never invent one.
    degenerate = second.value - run.value <= 1e-8;
  }
  return GroundState{run.value, Ket(run.vector, h.n_sites(), h.local_dim()), degenerate, run.residual, run.steps};
}

EigenSystem full_spectrum(const SparseHamiltonian& h, std::size_t max_dim) {
  if (h.dim() > max_dim)
    throw CapacityError("full_spectrum: dimension " + std::to_string(h.dim()) + " exceeds dense cap " +
                        std::to_string(max_dim));
  auto eig = linalg::hermitian_eigen(h.to_dense(), true);
  EigenSystem out;
  out.eigenvalues = std::move(eig.values);
  out.eigenvectors = std::move(eig.vectors);
  out.complete = true;
  out.n_sites = h.n_sites();
  out.local_dim = h.local_dim();
  return out;
}

Ket evolve(const EigenSystem& eig, const QuenchSpec& spec) {
  if (!eig.complete) throw ArgumentError("evolve: a complete eigensystem is required");
  if (spec.initial.dim() != eig.dim()) throw ArgumentError("evolve: state and eigensystem dimensions differ");
  if (!(spec.time >= 0.0)) throw ArgumentError("evolve: time must be nonnegative");
  Eigen::VectorXcd coeff = eig.eigenvectors.adjoint() * spec.initial.amplitudes();
  for (Eigen::Index k = 0; k < coeff.size(); ++k) coeff[k] *= std::polar(1.0, -eig.eigenvalues[k] * spec.time);
  return Ket(eig.eigenvectors * coeff, spec.initial.n_sites(), spec.initial.local_dim());
}

double half_chain_entropy(const Ket& state, std::size_t cut) {
  if (cut < 1 || cut >= state.n_sites()) throw ArgumentError("half_chain_entropy: cut must lie in [1, n_sites)");
  const auto left = static_cast<Eigen::Index>(ipow(state.local_dim(), cut));
  const auto right = static_cast<Eigen::Index>(ipow(state.local_dim(), state.n_sites() - cut));
  // Column-major view: element (c, r) = amplitude[r * right + c], the
  // transpose of the left x right coefficient matrix. Singular values agree.
  const Eigen::Map<const Eigen::MatrixXcd> coeffs(state.amplitudes().data(), right, left);
  const Eigen::BDCSVD<Eigen::MatrixXcd> svd(coeffs);
  double entropy = 0.0;
  for (double s : svd.singularValues()) {
    if (s < 1e-14) continue;
    const double p = s * s;
    entropy -= p * std::log(p);
  }
  return std::max(entropy, 0.0);
}

}  // namespace phasemap
