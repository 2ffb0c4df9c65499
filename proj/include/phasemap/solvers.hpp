#pragma once

#include <cstddef>
#include <cstdint>

#include <Eigen/Dense>

#include "phasemap/spin_models.hpp"

namespace phasemap {

struct LanczosOptions {
  double tol = 1e-10;          // residual target, relative to max(1, |E|)
  std::size_t max_iter = 4000;  // total matrix-vector products per Lanczos run
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

struct GroundState {
  double energy;
  Ket state;
  bool degenerate;      // a second level lies within 1e-8 of `energy`
  double residual;      // ||H psi - E psi||
  std::size_t iterations;
};

/// Lowest eigenpair by Lanczos with full reorthogonalization, started from a
/// seed-deterministic random vector. A second, deflated Lanczos run against
/// the converged state decides the degeneracy flag. In a degenerate ground
/// space the returned vector is whatever the start vector projects onto.
GroundState ground_state(const SparseHamiltonian& h, const LanczosOptions& options = {});

inline constexpr std::size_t kDenseSpectrumCap = std::size_t{1} << 14;

struct EigenSystem {
  Eigen::VectorXd eigenvalues;    // ascending
  Eigen::MatrixXcd eigenvectors;  // orthonormal columns
  bool complete = false;
  std::size_t n_sites = 0;
  std::size_t local_dim = 0;

  std::size_t dim() const noexcept { return static_cast<std::size_t>(eigenvalues.size()); }
};

/// Complete dense eigendecomposition.
EigenSystem full_spectrum(const SparseHamiltonian& h, std::size_t max_dim = kDenseSpectrumCap);

inline constexpr double kDefaultQuenchTime = 1e4;

struct QuenchSpec {
  Ket initial;
  double time = kDefaultQuenchTime;
};

/// psi(t) = sum_k exp(-i lambda_k t) <v_k|psi_0> v_k
Ket evolve(const EigenSystem& eig, const QuenchSpec& spec);

/// Von Neumann entropy (nats) of the reduced state on sites [0, cut).
double half_chain_entropy(const Ket& state, std::size_t cut);

}  // namespace phasemap
