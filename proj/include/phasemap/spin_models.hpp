#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace phasemap {

using Complex = std::complex<double>;

// Basis convention shared by every module: site 1 is the most significant
// digit of the base-(local_dim) basis index. For spin-1/2, digit 0 is up
// (S^z = +1/2) and digit 1 is down. For Z3, digit k is the sigma eigenstate
// with eigenvalue exp(2 pi i k / 3).
inline constexpr int kSpinUp = 0;
inline constexpr int kSpinDown = 1;

enum class Boundary { open, periodic };

std::size_t ipow(std::size_t base, std::size_t exp);

/// Digit of `site` (0-based, site 0 most significant) in a basis index.
inline int basis_digit(std::size_t index, std::size_t site, std::size_t n_sites, std::size_t local_dim) {
  for (std::size_t s = n_sites - 1; s > site; --s) index /= local_dim;
  return static_cast<int>(index % local_dim);
}

std::vector<int> basis_digits(std::size_t index, std::size_t n_sites, std::size_t local_dim);
std::size_t basis_index(std::span<const int> digits, std::size_t local_dim);

/// Normalized state vector in the product basis above.
class Ket {
 public:
  Ket(Eigen::VectorXcd amplitudes, std::size_t n_sites, std::size_t local_dim);

  const Eigen::VectorXcd& amplitudes() const noexcept { return amplitudes_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(amplitudes_.size()); }
  std::size_t n_sites() const noexcept { return n_sites_; }
  std::size_t local_dim() const noexcept { return local_dim_; }

  /// <S^z_i> for a spin-1/2 ket, site 0-based.
  double sz_expectation(std::size_t site) const;

 private:
  Eigen::VectorXcd amplitudes_;
  std::size_t n_sites_;
  std::size_t local_dim_;
};

struct SparseEntry {
  std::size_t row;
  std::size_t col;
  Complex value;
};

/// Hermitian operator stored in compressed rows. Built row by row; the only
/// performance-relevant operation is `apply`.
class SparseHamiltonian {
 public:
  SparseHamiltonian(std::size_t n_sites, std::size_t local_dim, std::vector<std::size_t> row_ptr,
                    std::vector<std::size_t> cols, std::vector<Complex> values);

  std::size_t dim() const noexcept { return row_ptr_.size() - 1; }
  std::size_t n_sites() const noexcept { return n_sites_; }
  std::size_t local_dim() const noexcept { return local_dim_; }
  std::size_t nnz() const noexcept { return values_.size(); }

  /// y = H x
  void apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const;
  Eigen::VectorXcd operator*(const Eigen::VectorXcd& x) const;

  /// Matrix element, zero when not stored.
  Complex at(std::size_t row, std::size_t col) const;

  std::vector<SparseEntry> entries() const;
  Eigen::MatrixXcd to_dense() const;
  bool is_real() const;
  double max_abs() const;

 private:
  void check_hermitian() const;

  std::size_t n_sites_;
  std::size_t local_dim_;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::size_t> cols_;
  std::vector<Complex> values_;
};

// Dimension caps.
inline constexpr std::size_t kClockMaxDim = 1594323;    // 3^13
inline constexpr std::size_t kSpinHalfMaxDim = 1 << 22;

struct ClockParams {
  std::size_t n_sites = 2;
  double f = 0.5;
  double theta = 0.0;
  std::size_t max_dim = kClockMaxDim;
};

struct J1J2Params {
  std::size_t n_sites = 4;
  double j1 = 1.0;
  double j2 = 0.0;
  double g = 0.0;
  Boundary boundary = Boundary::periodic;
  std::size_t max_dim = kSpinHalfMaxDim;
};

struct HeisenbergDisorderParams {
  std::size_t n_sites = 2;
  double j = 1.0;
  double h_max = 0.0;
  std::vector<double> fields;
  std::size_t max_dim = kSpinHalfMaxDim;
};

struct TfimNnnParams {
  std::size_t n_sites = 2;
  double j = 1.0;
  double delta_j_max = 0.0;
  std::vector<double> couplings;  // n_sites - 1 nearest-neighbour J_i
  double j2 = 0.0;
  double h = 0.0;
  std::size_t max_dim = kSpinHalfMaxDim;
};

/// Chiral Z3 clock chain, open boundary:
///   H = -f sum_j (tau_j e^{i theta} + h.c.) - (1 - f) sum_{j<N} (sigma_j sigma_{j+1}^dag e^{i theta} + h.c.)
SparseHamiltonian build_clock_hamiltonian(const ClockParams& params);

/// J1-J2 Heisenberg chain with the staggered dimerizing perturbation
/// g sum_j [1 - (-1)^j] S_j . S_{j+1} (j 1-based). Periodic sums run over
/// j = 1..N literally, so on very short rings bonds can repeat.
SparseHamiltonian build_j1j2_hamiltonian(const J1J2Params& params);

/// Random-field Heisenberg ring: sum_i J S_i . S_{i+1} + h_i S^z_i.
SparseHamiltonian build_heisenberg_disorder_hamiltonian(const HeisenbergDisorderParams& params);

/// Disordered transverse-field Ising chain with NNN coupling, open boundary,
/// Pauli operators:
///   H = -sum_i J_i s^z_i s^z_{i+1} + J2 sum_i s^z_i s^z_{i+2} + h sum_i s^x_i
SparseHamiltonian build_tfim_nnn_hamiltonian(const TfimNnnParams& params);

/// Product state down-up-down-up..., so that <S^z_i> = (-1)^i / 2 with i 1-based.
Ket neel_state(std::size_t n_sites);

enum class DimerParity { A, B };

inline constexpr std::size_t kDenseStateCap = std::size_t{1} << 16;

/// Pairs of sites (0-based) covered by singlets for the given parity.
/// A: (1,2),(3,4),...  B: (2,3),...,(N,1) in 1-based labels.
std::vector<std::pair<std::size_t, std::size_t>> dimer_pairs(std::size_t n_sites, DimerParity parity);

/// Product of singlets (|up down> - |down up>)/sqrt(2) on the covering's pairs.
Ket dimer_state(std::size_t n_sites, DimerParity parity, std::size_t max_dim = kDenseStateCap);

}  // namespace phasemap
