#include "phasemap/spin_models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "phasemap/error.hpp"
#include "phasemap/rng.hpp"

namespace phasemap {

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

std::vector<int> basis_digits(std::size_t index, std::size_t n_sites, std::size_t local_dim) {
  std::vector<int> digits(n_sites);
  for (std::size_t s = n_sites; s-- > 0;) {
    digits[s] = static_cast<int>(index % local_dim);
    index /= local_dim;
  }
  return digits;
}

std::size_t basis_index(std::span<const int> digits, std::size_t local_dim) {
  std::size_t index = 0;
  for (int d : digits) index = index * local_dim + static_cast<std::size_t>(d);
  return index;
}

// ---------------------------------------------------------------------------
// Ket

Ket::Ket(Eigen::VectorXcd amplitudes, std::size_t n_sites, std::size_t local_dim)
    : amplitudes_(std::move(amplitudes)), n_sites_(n_sites), local_dim_(local_dim) {
  if (local_dim_ < 2) throw ArgumentError("Ket: local_dim must be at least 2");
  if (static_cast<std::size_t>(amplitudes_.size()) != ipow(local_dim_, n_sites_))
    throw ArgumentError("Ket: amplitude count does not match local_dim^n_sites");
  if (std::abs(amplitudes_.norm() - 1.0) > 1e-10)
    throw ArgumentError("Ket: state is not normalized (norm " + std::to_string(amplitudes_.norm()) + ")");
}

double Ket::sz_expectation(std::size_t site) const {
  if (local_dim_ != 2) throw ArgumentError("sz_expectation: spin-1/2 ket required");
  double sz = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) {
    const double p = std::norm(amplitudes_[static_cast<Eigen::Index>(i)]);
    sz += basis_digit(i, site, n_sites_, 2) == kSpinUp ? 0.5 * p : -0.5 * p;
  }
  return sz;
}

// ---------------------------------------------------------------------------
// SparseHamiltonian

SparseHamiltonian::SparseHamiltonian(std::size_t n_sites, std::size_t local_dim,
                                     std::vector<std::size_t> row_ptr, std::vector<std::size_t> cols,
                                     std::vector<Complex> values)
    : n_sites_(n_sites),
      local_dim_(local_dim),
      row_ptr_(std::move(row_ptr)),
      cols_(std::move(cols)),
      values_(std::move(values)) {
  if (row_ptr_.size() < 2 || row_ptr_.back() != cols_.size() || cols_.size() != values_.size())
    throw ArgumentError("SparseHamiltonian: inconsistent compressed-row arrays");
  check_hermitian();
}

void SparseHamiltonian::apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const {
  const std::size_t n = dim();
  y.resize(static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < n; ++r) {
    Complex acc = 0.0;
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      acc += values_[k] * x[static_cast<Eigen::Index>(cols_[k])];
    y[static_cast<Eigen::Index>(r)] = acc;
  }
}

Eigen::VectorXcd SparseHamiltonian::operator*(const Eigen::VectorXcd& x) const {
  Eigen::VectorXcd y;
  apply(x, y);
  return y;
}

Complex SparseHamiltonian::at(std::size_t row, std::size_t col) const {
  const auto begin = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[row]);
  const auto end = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[row + 1]);
  const auto it = std::lower_bound(begin, end, col);
  if (it == end || *it != col) return 0.0;
  return values_[static_cast<std::size_t>(it - cols_.begin())];
}

std::vector<SparseEntry> SparseHamiltonian::entries() const {
  std::vector<SparseEntry> out;
  out.reserve(values_.size());
  for (std::size_t r = 0; r + 1 < row_ptr_.size(); ++r)
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) out.push_back({r, cols_[k], values_[k]});
  return out;
}

Eigen::MatrixXcd SparseHamiltonian::to_dense() const {
  const auto n = static_cast<Eigen::Index>(dim());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& e : entries())
    m(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col)) = e.value;
  return m;
}

bool SparseHamiltonian::is_real() const {
  return std::all_of(values_.begin(), values_.end(), [](const Complex& v) { return v.imag() == 0.0; });
}

double SparseHamiltonian::max_abs() const {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, std::abs(v));
  return m;
}

void SparseHamiltonian::check_hermitian() const {
  // Entries are accumulated in row order, so a pair (r,c)/(c,r) may differ
  // by rounding in the last bits; everything else must pair exactly.
  const double tol = 1e-13 * std::max(1.0, max_abs());
  auto check = [&](std::size_t r, std::size_t k) {
    const std::size_t c = cols_[k];
    if (std::abs(at(c, r) - std::conj(values_[k])) > tol)
      throw NumericError("SparseHamiltonian: entry (" + std::to_string(r) + "," + std::to_string(c) +
                         ") has no Hermitian partner");
  };
  if (dim() <= 1024) {
    for (std::size_t r = 0; r < dim(); ++r)
      for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) check(r, k);
    return;
  }
  if (values_.empty()) return;
  RngStream rng(0x4e455254ULL, dim());
  for (int probe = 0; probe < 100; ++probe) {
    const std::size_t k = rng.below(values_.size());
    const auto it = std::upper_bound(row_ptr_.begin(), row_ptr_.end(), k);
    check(static_cast<std::size_t>(it - row_ptr_.begin()) - 1, k);
  }
}

// ---------------------------------------------------------------------------
// Row-by-row assembly

namespace {

/// Collects the nonzeros of one row at a time; duplicate columns are summed.
class RowAssembler {
 public:
  RowAssembler(std::size_t n_sites, std::size_t local_dim)
      : n_sites_(n_sites), local_dim_(local_dim), row_ptr_{0} {}

  void add(std::size_t col, Complex value) { pending_.emplace_back(col, value); }

  void finish_row() {
    std::sort(pending_.begin(), pending_.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < pending_.size();) {
      const std::size_t col = pending_[i].first;
      Complex sum = 0.0;
      for (; i < pending_.size() && pending_[i].first == col; ++i) sum += pending_[i].second;
      if (sum != Complex(0.0)) {
        cols_.push_back(col);
        values_.push_back(sum);
      }
    }
    pending_.clear();
    row_ptr_.push_back(cols_.size());
  }

  SparseHamiltonian build() && {
    return SparseHamiltonian(n_sites_, local_dim_, std::move(row_ptr_), std::move(cols_), std::move(values_));
  }

 private:
  std::size_t n_sites_;
  std::size_t local_dim_;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::size_t> cols_;
  std::vector<Complex> values_;
  std::vector<std::pair<std::size_t, Complex>> pending_;
};

std::size_t checked_dim(std::size_t local_dim, std::size_t n_sites, std::size_t max_dim, const char* what) {
  if (n_sites == 0) throw ArgumentError(std::string(what) + ": n_sites must be positive");
  std::size_t dim = 1;
  for (std::size_t s = 0; s < n_sites; ++s) {
    if (dim > max_dim / local_dim)
      throw CapacityError(std::string(what) + ": dimension " + std::to_string(local_dim) + "^" +
                          std::to_string(n_sites) + " exceeds cap " + std::to_string(max_dim));
    dim *= local_dim;
  }
  return dim;
}

/// Bit weight of a 0-based site in a spin-1/2 index.
inline std::size_t site_bit(std::size_t site, std::size_t n_sites) { return std::size_t{1} << (n_sites - 1 - site); }

/// Row `r` of coeff * S_a . S_b for spin-1/2.
void add_exchange(RowAssembler& rows, std::size_t r, std::size_t a, std::size_t b, std::size_t n_sites,
                  double coeff) {
  if (coeff == 0.0) return;
  if (a == b) {  // S.S = 3/4 on a single spin-1/2
    rows.add(r, 0.75 * coeff);
    return;
  }
  const std::size_t ba = site_bit(a, n_sites);
  const std::size_t bb = site_bit(b, n_sites);
  const bool same = ((r & ba) != 0) == ((r & bb) != 0);
  rows.add(r, same ? 0.25 * coeff : -0.25 * coeff);
  if (!same) rows.add(r ^ ba ^ bb, 0.5 * coeff);
}

/// +1 for up, -1 for down.
inline double pauli_z(std::size_t r, std::size_t site, std::size_t n_sites) {
  return (r & site_bit(site, n_sites)) ? -1.0 : 1.0;
}

}  // namespace

SparseHamiltonian build_clock_hamiltonian(const ClockParams& p) {
  if (!(p.f >= 0.0 && p.f <= 1.0)) throw ArgumentError("clock: f must lie in [0, 1]");
  const std::size_t n = p.n_sites;
  const std::size_t dim = checked_dim(3, n, p.max_dim, "clock");
  const Complex phase = std::polar(1.0, p.theta);
  const double two_pi_3 = 2.0 * std::numbers::pi / 3.0;

  std::vector<std::size_t> weight(n);
  for (std::size_t s = 0; s < n; ++s) weight[s] = ipow(3, n - 1 - s);

  RowAssembler rows(n, 3);
  std::vector<int> digits;
  for (std::size_t r = 0; r < dim; ++r) {
    digits = basis_digits(r, n, 3);
    // tau|k> = |k+1>: <r|tau|c> = 1 when digit_r = digit_c + 1.
    for (std::size_t s = 0; s < n; ++s) {
      const int d = digits[s];
      const std::size_t down = r - static_cast<std::size_t>(d) * weight[s] + static_cast<std::size_t>((d + 2) % 3) * weight[s];
      const std::size_t up = r - static_cast<std::size_t>(d) * weight[s] + static_cast<std::size_t>((d + 1) % 3) * weight[s];
      if (p.f != 0.0) {
        rows.add(down, -p.f * phase);
        rows.add(up, -p.f * std::conj(phase));
      }
    }
    // sigma_j sigma_{j+1}^dag is diagonal: omega^{d_j - d_{j+1}}.
    double diag = 0.0;
    for (std::size_t s = 0; s + 1 < n; ++s)
      diag += 2.0 * std::cos(two_pi_3 * (digits[s] - digits[s + 1]) + p.theta);
    if (p.f != 1.0 && n > 1) rows.add(r, -(1.0 - p.f) * diag);
    rows.finish_row();
  }
  return std::move(rows).build();
}

SparseHamiltonian build_j1j2_hamiltonian(const J1J2Params& p) {
  const std::size_t n = p.n_sites;
  if (n == 0 || n % 2 != 0) throw ArgumentError("j1j2: n_sites must be even and positive");
  const std::size_t dim = checked_dim(2, n, p.max_dim, "j1j2");
  const bool periodic = p.boundary == Boundary::periodic;

  RowAssembler rows(n, 2);
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t j = 0; j < n; ++j) {
      // 1-based bond index j+1; [1 - (-1)^{j+1}] is 2 on odd 1-based bonds.
      const double staggered = (j % 2 == 0) ? 2.0 * p.g : 0.0;
      if (periodic || j + 1 < n) add_exchange(rows, r, j, (j + 1) % n, n, p.j1 + staggered);
      if (periodic || j + 2 < n) add_exchange(rows, r, j, (j + 2) % n, n, p.j2);
    }
    rows.finish_row();
  }
  return std::move(rows).build();
}

SparseHamiltonian build_heisenberg_disorder_hamiltonian(const HeisenbergDisorderParams& p) {
  const std::size_t n = p.n_sites;
  if (p.fields.size() != n) throw ArgumentError("heisenberg: fields must have n_sites entries");
  if (p.h_max < 0.0) throw ArgumentError("heisenberg: h_max must be nonnegative");
  for (double h : p.fields) {
    const bool ok = p.h_max == 0.0 ? h == 0.0 : std::abs(h) < p.h_max;
    if (!ok) throw ArgumentError("heisenberg: field outside (-h_max, h_max)");
  }
  const std::size_t dim = checked_dim(2, n, p.max_dim, "heisenberg");

  RowAssembler rows(n, 2);
  for (std::size_t r = 0; r < dim; ++r) {
    double field = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      add_exchange(rows, r, i, (i + 1) % n, n, p.j);
      field += 0.5 * p.fields[i] * pauli_z(r, i, n);
    }
    rows.add(r, field);
    rows.finish_row();
  }
  return std::move(rows).build();
}

SparseHamiltonian build_tfim_nnn_hamiltonian(const TfimNnnParams& p) {
  const std::size_t n = p.n_sites;
  if (n == 0) throw ArgumentError("tfim-nnn: n_sites must be positive");
  if (p.couplings.size() != n - 1) throw ArgumentError("tfim-nnn: couplings must have n_sites - 1 entries");
  if (p.delta_j_max < 0.0) throw ArgumentError("tfim-nnn: delta_j_max must be nonnegative");
  for (double c : p.couplings)
    if (std::abs(c - p.j) > p.delta_j_max * (1.0 + 1e-12))
      throw ArgumentError("tfim-nnn: coupling deviates from j by more than delta_j_max");
  const std::size_t dim = checked_dim(2, n, p.max_dim, "tfim-nnn");

  RowAssembler rows(n, 2);
  for (std::size_t r = 0; r < dim; ++r) {
    double diag = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) diag -= p.couplings[i] * pauli_z(r, i, n) * pauli_z(r, i + 1, n);
    for (std::size_t i = 0; i + 2 < n; ++i) diag += p.j2 * pauli_z(r, i, n) * pauli_z(r, i + 2, n);
    rows.add(r, diag);
    if (p.h != 0.0)
      for (std::size_t i = 0; i < n; ++i) rows.add(r ^ site_bit(i, n), p.h);
    rows.finish_row();
  }
  return std::move(rows).build();
}

// ---------------------------------------------------------------------------
// Special states

Ket neel_state(std::size_t n_sites) {
  if (n_sites == 0) throw ArgumentError("neel_state: n_sites must be positive");
  const std::size_t dim = checked_dim(2, n_sites, kSpinHalfMaxDim, "neel_state");
  std::vector<int> digits(n_sites);
  for (std::size_t s = 0; s < n_sites; ++s) digits[s] = (s % 2 == 0) ? kSpinDown : kSpinUp;
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
  amps[static_cast<Eigen::Index>(basis_index(digits, 2))] = 1.0;
  return Ket(std::move(amps), n_sites, 2);
}

std::vector<std::pair<std::size_t, std::size_t>> dimer_pairs(std::size_t n_sites, DimerParity parity) {
  if (n_sites == 0 || n_sites % 2 != 0) throw ArgumentError("dimer: n_sites must be even and positive");
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  const std::size_t offset = parity == DimerParity::A ? 0 : 1;
  for (std::size_t k = 0; k < n_sites / 2; ++k) {
    const std::size_t a = 2 * k + offset;
    pairs.emplace_back(a % n_sites, (a + 1) % n_sites);
  }
  return pairs;
}

Ket dimer_state(std::size_t n_sites, DimerParity parity, std::size_t max_dim) {
  const auto pairs = dimer_pairs(n_sites, parity);
  const std::size_t dim = checked_dim(2, n_sites, max_dim, "dimer_state");
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
  const std::size_t n_pairs = pairs.size();
  const double amplitude = std::pow(2.0, -0.5 * static_cast<double>(n_pairs));
  std::vector<int> digits(n_sites);
  // Each singlet contributes |up_a down_b> with sign + or |down_a up_b> with sign -.
  for (std::size_t choice = 0; choice < (std::size_t{1} << n_pairs); ++choice) {
    double sign = 1.0;
    for (std::size_t k = 0; k < n_pairs; ++k) {
      const bool flipped = (choice >> k) & 1U;
      digits[pairs[k].first] = flipped ? kSpinDown : kSpinUp;
      digits[pairs[k].second] = flipped ? kSpinUp : kSpinDown;
      if (flipped) sign = -sign;
    }
    amps[static_cast<Eigen::Index>(basis_index(digits, 2))] += sign * amplitude;
  }
  return Ket(std::move(amps), n_sites, 2);
}

}  // namespace phasemap
