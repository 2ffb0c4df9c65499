#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "phasemap/rng.hpp"
#include "phasemap/spin_models.hpp"

namespace phasemap {

/// How outcome digits become numbers: spin-half digits map to +1 (up) and
/// -1 (down); Z3 digits map to the complex units exp(2 pi i k / 3).
enum class Encoding { spin_half, z3_phase };

std::string_view to_string(Encoding e);
Encoding parse_encoding(std::string_view tag);
Encoding encoding_for_local_dim(std::size_t local_dim);

enum class Basis { computational, fourier };

std::string_view to_string(Basis b);
Basis parse_basis(std::string_view tag);

/// M measurement outcomes of N sites, stored row-major as base-local_dim digits.
class SampleMatrix {
 public:
  SampleMatrix(std::size_t n_samples, std::size_t n_sites, std::size_t local_dim, Encoding encoding,
               std::vector<std::uint8_t> digits, std::uint64_t seed = 0, std::uint64_t stream = 0);

  std::size_t n_samples() const noexcept { return n_samples_; }
  std::size_t n_sites() const noexcept { return n_sites_; }
  std::size_t local_dim() const noexcept { return local_dim_; }
  Encoding encoding() const noexcept { return encoding_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  std::uint8_t at(std::size_t sample, std::size_t site) const { return digits_[sample * n_sites_ + site]; }
  std::span<const std::uint8_t> row(std::size_t sample) const {
    return {digits_.data() + sample * n_sites_, n_sites_};
  }
  const std::vector<std::uint8_t>& digits() const noexcept { return digits_; }

  /// Rows in the given order.
  SampleMatrix permuted(std::span<const std::size_t> order) const;

  friend bool operator==(const SampleMatrix&, const SampleMatrix&) = default;

 private:
  std::size_t n_samples_;
  std::size_t n_sites_;
  std::size_t local_dim_;
  Encoding encoding_;
  std::vector<std::uint8_t> digits_;
  std::uint64_t seed_;
  std::uint64_t stream_;
};

/// Inverse-CDF sampling of basis configurations from |psi|^2. In the fourier
/// basis each site is first rotated by the discrete Fourier transform, which
/// for Z3 turns sigma measurements into tau measurements (digit m is the tau
/// eigenvalue exp(2 pi i m / 3)) and for spin-1/2 measures sigma^x.
SampleMatrix draw_samples(const Ket& state, std::size_t n_samples, RngStream& rng,
                          Basis basis = Basis::computational);

/// Measurement of a singlet covering: every pair independently reads
/// up-down or down-up with probability 1/2.
SampleMatrix sample_dimer(std::size_t n_sites, DimerParity parity, std::size_t n_samples, RngStream& rng);

/// Equal classical mixture of the two coverings, chosen per sample.
SampleMatrix sample_combined_dimer(std::size_t n_sites, std::size_t n_samples, RngStream& rng);

/// Apply the per-site discrete Fourier rotation to a state vector.
Eigen::VectorXcd fourier_rotate(const Ket& state);

void write_samples_csv(const SampleMatrix& samples, const std::filesystem::path& path);
SampleMatrix read_samples_csv(const std::filesystem::path& path);

}  // namespace phasemap
