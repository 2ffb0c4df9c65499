#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace phasemap {

/// Combine a list of indices into a 64-bit stream id. Used to key every
/// random draw by (grid point, realization, repeat) rather than by the
/// order in which workers happen to run.
std::uint64_t stream_id(std::initializer_list<std::uint64_t> keys);

/// Deterministic random stream identified by (seed, stream). Two streams
/// with equal ids produce identical sequences on every platform: the engine
/// and seed_seq are fully specified by the standard, and all conversions to
/// floating point are done here rather than through <random> distributions.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on the open interval (0, 1).
  double uniform_open();

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi);

  /// Uniform integer in [0, n), n > 0.
  std::uint64_t below(std::uint64_t n);

  bool coin() { return (engine_() >> 63) != 0; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

}  // namespace phasemap
