#include <doctest.h>

#include <array>
#include <cmath>
#include <set>

#include "phasemap/rng.hpp"

using namespace phasemap;

TEST_CASE("rng: equal (seed, stream) reproduce the sequence") {
  RngStream a(42, 7), b(42, 7);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("rng: neighbouring seeds and streams diverge") {
  std::set<std::uint64_t> firsts;
  for (std::uint64_t seed = 0; seed < 8; ++seed)
    for (std::uint64_t stream = 0; stream < 8; ++stream) firsts.insert(RngStream(seed, stream).next_u64());
  CHECK(firsts.size() == 64);
}

TEST_CASE("rng: stream ids depend on every key and on their order") {
  CHECK(stream_id({1, 2, 3}) == stream_id({1, 2, 3}));
  CHECK(stream_id({1, 2, 3}) != stream_id({3, 2, 1}));
  CHECK(stream_id({1, 2}) != stream_id({1, 2, 0}));
  std::set<std::uint64_t> ids;
  for (std::uint64_t p = 0; p < 20; ++p)
    for (std::uint64_t r = 0; r < 20; ++r)
      for (std::uint64_t k = 0; k < 5; ++k) ids.insert(stream_id({p, r, k}));
  CHECK(ids.size() == 2000);
}

TEST_CASE("rng: conversions stay in range and look uniform") {
  RngStream r(3, 0);
  double sum = 0.0;
  std::array<int, 5> bins{};
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform_open();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    sum += u;
    const auto b = r.below(5);
    REQUIRE(b < 5);
    ++bins[b];
    const double x = r.uniform(-2.0, 3.0);
    REQUIRE(x >= -2.0);
    REQUIRE(x < 3.0);
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
  for (int c : bins) CHECK(std::abs(c - n / 5) < 5 * std::sqrt(n * 0.2 * 0.8));
}
