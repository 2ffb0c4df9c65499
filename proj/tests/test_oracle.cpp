#include <doctest.h>

#include <cmath>
#include <numeric>

#include "phasemap/error.hpp"
#include "phasemap/oracle.hpp"

using namespace phasemap;

TEST_CASE("dimer pmf: small closed-form fixtures") {
  const auto s2 = dimer_pair_pmf(2, DimerVariant::single).probabilities;
  CHECK(s2 == std::vector<double>{0.5, 0.0, 0.5});
  const auto s4 = dimer_pair_pmf(4, DimerVariant::single).probabilities;
  CHECK(s4[0] == doctest::Approx(0.25));
  CHECK(s4[2] == doctest::Approx(0.5));
  CHECK(s4[4] == doctest::Approx(0.25));
  const auto c4 = dimer_pair_pmf(4, DimerVariant::combined).probabilities;
  CHECK(c4[0] == doctest::Approx(3.0 / 16.0));
  CHECK(c4[2] == doctest::Approx(10.0 / 16.0));
  CHECK(c4[4] == doctest::Approx(3.0 / 16.0));
  CHECK_THROWS_AS(dimer_pair_pmf(5, DimerVariant::single), ArgumentError);
  CHECK_THROWS_AS(dimer_pair_pmf(0, DimerVariant::single), ArgumentError);
}

TEST_CASE("dimer pmf: normalized, odd distances impossible") {
  for (std::size_t n : {2u, 8u, 30u, 60u, 62u, 120u, 400u})
    for (auto v : {DimerVariant::single, DimerVariant::combined}) {
      const auto p = dimer_pair_pmf(n, v).probabilities;
      REQUIRE(p.size() == n + 1);
      CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-10));
      for (std::size_t k = 1; k <= n; k += 2) CHECK(p[k] == 0.0);
      for (double x : p) CHECK(x >= 0.0);
    }
}

TEST_CASE("dimer pmf: closed form equals brute-force enumeration") {
  for (std::size_t n = 2; n <= kBruteForcePmfCap; n += 2)
    for (auto v : {DimerVariant::single, DimerVariant::combined}) {
      const auto exact = dimer_pair_pmf(n, v).probabilities;
      const auto brute = brute_force_pair_pmf(n, v).probabilities;
      for (std::size_t k = 0; k <= n; ++k) CHECK(exact[k] == doctest::Approx(brute[k]).epsilon(1e-12));
    }
  CHECK_THROWS_AS(brute_force_pair_pmf(18, DimerVariant::single), CapacityError);
}

TEST_CASE("dimer pmf: combined over single at zero distance tends to one half") {
  for (std::size_t n : {8u, 16u, 32u, 64u}) {
    const double ratio = dimer_pair_pmf(n, DimerVariant::combined).probabilities[0] /
                         dimer_pair_pmf(n, DimerVariant::single).probabilities[0];
    CHECK(ratio == doctest::Approx(0.5 + std::pow(2.0, -static_cast<double>(n) / 2.0)).epsilon(1e-12));
  }
  // Intermediate distances are dominated by the cross-covering term C(N,k)/2^N.
  const auto s = dimer_pair_pmf(40, DimerVariant::single).probabilities;
  const auto c = dimer_pair_pmf(40, DimerVariant::combined).probabilities;
  CHECK(c[20] > s[20] / 2.0);
  CHECK(c[40] / s[40] == doctest::Approx(0.5 + std::pow(2.0, -20.0)).epsilon(1e-12));
}

TEST_CASE("dimer pmf: empirical pair distances within five sigma") {
  const std::size_t n = 8, m = 20000;
  RngStream rng(8, 8);
  for (auto v : {DimerVariant::single, DimerVariant::combined}) {
    const SampleMatrix s =
        v == DimerVariant::single ? sample_dimer(n, DimerParity::A, m, rng) : sample_combined_dimer(n, m, rng);
    const auto empirical = empirical_pair_pmf(s);
    const auto exact = dimer_pair_pmf(n, v).probabilities;
    REQUIRE(empirical.size() == n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
      // Pair statistic over M samples: variance at most 4 p (1 - p) / M to leading order.
      const double p = exact[k];
      const double sigma = std::sqrt(4.0 * p * (1.0 - p) / m + 2.0 * p * (1.0 - p) / (double(m) * m));
      CHECK(std::abs(empirical[k] - p) <= 5.0 * sigma + 1e-15);
    }
  }
}

TEST_CASE("unique rows") {
  const SampleMatrix s(5, 3, 2, Encoding::spin_half, {0, 1, 0, 0, 1, 0, 1, 1, 1, 0, 0, 0, 1, 1, 1});
  CHECK(unique_row_count(s) == 3);
  CHECK(parse_dimer_variant("c") == DimerVariant::combined);
  CHECK(parse_dimer_variant("single") == DimerVariant::single);
  CHECK_THROWS_AS(parse_dimer_variant("x"), ArgumentError);
}
