#include "phasemap/oracle.hpp"

#include <cmath>
#include <cstdint>
#include <set>
#include <string>

#include "phasemap/error.hpp"
#include "phasemap/spin_models.hpp"

namespace phasemap {

std::string_view to_string(DimerVariant v) { return v == DimerVariant::single ? "single" : "combined"; }

DimerVariant parse_dimer_variant(std::string_view tag) {
  if (tag == "single" || tag == "s") return DimerVariant::single;
  if (tag == "combined" || tag == "c") return DimerVariant::combined;
  throw ArgumentError("unknown dimer variant '" + std::string(tag) + "'");
}

namespace {

void check_even(std::size_t n_sites, const char* what) {
  if (n_sites < 2 || n_sites % 2 != 0) throw ArgumentError(std::string(what) + ": N must be even and >= 2");
}

/// Row n of Pascal's triangle, exact for n <= 60 (C(60,30) < 2^64 / 100).
std::vector<std::uint64_t> pascal_row(std::size_t n) {
  std::vector<std::uint64_t> row{1};
  for (std::size_t i = 1; i <= n; ++i) {
    std::vector<std::uint64_t> next(i + 1, 1);
    for (std::size_t k = 1; k < i; ++k) next[k] = row[k - 1] + row[k];
    row = std::move(next);
  }
  return row;
}

/// log C(n, k) for the log-gamma route.
double log_binomial(double n, double k) { return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1); }

}  // namespace

PairDistancePmf dimer_pair_pmf(std::size_t n_sites, DimerVariant variant) {
  check_even(n_sites, "dimer_pair_pmf");
  const std::size_t n = n_sites;
  const std::size_t half = n / 2;
  PairDistancePmf pmf{n, variant, std::vector<double>(n + 1, 0.0)};

  if (n <= 60) {
    const auto c_half = pascal_row(half);
    const auto c_full = pascal_row(n);
    for (std::size_t k = 0; k <= n; k += 2) {
      const auto single = static_cast<long double>(c_half[k / 2]);
      if (variant == DimerVariant::single) {
        pmf.probabilities[k] = static_cast<double>(std::ldexp(single, -static_cast<int>(half)));
      } else {
        const long double numer = std::ldexp(single, static_cast<int>(half) - 1) + static_cast<long double>(c_full[k]);
        pmf.probabilities[k] = static_cast<double>(std::ldexp(numer, -static_cast<int>(n)));
      }
    }
    return pmf;
  }

  const double ln2 = std::log(2.0);
  for (std::size_t k = 0; k <= n; k += 2) {
    const double log_single = log_binomial(static_cast<double>(half), static_cast<double>(k / 2)) -
                              static_cast<double>(half) * ln2;
    if (variant == DimerVariant::single) {
      pmf.probabilities[k] = std::exp(log_single);
    } else {
      // [2^{N/2-1} C(N/2,k/2) + C(N,k)] / 2^N = P_s(k)/2 + C(N,k)/2^N
      const double log_cross = log_binomial(static_cast<double>(n), static_cast<double>(k)) -
                               static_cast<double>(n) * ln2;
      pmf.probabilities[k] = 0.5 * std::exp(log_single) + std::exp(log_cross);
    }
  }
  return pmf;
}

PairDistancePmf brute_force_pair_pmf(std::size_t n_sites, DimerVariant variant) {
  check_even(n_sites, "brute_force_pair_pmf");
  if (n_sites > kBruteForcePmfCap)
    throw CapacityError("brute_force_pair_pmf: N=" + std::to_string(n_sites) + " exceeds enumeration cap " +
                        std::to_string(kBruteForcePmfCap));
  const std::size_t n = n_sites;
  const std::size_t pairs = n / 2;

  // Every configuration of a covering as a bitmask (bit set = down).
  auto configurations = [&](DimerParity parity) {
    const auto cover = dimer_pairs(n, parity);
    std::vector<std::uint32_t> out;
    for (std::uint32_t choice = 0; choice < (1U << pairs); ++choice) {
      std::uint32_t mask = 0;
      for (std::size_t p = 0; p < pairs; ++p) {
        const bool flipped = (choice >> p) & 1U;
        mask |= 1U << (flipped ? cover[p].first : cover[p].second);
      }
      out.push_back(mask);
    }
    return out;
  };
  const auto conf_a = configurations(DimerParity::A);
  const auto conf_b = configurations(DimerParity::B);

  std::vector<std::uint64_t> counts(n + 1, 0);
  auto tally = [&](const std::vector<std::uint32_t>& first, const std::vector<std::uint32_t>& second) {
    for (auto x : first)
      for (auto y : second) ++counts[static_cast<std::size_t>(__builtin_popcount(x ^ y))];
  };
  tally(conf_a, conf_a);
  double total = static_cast<double>(conf_a.size() * conf_a.size());
  if (variant == DimerVariant::combined) {
    // Each of the four (covering, covering) combinations has weight 1/4 and
    // every block has the same number of ordered pairs.
    tally(conf_a, conf_b);
    tally(conf_b, conf_a);
    tally(conf_b, conf_b);
    total *= 4.0;
  }
  PairDistancePmf pmf{n, variant, std::vector<double>(n + 1, 0.0)};
  for (std::size_t k = 0; k <= n; ++k) pmf.probabilities[k] = static_cast<double>(counts[k]) / total;
  return pmf;
}

std::vector<double> empirical_pair_pmf(const SampleMatrix& samples) {
  const std::size_t n = samples.n_sites();
  const std::size_t m = samples.n_samples();
  std::vector<double> pmf(n + 1, 0.0);
  if (m < 2) return pmf;
  for (std::size_t i = 0; i < m; ++i) {
    const auto ri = samples.row(i);
    for (std::size_t j = i + 1; j < m; ++j) {
      const auto rj = samples.row(j);
      std::size_t k = 0;
      for (std::size_t s = 0; s < n; ++s) k += ri[s] != rj[s];
      pmf[k] += 1.0;
    }
  }
  const double pairs = 0.5 * static_cast<double>(m) * static_cast<double>(m - 1);
  for (auto& p : pmf) p /= pairs;
  return pmf;
}

std::size_t unique_row_count(const SampleMatrix& samples) {
  std::set<std::vector<std::uint8_t>> rows;
  for (std::size_t i = 0; i < samples.n_samples(); ++i) {
    const auto r = samples.row(i);
    rows.emplace(r.begin(), r.end());
  }
  return rows.size();
}

}  // namespace phasemap
