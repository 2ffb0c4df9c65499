#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "phasemap/sampling.hpp"

namespace phasemap {

enum class DimerVariant { single, combined };

std::string_view to_string(DimerVariant v);
/// Accepts "single"/"s" and "combined"/"c".
DimerVariant parse_dimer_variant(std::string_view tag);

/// Probability that two independent measurement samples of a dimer state
/// differ in exactly k spins, k = 0..N.
struct PairDistancePmf {
  std::size_t n_sites = 0;
  DimerVariant variant = DimerVariant::single;
  std::vector<double> probabilities;  // size N + 1
};

/// Closed forms, for even k (odd k is impossible since every sample has N/2 up spins):
///   P_s(k) = C(N/2, k/2) / 2^{N/2}
///   P_c(k) = [2^{N/2-1} C(N/2, k/2) + C(N, k)] / 2^N
/// Exact integer binomials up to N = 60, log-gamma beyond.
PairDistancePmf dimer_pair_pmf(std::size_t n_sites, DimerVariant variant);

inline constexpr std::size_t kBruteForcePmfCap = 16;

/// Enumerates every configuration of each covering and counts Hamming
/// distances over all ordered pairs; `combined` draws each sample's covering
/// independently with probability 1/2.
PairDistancePmf brute_force_pair_pmf(std::size_t n_sites, DimerVariant variant);

/// Empirical pmf of Hamming distances over all unordered pairs of distinct sample rows.
std::vector<double> empirical_pair_pmf(const SampleMatrix& samples);

std::size_t unique_row_count(const SampleMatrix& samples);

}  // namespace phasemap
