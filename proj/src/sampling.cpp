#include "phasemap/sampling.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "phasemap/error.hpp"

namespace phasemap {

std::string_view to_string(Encoding e) { return e == Encoding::spin_half ? "spin-half" : "z3-phase"; }

Encoding parse_encoding(std::string_view tag) {
  if (tag == "spin-half") return Encoding::spin_half;
  if (tag == "z3-phase") return Encoding::z3_phase;
  throw ArgumentError("unknown encoding tag '" + std::string(tag) + "'");
}

Encoding encoding_for_local_dim(std::size_t local_dim) {
  if (local_dim == 2) return Encoding::spin_half;
  if (local_dim == 3) return Encoding::z3_phase;
  throw ArgumentError("no sample encoding for local_dim " + std::to_string(local_dim));
}

std::string_view to_string(Basis b) { return b == Basis::computational ? "computational" : "fourier"; }

Basis parse_basis(std::string_view tag) {
  if (tag == "computational") return Basis::computational;
  if (tag == "fourier") return Basis::fourier;
  throw ArgumentError("unknown measurement basis '" + std::string(tag) + "'");
}

SampleMatrix::SampleMatrix(std::size_t n_samples, std::size_t n_sites, std::size_t local_dim, Encoding encoding,
                           std::vector<std::uint8_t> digits, std::uint64_t seed, std::uint64_t stream)
    : n_samples_(n_samples),
      n_sites_(n_sites),
      local_dim_(local_dim),
      encoding_(encoding),
      digits_(std::move(digits)),
      seed_(seed),
      stream_(stream) {
  if (n_samples_ < 1) throw ArgumentError("SampleMatrix: at least one sample is required");
  if (n_sites_ < 1) throw ArgumentError("SampleMatrix: at least one site is required");
  if (encoding_for_local_dim(local_dim_) != encoding_)
    throw ArgumentError("SampleMatrix: encoding does not match local_dim");
  if (digits_.size() != n_samples_ * n_sites_) throw ArgumentError("SampleMatrix: digit count mismatch");
  for (auto d : digits_)
    if (d >= local_dim_) throw ArgumentError("SampleMatrix: digit out of range");
}

SampleMatrix SampleMatrix::permuted(std::span<const std::size_t> order) const {
  if (order.size() != n_samples_) throw ArgumentError("permuted: order must list every sample");
  std::vector<std::uint8_t> out;
  out.reserve(digits_.size());
  for (auto i : order) {
    const auto r = row(i);
    out.insert(out.end(), r.begin(), r.end());
  }
  return SampleMatrix(n_samples_, n_sites_, local_dim_, encoding_, std::move(out), seed_, stream_);
}

Eigen::VectorXcd fourier_rotate(const Ket& state) {
  const std::size_t d = state.local_dim();
  const std::size_t n = state.n_sites();
  Eigen::MatrixXcd u(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t m = 0; m < d; ++m)
    for (std::size_t k = 0; k < d; ++k)
      u(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k)) =
          std::polar(1.0 / std::sqrt(static_cast<double>(d)), 2.0 * std::numbers::pi * static_cast<double>(m * k) /
                                                                   static_cast<double>(d));

  Eigen::VectorXcd psi = state.amplitudes();
  std::vector<Complex> local(d);
  const std::size_t dim = state.dim();
  for (std::size_t s = 0; s < n; ++s) {
    const std::size_t stride = ipow(d, n - 1 - s);
    for (std::size_t base = 0; base < dim; ++base) {
      if ((base / stride) % d != 0) continue;  // visit each fibre once, from its digit-0 member
      for (std::size_t k = 0; k < d; ++k) local[k] = psi[static_cast<Eigen::Index>(base + k * stride)];
      for (std::size_t m = 0; m < d; ++m) {
        Complex acc = 0.0;
        for (std::size_t k = 0; k < d; ++k) acc += u(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k)) * local[k];
        psi[static_cast<Eigen::Index>(base + m * stride)] = acc;
      }
    }
  }
  return psi;
}

SampleMatrix draw_samples(const Ket& state, std::size_t n_samples, RngStream& rng, Basis basis) {
  const double norm = state.amplitudes().norm();
  if (std::abs(norm - 1.0) > 1e-6) throw ArgumentError("draw_samples: state is not normalized");
  if (n_samples < 1) throw ArgumentError("draw_samples: at least one sample is required");
  const std::uint64_t seed = rng.seed();
  const std::uint64_t stream = rng.stream();

  const Eigen::VectorXcd psi = basis == Basis::fourier ? fourier_rotate(state) : state.amplitudes();
  std::vector<double> cdf(static_cast<std::size_t>(psi.size()));
  double acc = 0.0;
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    acc += std::norm(psi[i]);
    cdf[static_cast<std::size_t>(i)] = acc;
  }

  const std::size_t n = state.n_sites();
  const std::size_t d = state.local_dim();
  std::vector<std::uint8_t> digits(n_samples * n);
  for (std::size_t m = 0; m < n_samples; ++m) {
    // Scale by the total so round-off in the prefix sum cannot overrun the end.
    const double x = rng.uniform_open() * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), x);
    if (it == cdf.end()) --it;
    std::size_t index = static_cast<std::size_t>(it - cdf.begin());
    for (std::size_t s = n; s-- > 0;) {
      digits[m * n + s] = static_cast<std::uint8_t>(index % d);
      index /= d;
    }
  }
  return SampleMatrix(n_samples, n, d, encoding_for_local_dim(d), std::move(digits), seed, stream);
}

namespace {

void fill_dimer_row(std::span<std::uint8_t> row, const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                    RngStream& rng) {
  for (const auto& [a, b] : pairs) {
    const bool flipped = rng.coin();
    row[a] = static_cast<std::uint8_t>(flipped ? kSpinDown : kSpinUp);
    row[b] = static_cast<std::uint8_t>(flipped ? kSpinUp : kSpinDown);
  }
}

}  // namespace

SampleMatrix sample_dimer(std::size_t n_sites, DimerParity parity, std::size_t n_samples, RngStream& rng) {
  const auto pairs = dimer_pairs(n_sites, parity);
  if (n_samples < 1) throw ArgumentError("sample_dimer: at least one sample is required");
  const std::uint64_t seed = rng.seed();
  const std::uint64_t stream = rng.stream();
  std::vector<std::uint8_t> digits(n_samples * n_sites);
  for (std::size_t m = 0; m < n_samples; ++m)
    fill_dimer_row(std::span(digits).subspan(m * n_sites, n_sites), pairs, rng);
  return SampleMatrix(n_samples, n_sites, 2, Encoding::spin_half, std::move(digits), seed, stream);
}

SampleMatrix sample_combined_dimer(std::size_t n_sites, std::size_t n_samples, RngStream& rng) {
  const auto pairs_a = dimer_pairs(n_sites, DimerParity::A);
  const auto pairs_b = dimer_pairs(n_sites, DimerParity::B);
  if (n_samples < 1) throw ArgumentError("sample_combined_dimer: at least one sample is required");
  const std::uint64_t seed = rng.seed();
  const std::uint64_t stream = rng.stream();
  std::vector<std::uint8_t> digits(n_samples * n_sites);
  for (std::size_t m = 0; m < n_samples; ++m)
    fill_dimer_row(std::span(digits).subspan(m * n_sites, n_sites), rng.coin() ? pairs_b : pairs_a, rng);
  return SampleMatrix(n_samples, n_sites, 2, Encoding::spin_half, std::move(digits), seed, stream);
}

// ---------------------------------------------------------------------------
// CSV form:
//   # N=<n> local_dim=<d> encoding=<tag> seed=<s> stream=<id>
//   d,d,d,...

void write_samples_csv(const SampleMatrix& samples, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << "# N=" << samples.n_sites() << " local_dim=" << samples.local_dim()
      << " encoding=" << to_string(samples.encoding()) << " seed=" << samples.seed()
      << " stream=" << samples.stream() << '\n';
  for (std::size_t m = 0; m < samples.n_samples(); ++m) {
    const auto row = samples.row(m);
    for (std::size_t s = 0; s < row.size(); ++s) {
      if (s) out << ',';
      out << static_cast<int>(row[s]);
    }
    out << '\n';
  }
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

namespace {

template <typename T>
T parse_number(std::string_view text, const std::string& context) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw IoError(context + ": cannot parse '" + std::string(text) + "'");
  return value;
}

}  // namespace

SampleMatrix read_samples_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  const std::string ctx = path.string();
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) throw IoError(ctx + ": missing '# N=...' header");

  std::size_t n_sites = 0;
  std::size_t local_dim = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::string encoding_tag;
  std::istringstream header(line.substr(2));
  std::string field;
  while (header >> field) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw IoError(ctx + ": malformed header field '" + field + "'");
    const std::string key = field.substr(0, eq);
    const std::string_view value = std::string_view(field).substr(eq + 1);
    if (key == "N") n_sites = parse_number<std::size_t>(value, ctx);
    else if (key == "local_dim") local_dim = parse_number<std::size_t>(value, ctx);
    else if (key == "encoding") encoding_tag = std::string(value);
    else if (key == "seed") seed = parse_number<std::uint64_t>(value, ctx);
    else if (key == "stream") stream = parse_number<std::uint64_t>(value, ctx);
    else throw IoError(ctx + ": unknown header field '" + key + "'");
  }
  const Encoding encoding = parse_encoding(encoding_tag);

  std::vector<std::uint8_t> digits;
  std::size_t n_samples = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t count = 0;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      const std::size_t comma = std::min(line.find(',', pos), line.size());
      digits.push_back(static_cast<std::uint8_t>(
          parse_number<unsigned>(std::string_view(line).substr(pos, comma - pos), ctx)));
      ++count;
      pos = comma + 1;
    }
    if (count != n_sites)
      throw IoError(ctx + ": row " + std::to_string(n_samples + 1) + " has " + std::to_string(count) + " digits");
    ++n_samples;
  }
  return SampleMatrix(n_samples, n_sites, local_dim, encoding, std::move(digits), seed, stream);
}

}  // namespace phasemap
