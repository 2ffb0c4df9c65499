#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dense_oracle.hpp"
#include "phasemap/error.hpp"
#include "phasemap/linalg.hpp"
#include "phasemap/spin_models.hpp"

using namespace phasemap;

namespace {

Eigen::VectorXd sorted_spectrum(const Eigen::MatrixXcd& m) { return linalg::hermitian_eigen(m, false).values; }

double max_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return (a - b).cwiseAbs().maxCoeff(); }

void check_values(const Eigen::VectorXd& got, std::vector<double> want, double tol = 1e-12) {
  REQUIRE(static_cast<std::size_t>(got.size()) == want.size());
  std::sort(want.begin(), want.end());
  for (std::size_t i = 0; i < want.size(); ++i) CHECK(got[static_cast<Eigen::Index>(i)] == doctest::Approx(want[i]).epsilon(tol));
}

}  // namespace

TEST_CASE("basis digits: site 0 is the most significant digit") {
  CHECK(basis_digit(5, 0, 3, 2) == 1);  // 101
  CHECK(basis_digit(5, 1, 3, 2) == 0);
  CHECK(basis_digit(5, 2, 3, 2) == 1);
  const std::vector<int> digits{2, 0, 1};
  CHECK(basis_index(digits, 3) == 19);
  CHECK(basis_digits(19, 3, 3) == digits);
}

TEST_CASE("clock: single site with f = 1 is the circulant -(tau + tau^dag)") {
  const auto h = build_clock_hamiltonian({.n_sites = 1, .f = 1.0, .theta = 0.0});
  check_values(sorted_spectrum(h.to_dense()), {-2.0, 1.0, 1.0});
}

TEST_CASE("clock: two sites at f = 0 have a threefold ground level at -2") {
  const auto h = build_clock_hamiltonian({.n_sites = 2, .f = 0.0, .theta = 0.0});
  const Eigen::VectorXd e = sorted_spectrum(h.to_dense());
  CHECK(e[0] == doctest::Approx(-2.0));
  CHECK(e[2] == doctest::Approx(-2.0));
  CHECK(e[3] > -2.0 + 1e-6);
}

TEST_CASE("clock: matches the dense construction and commutes with the global shift") {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t n = 1; n <= 5; ++n) {
    const double f = u(gen);
    const double theta = u(gen) * std::numbers::pi;
    const Eigen::MatrixXcd sparse = build_clock_hamiltonian({.n_sites = n, .f = f, .theta = theta}).to_dense();
    const Eigen::MatrixXcd dense = oracle::clock(n, f, theta);
    CHECK(max_diff(sparse, dense) < 1e-12);
    const Eigen::MatrixXcd shift = oracle::global_shift(n);
    CHECK((sparse * shift - shift * sparse).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("clock: dimension cap") {
  CHECK_THROWS_AS(build_clock_hamiltonian({.n_sites = 14, .f = 0.5, .theta = 0.0}), CapacityError);
  CHECK_THROWS_AS(build_clock_hamiltonian({.n_sites = 4, .f = 0.5, .theta = 0.0, .max_dim = 80}), CapacityError);
}

TEST_CASE("j1j2: open two-site bond spectrum") {
  const auto h = build_j1j2_hamiltonian({.n_sites = 2, .j1 = 1.0, .j2 = 0.0, .g = 0.0, .boundary = Boundary::open});
  check_values(sorted_spectrum(h.to_dense()), {-0.75, 0.25, 0.25, 0.25});
}

TEST_CASE("j1j2: four-site ring at J2 = 1/2 has a twofold ground level") {
  // For N = 4 the literal periodic sums give H = S(S+1)/2 - 3/2 in total spin S:
  // levels -3/2 (S=0, twice), -1/2 (S=1, nine states), 3/2 (S=2, five states).
  const auto h = build_j1j2_hamiltonian({.n_sites = 4, .j1 = 1.0, .j2 = 0.5, .g = 0.0});
  const Eigen::VectorXd e = sorted_spectrum(h.to_dense());
  CHECK(e[0] == doctest::Approx(-1.5));
  CHECK(e[1] == doctest::Approx(-1.5));
  CHECK(e[2] == doctest::Approx(-0.5));
  CHECK(e[15] == doctest::Approx(1.5));
}

TEST_CASE("j1j2: matches the dense construction and conserves total Sz") {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t n : {2u, 4u, 6u, 8u}) {
    for (bool periodic : {true, false}) {
      const double j2 = u(gen), g = 0.1 * u(gen);
      const auto h = build_j1j2_hamiltonian(
          {.n_sites = n, .j1 = 1.0, .j2 = j2, .g = g, .boundary = periodic ? Boundary::periodic : Boundary::open});
      const Eigen::MatrixXcd sparse = h.to_dense();
      CHECK(max_diff(sparse, oracle::j1j2(n, 1.0, j2, g, periodic)) < 1e-12);
      const Eigen::MatrixXcd sz = oracle::total_sz(n);
      CHECK((sparse * sz - sz * sparse).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(h.is_real());
    }
  }
}

TEST_CASE("j1j2: odd chains are rejected") {
  CHECK_THROWS_AS(build_j1j2_hamiltonian({.n_sites = 5}), ArgumentError);
}

TEST_CASE("heisenberg: two-site ring double counts the bond") {
  const auto h = build_heisenberg_disorder_hamiltonian({.n_sites = 2, .j = 1.0, .h_max = 0.0, .fields = {0.0, 0.0}});
  check_values(sorted_spectrum(h.to_dense()), {-1.5, 0.5, 0.5, 0.5});
}

TEST_CASE("heisenberg: pure staggered field") {
  const auto h = build_heisenberg_disorder_hamiltonian(
      {.n_sites = 4, .j = 0.0, .h_max = 1.5, .fields = {1.0, -1.0, 1.0, -1.0}});
  const Eigen::VectorXd e = sorted_spectrum(h.to_dense());
  CHECK(e[0] == doctest::Approx(-2.0));
  const Eigen::MatrixXcd d = h.to_dense();
  CHECK((d - Eigen::MatrixXcd(d.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("heisenberg: global field shift moves levels by c times Sz") {
  const std::size_t n = 4;
  const std::vector<double> zero(n, 0.0), shifted(n, 0.3);
  const Eigen::MatrixXcd h0 =
      build_heisenberg_disorder_hamiltonian({.n_sites = n, .j = 1.0, .h_max = 0.0, .fields = zero}).to_dense();
  const Eigen::MatrixXcd h1 =
      build_heisenberg_disorder_hamiltonian({.n_sites = n, .j = 1.0, .h_max = 0.5, .fields = shifted}).to_dense();
  CHECK(max_diff(h1 - 0.3 * oracle::total_sz(n), h0) < 1e-12);
}

TEST_CASE("heisenberg: matches the dense construction, conserves Sz, validates fields") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t n = 2; n <= 7; ++n) {
    std::vector<double> fields(n);
    for (auto& f : fields) f = 2.0 * u(gen);
    const auto h = build_heisenberg_disorder_hamiltonian({.n_sites = n, .j = 1.0, .h_max = 2.0, .fields = fields});
    const Eigen::MatrixXcd sparse = h.to_dense();
    CHECK(max_diff(sparse, oracle::heisenberg_disorder(n, 1.0, fields)) < 1e-12);
    const Eigen::MatrixXcd sz = oracle::total_sz(n);
    CHECK((sparse * sz - sz * sparse).cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK_THROWS_AS(build_heisenberg_disorder_hamiltonian({.n_sites = 3, .j = 1.0, .h_max = 1.0, .fields = {0.0}}),
                  ArgumentError);
  CHECK_THROWS_AS(
      build_heisenberg_disorder_hamiltonian({.n_sites = 2, .j = 1.0, .h_max = 1.0, .fields = {0.0, 1.5}}),
      ArgumentError);
}

TEST_CASE("tfim-nnn: small fixtures") {
  const auto bond = build_tfim_nnn_hamiltonian({.n_sites = 2, .j = 0.7, .delta_j_max = 0.0, .couplings = {0.7}});
  check_values(sorted_spectrum(bond.to_dense()), {-0.7, -0.7, 0.7, 0.7});
  const auto field =
      build_tfim_nnn_hamiltonian({.n_sites = 2, .j = 0.0, .delta_j_max = 0.0, .couplings = {0.0}, .j2 = 0.0, .h = 1.0});
  check_values(sorted_spectrum(field.to_dense()), {-2.0, 0.0, 0.0, 2.0});
  CHECK_THROWS_AS(build_tfim_nnn_hamiltonian({.n_sites = 3, .couplings = {1.0}}), ArgumentError);
}

TEST_CASE("tfim-nnn: matches the dense construction and is real symmetric") {
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t n = 2; n <= 7; ++n) {
    std::vector<double> couplings(n - 1);
    for (auto& c : couplings) c = 1.0 + 2.0 * u(gen);
    const auto h = build_tfim_nnn_hamiltonian(
        {.n_sites = n, .j = 1.0, .delta_j_max = 2.0, .couplings = couplings, .j2 = 0.3, .h = 0.6});
    CHECK(max_diff(h.to_dense(), oracle::tfim_nnn(n, couplings, 0.3, 0.6)) < 1e-12);
    CHECK(h.is_real());
  }
}

TEST_CASE("sparse and dense spectra agree for all four models") {
  const std::size_t n = 6;
  const std::vector<double> fields{0.3, -0.2, 0.9, -0.7, 0.1, 0.5};
  const std::vector<double> couplings{1.2, 0.4, 2.1, 1.7, 0.9};
  const std::vector<std::pair<SparseHamiltonian, Eigen::MatrixXcd>> cases{
      {build_clock_hamiltonian({.n_sites = n, .f = 0.4, .theta = 0.3}), oracle::clock(n, 0.4, 0.3)},
      {build_j1j2_hamiltonian({.n_sites = n, .j1 = 1.0, .j2 = 0.35, .g = 0.05}), oracle::j1j2(n, 1.0, 0.35, 0.05, true)},
      {build_heisenberg_disorder_hamiltonian({.n_sites = n, .j = 1.0, .h_max = 1.0, .fields = fields}),
       oracle::heisenberg_disorder(n, 1.0, fields)},
      {build_tfim_nnn_hamiltonian({.n_sites = n, .j = 1.0, .delta_j_max = 1.5, .couplings = couplings, .j2 = 0.3, .h = 0.6}),
       oracle::tfim_nnn(n, couplings, 0.3, 0.6)},
  };
  for (const auto& [sparse, dense] : cases) {
    const Eigen::VectorXd a = sorted_spectrum(sparse.to_dense());
    const Eigen::VectorXd b = sorted_spectrum(dense);
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("sparse matrix: apply, at and Hermiticity check") {
  const auto h = build_clock_hamiltonian({.n_sites = 3, .f = 0.3, .theta = 0.2});
  const Eigen::MatrixXcd d = h.to_dense();
  Eigen::VectorXcd x = Eigen::VectorXcd::Random(static_cast<Eigen::Index>(h.dim()));
  CHECK(((h * x) - d * x).norm() < 1e-12);
  CHECK(h.at(0, 0) == d(0, 0));
  CHECK(h.at(1, 0) == d(1, 0));
  CHECK(h.max_abs() == doctest::Approx(d.cwiseAbs().maxCoeff()));

  // A non-Hermitian 2x2 is rejected at construction.
  CHECK_THROWS_AS(SparseHamiltonian(1, 2, {0, 1, 1}, {1}, {Complex(1.0, 0.0)}), NumericError);
  CHECK_NOTHROW(SparseHamiltonian(1, 2, {0, 1, 2}, {1, 0}, {Complex(0.0, 1.0), Complex(0.0, -1.0)}));
}

TEST_CASE("neel state") {
  const Ket two = neel_state(2);
  const std::vector<int> down_up{kSpinDown, kSpinUp};
  CHECK(two.amplitudes()[static_cast<Eigen::Index>(basis_index(down_up, 2))] == Complex(1.0, 0.0));
  const Ket four = neel_state(4);
  CHECK(four.sz_expectation(0) == doctest::Approx(-0.5));
  CHECK(four.sz_expectation(1) == doctest::Approx(0.5));
  CHECK(four.sz_expectation(2) == doctest::Approx(-0.5));
  CHECK(four.sz_expectation(3) == doctest::Approx(0.5));
  for (std::size_t n = 1; n <= 9; ++n) {
    const Ket k = neel_state(n);
    CHECK(k.amplitudes().norm() == doctest::Approx(1.0));
    CHECK((k.amplitudes().array().abs() > 0.0).count() == 1);
  }
}

TEST_CASE("dimer states") {
  const Ket a2 = dimer_state(2, DimerParity::A);
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(a2.amplitudes()[0]) < 1e-15);
  CHECK(a2.amplitudes()[1].real() == doctest::Approx(r));
  CHECK(a2.amplitudes()[2].real() == doctest::Approx(-r));
  CHECK(std::abs(a2.amplitudes()[3]) < 1e-15);

  const Ket a4 = dimer_state(4, DimerParity::A);
  const Ket b4 = dimer_state(4, DimerParity::B);
  CHECK(std::abs(a4.amplitudes().dot(b4.amplitudes())) == doctest::Approx(0.5));

  // Every configuration with an aligned paired couple has zero amplitude.
  for (DimerParity parity : {DimerParity::A, DimerParity::B}) {
    const std::size_t n = 8;
    const Ket k = dimer_state(n, parity);
    for (std::size_t idx = 0; idx < k.dim(); ++idx)
      for (const auto& [i, j] : dimer_pairs(n, parity))
        if (basis_digit(idx, i, n, 2) == basis_digit(idx, j, n, 2)) {
          CHECK(std::abs(k.amplitudes()[static_cast<Eigen::Index>(idx)]) == 0.0);
          break;
        }
  }
  CHECK_THROWS_AS(dimer_state(5, DimerParity::A), ArgumentError);
  CHECK_THROWS_AS(dimer_state(18, DimerParity::A), CapacityError);
}

TEST_CASE("dimer pairs wrap for parity B") {
  const auto b = dimer_pairs(6, DimerParity::B);
  REQUIRE(b.size() == 3);
  CHECK(b[0] == std::pair<std::size_t, std::size_t>{1, 2});
  CHECK(b[2] == std::pair<std::size_t, std::size_t>{5, 0});
  const auto a = dimer_pairs(6, DimerParity::A);
  CHECK(a[0] == std::pair<std::size_t, std::size_t>{0, 1});
}

TEST_CASE("ket rejects unnormalized amplitudes") {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
  v[0] = 2.0;
  CHECK_THROWS_AS(Ket(v, 2, 2), ArgumentError);
}
