#include "dense_oracle.hpp"

#include <cmath>
#include <complex>
#include <numbers>

namespace oracle {

using C = std::complex<double>;

Mat pauli_x() {
  Mat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Mat pauli_y() {
  Mat m(2, 2);
  m << 0, C(0, -1), C(0, 1), 0;
  return m;
}

Mat pauli_z() {
  Mat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Mat clock_sigma() {
  const C w = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
  Mat m = Mat::Zero(3, 3);
  m(0, 0) = 1.0;
  m(1, 1) = w;
  m(2, 2) = w * w;
  return m;
}

Mat clock_tau() {
  Mat m(3, 3);
  m << 0, 0, 1, 1, 0, 0, 0, 1, 0;
  return m;
}

namespace {

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

Mat site_op(const Mat& op, std::size_t site, std::size_t n, std::size_t d) {
  Mat out = Mat::Identity(1, 1);
  for (std::size_t s = 0; s < n; ++s)
    out = kron(out, s == site ? op : Mat::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)));
  return out;
}

Mat heisenberg_bond(std::size_t a, std::size_t b, std::size_t n) {
  Mat out = Mat::Zero(1 << n, 1 << n);
  for (const Mat& p : {pauli_x(), pauli_y(), pauli_z()}) out += 0.25 * site_op(p, a, n, 2) * site_op(p, b, n, 2);
  return out;
}

Mat clock(std::size_t n, double f, double theta) {
  const C phase = std::polar(1.0, theta);
  const auto dim = static_cast<Eigen::Index>(std::pow(3.0, static_cast<double>(n)));
  Mat h = Mat::Zero(dim, dim);
  for (std::size_t j = 0; j < n; ++j) {
    const Mat t = phase * site_op(clock_tau(), j, n, 3);
    h -= f * (t + t.adjoint());
  }
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const Mat c = phase * site_op(clock_sigma(), j, n, 3) * site_op(clock_sigma(), j + 1, n, 3).adjoint();
    h -= (1.0 - f) * (c + c.adjoint());
  }
  return h;
}

Mat j1j2(std::size_t n, double j1, double j2, double g, bool periodic) {
  Mat h = Mat::Zero(1 << n, 1 << n);
  for (std::size_t j = 0; j < n; ++j) {
    // 1-based site label j + 1; the perturbation weight 1 - (-1)^{j+1} is 2 on odd labels.
    const double bond = j1 + ((j + 1) % 2 == 1 ? 2.0 * g : 0.0);
    if (periodic || j + 1 < n) h += bond * heisenberg_bond(j, (j + 1) % n, n);
    if (periodic || j + 2 < n) h += j2 * heisenberg_bond(j, (j + 2) % n, n);
  }
  return h;
}

Mat heisenberg_disorder(std::size_t n, double j, const std::vector<double>& fields) {
  Mat h = Mat::Zero(1 << n, 1 << n);
  for (std::size_t i = 0; i < n; ++i) {
    h += j * heisenberg_bond(i, (i + 1) % n, n);
    h += fields[i] * 0.5 * site_op(pauli_z(), i, n, 2);
  }
  return h;
}

Mat tfim_nnn(std::size_t n, const std::vector<double>& couplings, double j2, double h_field) {
  Mat h = Mat::Zero(1 << n, 1 << n);
  for (std::size_t i = 0; i + 1 < n; ++i)
    h -= couplings[i] * site_op(pauli_z(), i, n, 2) * site_op(pauli_z(), i + 1, n, 2);
  for (std::size_t i = 0; i + 2 < n; ++i) h += j2 * site_op(pauli_z(), i, n, 2) * site_op(pauli_z(), i + 2, n, 2);
  for (std::size_t i = 0; i < n; ++i) h += h_field * site_op(pauli_x(), i, n, 2);
  return h;
}

Mat total_sz(std::size_t n) {
  Mat s = Mat::Zero(1 << n, 1 << n);
  for (std::size_t i = 0; i < n; ++i) s += 0.5 * site_op(pauli_z(), i, n, 2);
  return s;
}

Mat global_shift(std::size_t n) {
  Mat out = Mat::Identity(1, 1);
  for (std::size_t s = 0; s < n; ++s) out = kron(out, clock_tau());
  return out;
}

}  // namespace oracle
