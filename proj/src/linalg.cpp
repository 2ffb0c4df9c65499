#include "phasemap/linalg.hpp"

#include <Eigen/Eigenvalues>

#include "phasemap/error.hpp"

namespace phasemap::linalg {
namespace {

template <class Solver>
void check(const Solver& solver, const char* what) {
  if (solver.info() != Eigen::Success) throw NumericError(std::string(what) + ": eigensolver did not converge");
}

}  // namespace

void symmetric_eigen(Eigen::MatrixXd& a, Eigen::VectorXd& values) {
  if (a.rows() == 0) {
    values.resize(0);
    return;
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::ComputeEigenvectors);
  check(solver, "symmetric_eigen");
  values = solver.eigenvalues();
  a = solver.eigenvectors();
}

Eigen::VectorXd symmetric_eigenvalues(Eigen::MatrixXd a) {
  if (a.rows() == 0) return {};
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
  check(solver, "symmetric_eigenvalues");
  return solver.eigenvalues();
}

HermitianEigen hermitian_eigen(const Eigen::MatrixXcd& a, bool with_vectors) {
  if (a.rows() != a.cols()) throw ArgumentError("hermitian_eigen: matrix must be square");
  HermitianEigen out;
  if (a.rows() == 0) return out;
  const int options = with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly;

  if ((a.imag().array() == 0.0).all()) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.real(), options);
    check(solver, "hermitian_eigen");
    out.values = solver.eigenvalues();
    if (with_vectors) out.vectors = solver.eigenvectors().cast<std::complex<double>>();
    return out;
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a, options);
  check(solver, "hermitian_eigen");
  out.values = solver.eigenvalues();
  if (with_vectors) out.vectors = solver.eigenvectors();
  return out;
}

}  // namespace phasemap::linalg
