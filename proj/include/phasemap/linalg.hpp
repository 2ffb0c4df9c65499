#pragma once

#include <Eigen/Dense>

namespace phasemap::linalg {

/// Eigenvalues ascending; eigenvectors as columns when requested (empty otherwise).
struct HermitianEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;
};

/// Dense Hermitian eigendecomposition. Matrices whose imaginary part is
/// identically zero take the real-symmetric path.
HermitianEigen hermitian_eigen(const Eigen::MatrixXcd& a, bool with_vectors);

/// Eigenvalues (ascending) of a real symmetric matrix; only the lower triangle is read.
Eigen::VectorXd symmetric_eigenvalues(Eigen::MatrixXd a);

/// Full decomposition of a real symmetric matrix, eigenvalues ascending.
void symmetric_eigen(Eigen::MatrixXd& a_in_vectors_out, Eigen::VectorXd& values);

}  // namespace phasemap::linalg
