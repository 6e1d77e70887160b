#include "lrlab/linalg.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "lrlab/errors.hpp"

namespace lrlab {

namespace pauli {

Matrix I() { return Matrix::Identity(2, 2); }

Matrix X() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix Y() {
  Matrix m(2, 2);
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}

Matrix Z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Matrix from_name(const std::string& name) {
  if (name.size() == 1) {
    switch (std::toupper(static_cast<unsigned char>(name[0]))) {
      case 'I': return I();
      case 'X': return X();
      case 'Y': return Y();
      case 'Z': return Z();
      default: break;
    }
  }
  throw DomainError("unknown Pauli name '" + name + "' (expected I, X, Y or Z)");
}

}  // namespace pauli

bool is_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_anti_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m + m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool all_finite(const Matrix& m) { return m.allFinite(); }

Matrix expm_hermitian(const Matrix& h, double tau) {
  if (tau == 0.0) return Matrix::Identity(h.rows(), h.cols());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const RealVector& e = es.eigenvalues();
  Vector phases(e.size());
  for (Index i = 0; i < e.size(); ++i) phases(i) = std::polar(1.0, -tau * e(i));
  const Matrix& v = es.eigenvectors();
  return v * phases.asDiagonal() * v.adjoint();
}

Matrix unitary_generator(const Matrix& u) {
  // Schur form of a normal matrix is diagonal with a unitary basis.
  Eigen::ComplexSchur<Matrix> schur(u);
  const Matrix& q = schur.matrixU();
  const Matrix& t = schur.matrixT();
  RealVector angles(t.rows());
  for (Index i = 0; i < t.rows(); ++i) angles(i) = -std::arg(t(i, i));
  Matrix k = q * angles.cast<cplx>().asDiagonal() * q.adjoint();
  return (k + k.adjoint()) * 0.5;
}

}  // namespace lrlab
