#include "lrlab/random.hpp"

#include <cmath>

#include <Eigen/QR>

namespace lrlab {

Matrix ginibre(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = cplx(re, im) / std::sqrt(2.0);
    }
  return m;
}

Matrix haar_unitary(Index dim, Rng& rng) {
  const Matrix z = ginibre(dim, dim, rng);
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ() * Matrix::Identity(dim, dim);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index i = 0; i < dim; ++i) {
    const cplx d = r(i, i);
    q.col(i) *= (std::abs(d) > 0.0) ? d / std::abs(d) : cplx(1.0);
  }
  return q;
}

Matrix random_hermitian(Index dim, Rng& rng, double norm) {
  const Matrix g = ginibre(dim, dim, rng);
  Matrix h = (g + g.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  const double current = es.eigenvalues().cwiseAbs().maxCoeff();
  return h * (norm / current);
}

PureState random_state(int n_qubits, Rng& rng) {
  return PureState::normalized(n_qubits, ginibre(dim_of(n_qubits), 1, rng).col(0));
}

PureState random_product_state(int n_qubits, Rng& rng) {
  std::vector<Vector> factors;
  for (int q = 0; q < n_qubits; ++q) factors.push_back(ginibre(2, 1, rng).col(0));
  return PureState::product(factors);
}

Matrix random_density(Index dim, Rng& rng) {
  const Matrix g = ginibre(dim, dim, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return (rho + rho.adjoint()) * 0.5;
}

}  // namespace lrlab
