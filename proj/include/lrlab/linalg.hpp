#pragma once

#include <complex>
#include <cstdint>
#include <functional>

#include <Eigen/Dense>

namespace lrlab {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// y = A x for an implicitly represented operator.
using LinearMap = std::function<Vector(const Vector&)>;

inline Index dim_of(int n_qubits) { return Index{1} << n_qubits; }

namespace pauli {
Matrix I();
Matrix X();
Matrix Y();
Matrix Z();
/// Pauli by letter: one of "I", "X", "Y", "Z" (case-insensitive).
Matrix from_name(const std::string& name);
}  // namespace pauli

bool is_hermitian(const Matrix& m, double tol = 1e-12);
bool is_anti_hermitian(const Matrix& m, double tol = 1e-12);
bool all_finite(const Matrix& m);

/// exp(-i * tau * h) for Hermitian h via its eigendecomposition.
Matrix expm_hermitian(const Matrix& h, double tau);

/// Hermitian matrix logarithm K of a unitary: exp(-i K) = u, spectrum in (-pi, pi].
Matrix unitary_generator(const Matrix& u);

}  // namespace lrlab
