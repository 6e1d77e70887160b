#pragma once

#include <optional>
#include <span>
#include <vector>

#include "lrlab/linalg.hpp"

namespace lrlab {

// Qubit 0 is the most significant tensor factor: basis index bit (n-1-q)
// holds qubit q. The same convention orders the support of local operators.

/// Operator on an ordered list of qubits; matrix dimension is 2^|support|.
class DenseOperator {
 public:
  DenseOperator(Matrix m, std::vector<int> support);

  static DenseOperator identity(std::vector<int> support);
  /// Full-system operator on qubits 0..n-1.
  static DenseOperator on_all(Matrix m);

  const Matrix& matrix() const { return m_; }
  const std::vector<int>& support() const { return support_; }
  int num_qubits() const { return static_cast<int>(support_.size()); }
  Index dim() const { return m_.rows(); }

  DenseOperator adjoint() const { return DenseOperator(m_.adjoint(), support_); }

 private:
  Matrix m_;
  std::vector<int> support_;
};

/// Normalized state vector on n qubits.
class PureState {
 public:
  /// Amplitudes must already have unit norm (within 1e-12).
  PureState(int n_qubits, Vector amplitudes);

  static PureState normalized(int n_qubits, Vector amplitudes);
  static PureState basis(int n_qubits, std::uint64_t index);
  /// Tensor product of single-qubit states (each normalized on input).
  static PureState product(std::span<const Vector> qubits);
  static PureState all_plus(int n_qubits);
  /// (|0..0> + sign |1..1>) / sqrt(2)
  static PureState ghz(int n_qubits, double sign = 1.0);

  int num_qubits() const { return n_; }
  const Vector& amplitudes() const { return amp_; }
  Index dim() const { return amp_.size(); }

 private:
  int n_;
  Vector amp_;
};

/// Hermitian, unit-trace, positive semidefinite (eigenvalues >= -1e-10).
class DensityMatrix {
 public:
  DensityMatrix(Matrix m);

  static DensityMatrix from_pure(const PureState& psi);

  const Matrix& matrix() const { return m_; }
  Index dim() const { return m_.rows(); }
  int num_qubits() const { return n_; }

 private:
  Matrix m_;
  int n_;
};

/// embed(op) = op on its support, identity elsewhere, as a 2^n matrix.
DenseOperator kron_embed(const DenseOperator& op, int n_qubits);

/// kron_embed(op, n) * v without forming the 2^n matrix.
Vector apply_local(const Vector& v, int n_qubits, const DenseOperator& op);
Vector apply_local(const PureState& psi, const DenseOperator& op);

/// embed(op) * m and m * embed(op) for a full 2^n matrix m.
Matrix multiply_local_left(const DenseOperator& op, const Matrix& m, int n_qubits);
Matrix multiply_local_right(const Matrix& m, const DenseOperator& op, int n_qubits);

/// Reduced density operator on `keep` (sorted ascending in the result).
DensityMatrix partial_trace(const PureState& psi, std::span<const int> keep);
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);
/// Unnormalized partial trace of an arbitrary 2^n operator.
Matrix partial_trace_matrix(const Matrix& m, int n_qubits, std::span<const int> keep);

/// X_keep = Tr_rest |psi2><psi1|, so Tr(O X_keep) = <psi1|O|psi2> for O on keep.
DenseOperator transition_matrix(const PureState& psi1, const PureState& psi2,
                                std::span<const int> keep);

/// Largest singular value, computed densely.
double operator_norm(const Matrix& m);
inline double operator_norm(const DenseOperator& op) { return operator_norm(op.matrix()); }

struct PowerIterationOptions {
  double relative_tolerance = 1e-8;
  /// Absolute floor added to the relative convergence test.
  double absolute_tolerance = 1e-9;
  int max_iterations = 2000;
  std::uint64_t seed = 12345;
};

struct NormEstimate {
  double value = 0.0;        ///< current estimate of ||A||
  double lower_bound = 0.0;  ///< ||A v|| / ||v|| for the best vector seen
  int iterations = 0;
};

/// ||A|| by power iteration on A^dagger A. Throws ConvergenceError (carrying
/// the best estimate) when the relative change stays above tolerance.
NormEstimate operator_norm_power(const LinearMap& apply, const LinearMap& apply_adjoint,
                                 Index dim, const PowerIterationOptions& options = {});

/// Sum of singular values.
double trace_norm(const Matrix& m);
inline double trace_norm(const DenseOperator& op) { return trace_norm(op.matrix()); }

/// Unitary O with Tr(O X) = ||X||_1 (so the maximum over ||O|| <= 1 is attained).
Matrix trace_norm_maximizer(const Matrix& x);

/// Entropy in bits. Eigenvalues in [-1e-10, 0) are clamped to zero.
double von_neumann_entropy(const DensityMatrix& rho);
double entropy_of_spectrum(const RealVector& eigenvalues);

/// Normalized partial trace over `outside`, tensored with the identity there.
/// Equals the Haar twirl of op over unitaries on `outside`.
DenseOperator haar_truncate(const DenseOperator& op, std::span<const int> outside);

/// Monte-Carlo Haar twirl; cross-check for haar_truncate only.
DenseOperator haar_twirl_sampled(const DenseOperator& op, std::span<const int> outside,
                                 int samples, std::uint64_t seed);

/// <psi|embed(op)|psi>
cplx expectation(const PureState& psi, const DenseOperator& op);

}  // namespace lrlab
