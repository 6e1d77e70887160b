#include "lrlab/quantum.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <spdlog/spdlog.h>

#include "lrlab/errors.hpp"
#include "lrlab/random.hpp"

namespace lrlab {

namespace {

constexpr double kNormTolerance = 1e-12;
constexpr double kHermitianTolerance = 1e-12;
constexpr double kTraceTolerance = 1e-12;
constexpr double kPsdTolerance = -1e-10;

int log2_dim(Index dim) {
  int n = 0;
  while ((Index{1} << n) < dim) ++n;
  if ((Index{1} << n) != dim) throw DomainError("dimension " + std::to_string(dim) + " is not a power of two");
  return n;
}

void check_support(std::span<const int> support, int n_qubits, const char* what) {
  std::vector<int> sorted(support.begin(), support.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw DomainError(std::string(what) + ": repeated qubit in support");
  for (int q : sorted)
    if (q < 0 || q >= n_qubits)
      throw DomainError(std::string(what) + ": qubit " + std::to_string(q) + " out of range for " +
                        std::to_string(n_qubits) + " qubits");
}

/// Offsets of the 2^k local basis states of `support` inside an n-qubit index.
std::vector<Index> local_offsets(std::span<const int> support, int n) {
  const int k = static_cast<int>(support.size());
  std::vector<Index> off(Index{1} << k, 0);
  for (Index j = 0; j < static_cast<Index>(off.size()); ++j) {
    Index o = 0;
    for (int i = 0; i < k; ++i)
      if ((j >> (k - 1 - i)) & 1) o |= Index{1} << (n - 1 - support[i]);
    off[j] = o;
  }
  return off;
}

Index support_mask(std::span<const int> support, int n) {
  Index mask = 0;
  for (int q : support) mask |= Index{1} << (n - 1 - q);
  return mask;
}

/// Base indices (all support bits zero) of an n-qubit register.
std::vector<Index> base_indices(Index mask, int n) {
  std::vector<Index> bases;
  bases.reserve(static_cast<std::size_t>(dim_of(n) >> std::popcount(static_cast<std::uint64_t>(mask))));
  for (Index i = 0; i < dim_of(n); ++i)
    if ((i & mask) == 0) bases.push_back(i);
  return bases;
}

std::vector<int> complement_of(std::span<const int> keep, int n) {
  std::vector<int> rest;
  for (int q = 0; q < n; ++q)
    if (std::find(keep.begin(), keep.end(), q) == keep.end()) rest.push_back(q);
  return rest;
}

std::vector<int> sorted_unique(std::span<const int> qubits) {
  std::vector<int> out(qubits.begin(), qubits.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Rows: keep index, columns: rest index.
Matrix reshape_state(const Vector& amp, int n, std::span<const int> keep) {
  const std::vector<int> rest = complement_of(keep, n);
  const auto keep_off = local_offsets(keep, n);
  const auto rest_off = local_offsets(rest, n);
  Matrix m(static_cast<Index>(keep_off.size()), static_cast<Index>(rest_off.size()));
  for (Index r = 0; r < m.cols(); ++r)
    for (Index a = 0; a < m.rows(); ++a) m(a, r) = amp(keep_off[a] | rest_off[r]);
  return m;
}

Matrix hermitian_part(const Matrix& m) { return (m + m.adjoint()) * 0.5; }

}  // namespace

DenseOperator::DenseOperator(Matrix m, std::vector<int> support) : m_(std::move(m)), support_(std::move(support)) {
  if (m_.rows() != m_.cols()) throw DomainError("DenseOperator must be square");
  if (m_.rows() != dim_of(static_cast<int>(support_.size())))
    throw DomainError("DenseOperator dimension " + std::to_string(m_.rows()) + " does not match support size " +
                      std::to_string(support_.size()));
  check_support(support_, 64, "DenseOperator");
  if (!m_.allFinite()) throw DomainError("DenseOperator has non-finite entries");
}

DenseOperator DenseOperator::identity(std::vector<int> support) {
  const Index d = dim_of(static_cast<int>(support.size()));
  return DenseOperator(Matrix::Identity(d, d), std::move(support));
}

DenseOperator DenseOperator::on_all(Matrix m) {
  const int n = log2_dim(m.rows());
  std::vector<int> support(n);
  std::iota(support.begin(), support.end(), 0);
  return DenseOperator(std::move(m), std::move(support));
}

PureState::PureState(int n_qubits, Vector amplitudes) : n_(n_qubits), amp_(std::move(amplitudes)) {
  if (n_ < 1) throw DomainError("PureState needs at least one qubit");
  if (amp_.size() != dim_of(n_)) throw DomainError("PureState amplitude count does not match 2^n");
  if (!amp_.allFinite()) throw DomainError("PureState has non-finite amplitudes");
  if (std::abs(amp_.norm() - 1.0) > kNormTolerance)
    throw DomainError("PureState is not normalized (norm " + std::to_string(amp_.norm()) + ")");
}

PureState PureState::normalized(int n_qubits, Vector amplitudes) {
  const double nrm = amplitudes.norm();
  if (!(nrm > 0.0)) throw DomainError("cannot normalize a zero vector");
  return PureState(n_qubits, amplitudes / nrm);
}

PureState PureState::basis(int n_qubits, std::uint64_t index) {
  Vector v = Vector::Zero(dim_of(n_qubits));
  if (static_cast<Index>(index) >= v.size()) throw DomainError("basis index out of range");
  v(static_cast<Index>(index)) = 1.0;
  return PureState(n_qubits, std::move(v));
}

PureState PureState::product(std::span<const Vector> qubits) {
  Vector v = Vector::Ones(1);
  for (const Vector& q : qubits) {
    if (q.size() != 2) throw DomainError("product state factors must be single-qubit vectors");
    const Vector qn = q / q.norm();
    Vector next(v.size() * 2);
    for (Index i = 0; i < v.size(); ++i) {
      next(2 * i) = v(i) * qn(0);
      next(2 * i + 1) = v(i) * qn(1);
    }
    v = std::move(next);
  }
  return PureState::normalized(static_cast<int>(qubits.size()), std::move(v));
}

PureState PureState::all_plus(int n_qubits) {
  const Index d = dim_of(n_qubits);
  return PureState(n_qubits, Vector::Constant(d, 1.0 / std::sqrt(static_cast<double>(d))));
}

PureState PureState::ghz(int n_qubits, double sign) {
  Vector v = Vector::Zero(dim_of(n_qubits));
  v(0) = 1.0 / std::sqrt(2.0);
  v(v.size() - 1) = sign / std::sqrt(2.0);
  return PureState::normalized(n_qubits, std::move(v));
}

DensityMatrix::DensityMatrix(Matrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw DomainError("DensityMatrix must be square");
  n_ = log2_dim(m_.rows());
  if (!m_.allFinite()) throw DomainError("DensityMatrix has non-finite entries");
  if (!is_hermitian(m_, kHermitianTolerance)) throw DomainError("DensityMatrix is not Hermitian");
  m_ = hermitian_part(m_);
  const double tr = m_.trace().real();
  if (std::abs(tr - 1.0) > kTraceTolerance)
    throw DomainError("DensityMatrix trace is " + std::to_string(tr) + ", expected 1");
  Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < kPsdTolerance)
    throw DomainError("DensityMatrix has eigenvalue " + std::to_string(es.eigenvalues().minCoeff()) +
                      " below the PSD tolerance");
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  return DensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint());
}

DenseOperator kron_embed(const DenseOperator& op, int n_qubits) {
  check_support(op.support(), n_qubits, "kron_embed");
  const Index d = dim_of(n_qubits);
  Matrix out = multiply_local_left(op, Matrix::Identity(d, d), n_qubits);
  return DenseOperator::on_all(std::move(out));
}

Vector apply_local(const Vector& v, int n_qubits, const DenseOperator& op) {
  if (v.size() != dim_of(n_qubits))
    throw DomainError("apply_local: vector length " + std::to_string(v.size()) + " does not match 2^" +
                      std::to_string(n_qubits));
  check_support(op.support(), n_qubits, "apply_local");
  const auto off = local_offsets(op.support(), n_qubits);
  const Index k = static_cast<Index>(off.size());
  const Index mask = support_mask(op.support(), n_qubits);
  const Matrix& m = op.matrix();
  Vector out(v.size());
  Vector x(k);
  for (Index base = 0; base < v.size(); ++base) {
    if (base & mask) continue;
    for (Index j = 0; j < k; ++j) x(j) = v(base | off[j]);
    for (Index i = 0; i < k; ++i) {
      cplx acc = 0.0;
      for (Index j = 0; j < k; ++j) acc += m(i, j) * x(j);
      out(base | off[i]) = acc;
    }
  }
  return out;
}

Vector apply_local(const PureState& psi, const DenseOperator& op) {
  return apply_local(psi.amplitudes(), psi.num_qubits(), op);
}

Matrix multiply_local_left(const DenseOperator& op, const Matrix& m, int n_qubits) {
  if (m.rows() != dim_of(n_qubits)) throw DomainError("multiply_local_left: dimension mismatch");
  check_support(op.support(), n_qubits, "multiply_local_left");
  const auto off = local_offsets(op.support(), n_qubits);
  const Index k = static_cast<Index>(off.size());
  const auto bases = base_indices(support_mask(op.support(), n_qubits), n_qubits);
  Matrix out(m.rows(), m.cols());
  Matrix block(k, m.cols());
  for (Index base : bases) {
    for (Index j = 0; j < k; ++j) block.row(j) = m.row(base | off[j]);
    const Matrix res = op.matrix() * block;
    for (Index i = 0; i < k; ++i) out.row(base | off[i]) = res.row(i);
  }
  return out;
}

Matrix multiply_local_right(const Matrix& m, const DenseOperator& op, int n_qubits) {
  if (m.cols() != dim_of(n_qubits)) throw DomainError("multiply_local_right: dimension mismatch");
  check_support(op.support(), n_qubits, "multiply_local_right");
  const auto off = local_offsets(op.support(), n_qubits);
  const Index k = static_cast<Index>(off.size());
  const auto bases = base_indices(support_mask(op.support(), n_qubits), n_qubits);
  Matrix out(m.rows(), m.cols());
  Matrix block(m.rows(), k);
  for (Index base : bases) {
    for (Index j = 0; j < k; ++j) block.col(j) = m.col(base | off[j]);
    const Matrix res = block * op.matrix();
    for (Index i = 0; i < k; ++i) out.col(base | off[i]) = res.col(i);
  }
  return out;
}

DensityMatrix partial_trace(const PureState& psi, std::span<const int> keep) {
  if (keep.empty()) throw DomainError("partial_trace: keep set is empty");
  const std::vector<int> k = sorted_unique(keep);
  check_support(k, psi.num_qubits(), "partial_trace");
  const Matrix m = reshape_state(psi.amplitudes(), psi.num_qubits(), k);
  return DensityMatrix(m * m.adjoint());
}

Matrix partial_trace_matrix(const Matrix& m, int n_qubits, std::span<const int> keep) {
  if (m.rows() != dim_of(n_qubits) || m.cols() != m.rows())
    throw DomainError("partial_trace_matrix: dimension mismatch");
  check_support(keep, n_qubits, "partial_trace_matrix");
  const std::vector<int> rest = complement_of(keep, n_qubits);
  const auto keep_off = local_offsets(keep, n_qubits);
  const auto rest_off = local_offsets(rest, n_qubits);
  const Index dk = static_cast<Index>(keep_off.size());
  Matrix out = Matrix::Zero(dk, dk);
  for (Index b = 0; b < dk; ++b)
    for (Index a = 0; a < dk; ++a) {
      cplx acc = 0.0;
      for (Index r : rest_off) acc += m(keep_off[a] | r, keep_off[b] | r);
      out(a, b) = acc;
    }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
  if (keep.empty()) throw DomainError("partial_trace: keep set is empty");
  const std::vector<int> k = sorted_unique(keep);
  return DensityMatrix(partial_trace_matrix(rho.matrix(), rho.num_qubits(), k));
}

DenseOperator transition_matrix(const PureState& psi1, const PureState& psi2, std::span<const int> keep) {
  if (psi1.num_qubits() != psi2.num_qubits()) throw DomainError("transition_matrix: qubit counts differ");
  if (keep.empty()) throw DomainError("transition_matrix: keep set is empty");
  const std::vector<int> k = sorted_unique(keep);
  check_support(k, psi1.num_qubits(), "transition_matrix");
  const Matrix m1 = reshape_state(psi1.amplitudes(), psi1.num_qubits(), k);
  const Matrix m2 = reshape_state(psi2.amplitudes(), psi2.num_qubits(), k);
  return DenseOperator(m2 * m1.adjoint(), k);
}

double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  if (!m.allFinite()) throw DomainError("operator_norm: non-finite entries");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (m.rows() == m.cols()) {
    if (is_hermitian(m, 1e-12 * scale)) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
      return es.eigenvalues().cwiseAbs().maxCoeff();
    }
    if (is_anti_hermitian(m, 1e-12 * scale)) {
      const Matrix h = hermitian_part(cplx(0, 1) * m);
      Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
      return es.eigenvalues().cwiseAbs().maxCoeff();
    }
  }
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

NormEstimate operator_norm_power(const LinearMap& apply, const LinearMap& apply_adjoint, Index dim,
                                 const PowerIterationOptions& options) {
  Rng rng(options.seed);
  Vector v = ginibre(dim, 1, rng).col(0);
  v.normalize();
  NormEstimate est;
  double previous = -1.0;
  for (int it = 1; it <= options.max_iterations; ++it) {
    const Vector w = apply(v);
    const double lower = w.norm();
    est.lower_bound = std::max(est.lower_bound, lower);
    est.iterations = it;
    if (lower == 0.0 && it == 1) {
      // A v = 0 for a random v: A is zero up to a measure-zero event; confirm with one more vector.
      Vector probe = ginibre(dim, 1, rng).col(0);
      if (apply(probe).norm() == 0.0) {
        est.value = 0.0;
        return est;
      }
      v = probe.normalized();
      continue;
    }
    const Vector u = apply_adjoint(w);
    const double un = u.norm();
    // ||A^dag A v|| / ||A v|| lies between ||A v|| and ||A||
    const double value = un / lower;
    est.value = std::max(value, est.lower_bound);
    const double tol = options.relative_tolerance * value + options.absolute_tolerance;
    if (previous > 0.0 && std::abs(value - previous) <= tol && value - lower <= tol) {
      return est;
    }
    previous = value;
    if (un == 0.0) break;
    v = u / un;
  }
  throw ConvergenceError("operator_norm_power: no convergence after " + std::to_string(est.iterations) +
                             " iterations (best estimate " + std::to_string(est.value) + ")",
                         est.value);
}

double trace_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() == m.cols() && is_hermitian(m, 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff()))) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
  }
  if (m.rows() <= 16) {
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues().sum();
  }
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues().sum();
}

Matrix trace_norm_maximizer(const Matrix& x) {
  Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixV() * svd.matrixU().adjoint();
}

double entropy_of_spectrum(const RealVector& eigenvalues) {
  static std::atomic<bool> warned{false};
  double s = 0.0;
  for (Index i = 0; i < eigenvalues.size(); ++i) {
    double p = eigenvalues(i);
    if (p < kPsdTolerance)
      throw DomainError("von_neumann_entropy: eigenvalue " + std::to_string(p) + " below PSD tolerance");
    if (p < 0.0) {
      if (p < -1e-13 && !warned.exchange(true))
        spdlog::warn("clamping negative density-matrix eigenvalue {:.3e} to zero", p);
      p = 0.0;
    }
    if (p > 1e-14) s -= p * std::log2(p);
  }
  return std::max(0.0, s);
}

double von_neumann_entropy(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix(), Eigen::EigenvaluesOnly);
  return entropy_of_spectrum(es.eigenvalues());
}

namespace {

/// Positions (within op's support list) of the qubits in `outside`.
std::vector<int> local_positions(const DenseOperator& op, std::span<const int> outside) {
  std::vector<int> pos;
  for (int q : outside) {
    auto it = std::find(op.support().begin(), op.support().end(), q);
    if (it == op.support().end())
      throw DomainError("haar_truncate: qubit " + std::to_string(q) + " is not in the operator support");
    pos.push_back(static_cast<int>(it - op.support().begin()));
  }
  return pos;
}

}  // namespace

DenseOperator haar_truncate(const DenseOperator& op, std::span<const int> outside) {
  const std::vector<int> s = sorted_unique(outside);
  if (s.empty()) return op;
  const int k = op.num_qubits();
  if (static_cast<int>(s.size()) >= k) throw DomainError("haar_truncate: traced set equals the full system");
  const std::vector<int> pos = sorted_unique(local_positions(op, s));
  const std::vector<int> keep = complement_of(pos, k);
  const auto keep_off = local_offsets(keep, k);
  const auto s_off = local_offsets(pos, k);
  const Index dk = static_cast<Index>(keep_off.size());
  const double norm = 1.0 / static_cast<double>(s_off.size());

  Matrix reduced = Matrix::Zero(dk, dk);
  const Matrix& m = op.matrix();
  for (Index b = 0; b < dk; ++b)
    for (Index a = 0; a < dk; ++a) {
      cplx acc = 0.0;
      for (Index r : s_off) acc += m(keep_off[a] | r, keep_off[b] | r);
      reduced(a, b) = acc * norm;
    }
  Matrix out = Matrix::Zero(m.rows(), m.cols());
  for (Index r : s_off)
    for (Index b = 0; b < dk; ++b)
      for (Index a = 0; a < dk; ++a) out(keep_off[a] | r, keep_off[b] | r) = reduced(a, b);
  return DenseOperator(std::move(out), op.support());
}

DenseOperator haar_twirl_sampled(const DenseOperator& op, std::span<const int> outside, int samples,
                                 std::uint64_t seed) {
  const std::vector<int> pos = local_positions(op, sorted_unique(outside));
  Rng rng(seed);
  Matrix acc = Matrix::Zero(op.dim(), op.dim());
  const int k = op.num_qubits();
  for (int i = 0; i < samples; ++i) {
    const DenseOperator u(haar_unitary(dim_of(static_cast<int>(pos.size())), rng), pos);
    const Matrix uo = multiply_local_left(u, op.matrix(), k);
    acc += multiply_local_right(uo, u.adjoint(), k);
  }
  return DenseOperator(acc / static_cast<double>(samples), op.support());
}

cplx expectation(const PureState& psi, const DenseOperator& op) {
  return psi.amplitudes().dot(apply_local(psi, op));
}

}  // namespace lrlab
