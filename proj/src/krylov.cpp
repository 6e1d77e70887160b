#include "lrlab/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "lrlab/errors.hpp"

namespace lrlab {

namespace {

struct LanczosStep {
  Vector result;
  double error = 0.0;
  int matvecs = 0;
};

/// One Lanczos projection of exp(-i tau H) v, returns result and residual estimate relative to ||v||.
LanczosStep lanczos_step(const LinearMap& h, const Vector& v, double tau, const KrylovOptions& opt) {
  const double beta = v.norm();
  LanczosStep out;
  if (beta == 0.0) {
    out.result = v;
    return out;
  }
  const int m = opt.subspace_dim;
  Matrix basis(v.size(), m + 1);
  RealVector alpha = RealVector::Zero(m);
  RealVector offdiag = RealVector::Zero(m);
  basis.col(0) = v / beta;

  auto project = [&](int j) {
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(j, j);
    for (int i = 0; i < j; ++i) {
      t(i, i) = alpha(i);
      if (i + 1 < j) t(i, i + 1) = t(i + 1, i) = offdiag(i);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    Vector coeff = Vector::Zero(j);
    for (int k = 0; k < j; ++k) {
      const cplx phase = std::polar(1.0, -tau * es.eigenvalues()(k));
      coeff += es.eigenvectors().col(k).cast<cplx>() * (phase * es.eigenvectors()(0, k));
    }
    return coeff;  // exp(-i tau T) e_1
  };

  for (int j = 0; j < m; ++j) {
    Vector w = h(basis.col(j));
    ++out.matvecs;
    // full re-orthogonalization (twice is enough)
    alpha(j) = basis.col(j).dot(w).real();
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i <= j; ++i) {
        const cplx c = basis.col(i).dot(w);
        w -= c * basis.col(i);
      }
    }
    const double b = w.norm();
    offdiag(j) = b;
    const int dim = j + 1;
    const Vector coeff = project(dim);
    const double err = b * std::abs(coeff(dim - 1));
    const bool breakdown = b <= 1e-13 * std::max(1.0, std::abs(alpha(j)));
    if (breakdown || err <= opt.tolerance || j + 1 == m) {
      out.result = beta * (basis.leftCols(dim) * coeff);
      out.error = breakdown ? 0.0 : err;
      return out;
    }
    basis.col(j + 1) = w / b;
  }
  return out;
}

}  // namespace

Vector krylov_expv(const LinearMap& h, const Vector& v, double tau, const KrylovOptions& options,
                   KrylovStats* stats) {
  if (options.subspace_dim < 1) throw DomainError("krylov_expv: subspace_dim must be >= 1");
  KrylovStats local;
  Vector current = v;
  const double sign = tau < 0.0 ? -1.0 : 1.0;
  double remaining = std::abs(tau);
  double step = remaining;
  while (remaining > 0.0) {
    step = std::min(step, remaining);
    LanczosStep s = lanczos_step(h, current, sign * step, options);
    local.matvecs += s.matvecs;
    if (s.error > options.tolerance) {
      step *= 0.5;
      if (++local.substeps > options.max_substeps)
        throw ConvergenceError("krylov_expv: step size underflow", s.error);
      continue;
    }
    current = std::move(s.result);
    local.error_estimate += s.error;
    remaining -= step;
    ++local.substeps;
    if (remaining < 1e-15 * std::abs(tau)) break;
    step *= 1.5;  // let the step grow back after an accepted substep
  }
  if (stats) *stats = local;
  return current;
}

}  // namespace lrlab
