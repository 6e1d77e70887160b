#pragma once

#include "lrlab/linalg.hpp"

namespace lrlab {

struct KrylovOptions {
  int subspace_dim = 30;
  double tolerance = 1e-10;  ///< residual estimate per substep, relative to ||v||
  int max_substeps = 100000;
};

struct KrylovStats {
  int substeps = 0;
  int matvecs = 0;
  double error_estimate = 0.0;  ///< accumulated relative residual estimate
};

/// exp(-i tau H) v for Hermitian H given as a matvec, by Lanczos with full
/// re-orthogonalization. The step is split into substeps whenever the
/// residual estimate h_{m+1,m} * |e_m^T exp(-i tau T) e_1| exceeds the
/// tolerance; it exits early when the Lanczos recursion breaks down or the
/// estimate already meets the tolerance with fewer vectors.
Vector krylov_expv(const LinearMap& h, const Vector& v, double tau, const KrylovOptions& options = {},
                   KrylovStats* stats = nullptr);

}  // namespace lrlab
