#include <algorithm>
#include <cmath>
#include <numeric>

#include "lrlab/errors.hpp"
#include "lrlab/experiments.hpp"
#include "trajectory.hpp"

namespace lrlab {

void ScanGrid::validate() const {
  if (L.empty() || t.empty()) throw DomainError("ScanGrid: L and t grids must be nonempty");
  for (std::size_t i = 1; i < L.size(); ++i)
    if (L[i] <= L[i - 1]) throw DomainError("ScanGrid: L values must be strictly increasing");
  for (std::size_t i = 1; i < t.size(); ++i)
    if (!(t[i] > t[i - 1])) throw DomainError("ScanGrid: t values must be strictly increasing");
  if (L.front() < 1) throw DomainError("ScanGrid: L values must be >= 1");
  if (t.front() < 0.0) throw DomainError("ScanGrid: t values must be >= 0");
}

DenseOperator normalized_observable(const DenseOperator& op) {
  const double norm = operator_norm(op);
  if (norm == 0.0) throw DomainError("normalized_observable: zero operator");
  return DenseOperator(op.matrix() / norm, op.support());
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DomainError("fit_line: x and y differ in length");
  const auto n = static_cast<double>(x.size());
  if (x.size() < 2) throw DomainError("fit_line: need at least two points");
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw DomainError("fit_line: degenerate fit, all x values coincide");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.slope * x[i] + fit.intercept);
    fit.residuals.push_back(r);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

namespace detail {

std::shared_ptr<const SpectralPropagator> maybe_spectral(const HamiltonianSpec& h, const PropagatorPlan& plan) {
  if (!h.time_independent() || plan.method != StepMethod::ExactStep) return nullptr;
  const int n = h.num_qubits();
  const bool dense = plan.backend == Backend::Dense ? n <= kDenseQubitLimit
                                                    : plan.backend == Backend::Auto && n <= plan.dense_auto_limit;
  if (!dense) return nullptr;
  return std::make_shared<const SpectralPropagator>(h);
}

Trajectory::Trajectory(const HamiltonianSpec& h, const PropagatorPlan& plan,
                       std::shared_ptr<const SpectralPropagator> spectral, Vector initial)
    : h_(&h), plan_(plan), spectral_(std::move(spectral)), initial_(initial), v_(std::move(initial)),
      t_(plan.t_start) {}

const Vector& Trajectory::advance_to(double t) {
  if (t < t_) throw DomainError("Trajectory: times must be nondecreasing");
  if (t == t_) return v_;
  if (spectral_) {
    v_ = spectral_->apply(initial_, t - plan_.t_start);
  } else {
    v_ = propagate(*h_, v_, plan_.window(t_, t));
  }
  t_ = t;
  return v_;
}

}  // namespace detail
}  // namespace lrlab
