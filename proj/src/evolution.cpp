#include "lrlab/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "lrlab/errors.hpp"

namespace lrlab {

void PropagatorPlan::validate() const {
  if (!(dt > 0.0)) throw DomainError("PropagatorPlan: dt must be > 0");
  if (!(t_end >= t_start)) throw DomainError("PropagatorPlan: t_end must be >= t_start");
  if (!(tolerance > 0.0)) throw DomainError("PropagatorPlan: tolerance must be > 0");
  if (max_halvings < 0) throw DomainError("PropagatorPlan: max_halvings must be >= 0");
}

PropagatorPlan PropagatorPlan::window(double t0, double t1) const {
  PropagatorPlan p = *this;
  p.t_start = t0;
  p.t_end = t1;
  return p;
}

namespace {

Backend resolve_backend(const PropagatorPlan& plan, int n) {
  Backend b = plan.backend;
  if (b == Backend::Auto) b = n <= plan.dense_auto_limit ? Backend::Dense : Backend::Krylov;
  if (b == Backend::Dense && n > kDenseQubitLimit)
    throw CapabilityError("dense propagation too large", "qubits", n, kDenseQubitLimit);
  if (n > kMatrixFreeQubitLimit)
    throw CapabilityError("propagation too large", "qubits", n, kMatrixFreeQubitLimit);
  return b;
}

Vector exact_step(const HamiltonianSpec& h, double t_eval, double tau, const Vector& v, Backend backend,
                  const KrylovOptions& kopt) {
  if (tau == 0.0) return v;
  if (backend == Backend::Dense) return expm_hermitian(assemble_dense(h, t_eval), tau) * v;
  const LinearMap hm = [&h, t_eval](const Vector& x) { return matvec(h, t_eval, x); };
  return krylov_expv(hm, v, tau, kopt);
}

Vector term_step(const LocalTerm& term, int n, double t_eval, double tau, const Vector& v) {
  const double r = term.schedule(t_eval);
  if (r == 0.0 || tau == 0.0) return v;
  const DenseOperator u(expm_hermitian(term.base.matrix(), r * tau), term.support());
  return apply_local(v, n, u);
}

TermGrouping default_grouping(const HamiltonianSpec& h) {
  TermGrouping g;
  for (int i = 0; i < static_cast<int>(h.terms().size()); ++i) g.push_back({i});
  return g;
}

/// One product-formula step of length tau evaluated at t_eval (tau < 0: adjoint).
Vector trotter_step(const HamiltonianSpec& h, const TermGrouping& groups, int order, double t_eval, double tau,
                    Vector v) {
  const int n = h.num_qubits();
  auto apply_group = [&](const std::vector<int>& g, double step) {
    for (int idx : g) v = term_step(h.terms().at(static_cast<std::size_t>(idx)), n, t_eval, step, v);
  };
  if (order == 1) {
    if (tau >= 0.0) {
      for (const auto& g : groups) apply_group(g, tau);
    } else {
      for (auto it = groups.rbegin(); it != groups.rend(); ++it) apply_group(*it, tau);
    }
    return v;
  }
  // symmetric splitting is its own reverse
  for (const auto& g : groups) apply_group(g, 0.5 * tau);
  for (auto it = groups.rbegin(); it != groups.rend(); ++it) apply_group(*it, 0.5 * tau);
  return v;
}

/// Fixed-step evolution across segment boundaries with at most `dt` per step.
Vector stepped(const HamiltonianSpec& h, const Vector& v, const std::vector<double>& knots, double dt,
               const PropagatorPlan& plan, Backend backend, bool adjoint, bool exact_constant_segments,
               int* steps_out) {
  const TermGrouping groups = default_grouping(h);
  const int order = plan.method == StepMethod::Trotter1 ? 1 : 2;
  Vector cur = v;
  int steps = 0;
  const std::size_t nseg = knots.size() - 1;
  for (std::size_t s = 0; s < nseg; ++s) {
    const std::size_t seg = adjoint ? nseg - 1 - s : s;
    const double a = knots[seg];
    const double b = knots[seg + 1];
    const double len = b - a;
    if (len <= 0.0) continue;
    if (exact_constant_segments && plan.method == StepMethod::ExactStep) {
      cur = exact_step(h, 0.5 * (a + b), adjoint ? -len : len, cur, backend, plan.krylov);
      ++steps;
      continue;
    }
    const int nsteps = std::max(1, static_cast<int>(std::ceil(len / dt - 1e-12)));
    const double tau = len / nsteps;
    for (int k = 0; k < nsteps; ++k) {
      const int kk = adjoint ? nsteps - 1 - k : k;
      const double tm = a + (kk + 0.5) * tau;
      if (plan.method == StepMethod::ExactStep)
        cur = exact_step(h, tm, adjoint ? -tau : tau, cur, backend, plan.krylov);
      else
        cur = trotter_step(h, groups, order, tm, adjoint ? -tau : tau, std::move(cur));
      ++steps;
    }
  }
  if (steps_out) *steps_out += steps;
  return cur;
}

std::vector<double> knots_of(const HamiltonianSpec& h, double t0, double t1) {
  std::vector<double> knots{t0};
  for (double b : h.breakpoints(t0, t1)) knots.push_back(b);
  knots.push_back(t1);
  return knots;
}

}  // namespace

Vector propagate(const HamiltonianSpec& h, const Vector& v, const PropagatorPlan& plan, bool adjoint,
                 EvolutionReport* report) {
  plan.validate();
  const int n = h.num_qubits();
  if (v.size() != dim_of(n)) throw DomainError("propagate: state dimension does not match the Hamiltonian");
  const Backend backend = resolve_backend(plan, n);
  EvolutionReport rep;
  rep.backend = backend;
  if (plan.t_end == plan.t_start) {
    if (report) *report = rep;
    return v;
  }
  const std::vector<double> knots = knots_of(h, plan.t_start, plan.t_end);
  if (!h.has_closed_form()) {
    // piecewise-constant: exact per segment for ExactStep, dt-limited for Trotter
    Vector out = stepped(h, v, knots, plan.dt, plan, backend, adjoint, true, &rep.steps);
    rep.exact_segments = plan.method == StepMethod::ExactStep;
    if (report) *report = rep;
    return out;
  }
  rep.exact_segments = false;
  double dt = plan.dt;
  Vector coarse = stepped(h, v, knots, dt, plan, backend, adjoint, false, &rep.steps);
  for (int halving = 1; halving <= plan.max_halvings; ++halving) {
    dt *= 0.5;
    Vector fine = stepped(h, v, knots, dt, plan, backend, adjoint, false, &rep.steps);
    const double diff = (fine - coarse).norm();
    rep.halvings = halving;
    rep.last_difference = diff;
    if (diff < plan.tolerance) {
      if (report) *report = rep;
      return fine;
    }
    if (halving == plan.max_halvings)
      throw IntegratorConvergenceError("propagate: step halving did not converge (difference " +
                                           std::to_string(diff) + ", dt " + std::to_string(dt) + ")",
                                       diff, std::move(coarse), std::move(fine));
    coarse = std::move(fine);
  }
  throw IntegratorConvergenceError("propagate: step halving disabled for closed-form schedules", 0.0, coarse,
                                   coarse);
}

PureState evolve_state(const HamiltonianSpec& h, const PureState& psi, const PropagatorPlan& plan,
                       EvolutionReport* report) {
  Vector out = propagate(h, psi.amplitudes(), plan, false, report);
  // remove round-off drift only; the integrator is unitary to ~1e-14
  return PureState::normalized(psi.num_qubits(), std::move(out));
}

Vector frozen_step(const HamiltonianSpec& h, double t_eval, double tau, const Vector& v, Backend backend,
                   const KrylovOptions& krylov) {
  PropagatorPlan p;
  p.backend = backend;
  return exact_step(h, t_eval, tau, v, resolve_backend(p, h.num_qubits()), krylov);
}

Matrix propagator(const HamiltonianSpec& h, const PropagatorPlan& plan) {
  const int n = h.num_qubits();
  if (n > kDenseQubitLimit) throw CapabilityError("dense propagator too large", "qubits", n, kDenseQubitLimit);
  PropagatorPlan p = plan;
  p.backend = Backend::Dense;
  const Index d = dim_of(n);
  if (plan.t_end == plan.t_start) return Matrix::Identity(d, d);
  if (!h.has_closed_form() && plan.method == StepMethod::ExactStep) {
    Matrix u = Matrix::Identity(d, d);
    const auto knots = knots_of(h, plan.t_start, plan.t_end);
    for (std::size_t s = 0; s + 1 < knots.size(); ++s) {
      const double a = knots[s];
      const double b = knots[s + 1];
      u = expm_hermitian(assemble_dense(h, 0.5 * (a + b)), b - a) * u;
    }
    return u;
  }
  Matrix u(d, d);
  for (Index c = 0; c < d; ++c) u.col(c) = propagate(h, Vector::Unit(d, c), p);
  return u;
}

DenseOperator heisenberg_operator(const HamiltonianSpec& h, const DenseOperator& o, double t,
                                  const PropagatorPlan& plan) {
  const int n = h.num_qubits();
  if (n > kDenseQubitLimit)
    throw CapabilityError("heisenberg_operator needs the dense path", "qubits", n, kDenseQubitLimit);
  if (t == 0.0) return kron_embed(o, n);
  const Matrix u = propagator(h, plan.lasting(t));
  return DenseOperator::on_all(u.adjoint() * multiply_local_left(o, u, n));
}

Vector heisenberg_apply(const HamiltonianSpec& h, const DenseOperator& o, double t, const Vector& v,
                        const PropagatorPlan& plan) {
  const int n = h.num_qubits();
  if (t == 0.0) return apply_local(v, n, o);
  const PropagatorPlan p = plan.lasting(t);
  const Vector forward = propagate(h, v, p);
  return propagate(h, apply_local(forward, n, o), p, /*adjoint=*/true);
}

PureState trotter_evolve(const HamiltonianSpec& h, const PureState& psi, double t, int steps, int order,
                         const TermGrouping& grouping) {
  if (order != 1 && order != 2) throw DomainError("trotter_evolve: order must be 1 or 2");
  if (steps < 1) throw DomainError("trotter_evolve: steps must be >= 1");
  if (psi.num_qubits() != h.num_qubits()) throw DomainError("trotter_evolve: qubit count mismatch");
  if (h.num_qubits() > kMatrixFreeQubitLimit)
    throw CapabilityError("trotter_evolve too large", "qubits", h.num_qubits(), kMatrixFreeQubitLimit);
  const TermGrouping groups = grouping.empty() ? default_grouping(h) : grouping;
  for (const auto& g : groups)
    for (int idx : g)
      if (idx < 0 || idx >= static_cast<int>(h.terms().size()))
        throw DomainError("trotter_evolve: term index out of range in grouping");
  const double tau = t / steps;
  Vector v = psi.amplitudes();
  for (int k = 0; k < steps; ++k) v = trotter_step(h, groups, order, (k + 0.5) * tau, tau, std::move(v));
  return PureState::normalized(psi.num_qubits(), std::move(v));
}

SpectralPropagator::SpectralPropagator(const HamiltonianSpec& h) : n_(h.num_qubits()) {
  if (!h.time_independent()) throw DomainError("SpectralPropagator needs a time-independent Hamiltonian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(assemble_dense(h, 0.0));
  energies_ = es.eigenvalues();
  basis_ = es.eigenvectors();
}

Matrix SpectralPropagator::unitary(double t) const {
  const Index d = basis_.rows();
  if (t == 0.0) return Matrix::Identity(d, d);
  Vector phases(d);
  for (Index i = 0; i < d; ++i) phases(i) = std::polar(1.0, -t * energies_(i));
  return basis_ * phases.asDiagonal() * basis_.adjoint();
}

Vector SpectralPropagator::apply(const Vector& v, double t) const {
  if (t == 0.0) return v;
  Vector c = basis_.adjoint() * v;
  for (Index i = 0; i < c.size(); ++i) c(i) *= std::polar(1.0, -t * energies_(i));
  return basis_ * c;
}

Matrix SpectralPropagator::heisenberg(const DenseOperator& o, double t) const {
  if (t == 0.0) return kron_embed(o, n_).matrix();
  const Matrix u = unitary(t);
  return u.adjoint() * multiply_local_left(o, u, n_);
}

}  // namespace lrlab
