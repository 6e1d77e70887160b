#include "lrlab/errors.hpp"
#include "lrlab/experiments.hpp"
#include "trajectory.hpp"

namespace lrlab {

namespace {

void require_times(std::span<const double> times, double t0, const char* who) {
  if (times.empty()) throw DomainError(std::string(who) + ": empty time grid");
  double prev = t0;
  for (double t : times) {
    if (t < prev) throw DomainError(std::string(who) + ": times must be nondecreasing and >= plan.t_start");
    prev = t;
  }
}

}  // namespace

std::vector<CorrelationPoint> correlation_spread(const HamiltonianSpec& h, const PureState& psi0,
                                                 const DenseOperator& o_a, const DenseOperator& o_b,
                                                 std::span<const double> times, const PropagatorPlan& plan) {
  const int n = h.num_qubits();
  if (psi0.num_qubits() != n) throw DomainError("correlation_spread: state does not match the Hamiltonian");
  if (!is_hermitian(o_a.matrix()) || !is_hermitian(o_b.matrix()))
    throw DomainError("correlation_spread: observables must be Hermitian");
  require_times(times, plan.t_start, "correlation_spread");
  detail::Trajectory traj(h, plan, detail::maybe_spectral(h, plan), psi0.amplitudes());
  std::vector<CorrelationPoint> out;
  for (double t : times) {
    const Vector& v = traj.advance_to(t);
    const Vector bv = apply_local(v, n, o_b);
    const Vector av = apply_local(v, n, o_a);
    CorrelationPoint p;
    p.t = t;
    p.ab = v.dot(apply_local(bv, n, o_a)).real();
    p.a = v.dot(av).real();
    p.b = v.dot(bv).real();
    p.connected = p.ab - p.a * p.b;
    out.push_back(p);
  }
  return out;
}

}  // namespace lrlab
