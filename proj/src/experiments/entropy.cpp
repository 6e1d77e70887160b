#include <algorithm>
#include <cmath>

#include "lrlab/errors.hpp"
#include "lrlab/experiments.hpp"
#include "trajectory.hpp"

namespace lrlab {

double instantaneous_rate_budget(const HamiltonianSpec& h, std::span<const int> region_a, double t) {
  double sum = 0.0;
  for (const auto& term : h.terms()) {
    const double w = cut_weight(term, region_a);
    if (w > 0.0) sum += std::abs(term.schedule(t)) * w;
  }
  return cstar().value * sum;
}

double integrated_rate_budget(const HamiltonianSpec& h, std::span<const int> region_a, double t0, double t1) {
  if (t1 < t0) throw DomainError("integrated_rate_budget: t1 < t0");
  std::vector<double> knots{t0};
  for (double b : h.breakpoints(t0, t1)) knots.push_back(b);
  knots.push_back(t1);
  // midpoint rule on each smooth piece; exact for piecewise-constant schedules
  constexpr int kPanels = 64;
  double total = 0.0;
  for (std::size_t s = 0; s + 1 < knots.size(); ++s) {
    const double width = (knots[s + 1] - knots[s]) / kPanels;
    if (width <= 0.0) continue;
    for (int k = 0; k < kPanels; ++k)
      total += width * instantaneous_rate_budget(h, region_a, knots[s] + (k + 0.5) * width);
  }
  return total;
}

namespace {

double region_entropy(int n, const Vector& v, std::span<const int> region) {
  return von_neumann_entropy(partial_trace(PureState::normalized(n, v), region));
}

double central_difference(const HamiltonianSpec& h, const Vector& v, std::span<const int> region, double t,
                          double step, Backend backend) {
  const int n = h.num_qubits();
  const double plus = region_entropy(n, frozen_step(h, t, step, v, backend), region);
  const double minus = region_entropy(n, frozen_step(h, t, -step, v, backend), region);
  return (plus - minus) / (2.0 * step);
}

}  // namespace

RateEstimate entropy_rate(const HamiltonianSpec& h, const PureState& psi, std::span<const int> region_a, double t,
                          double fd_step, Backend backend) {
  if (!(fd_step > 0.0)) throw DomainError("entropy_rate: step must be positive");
  if (psi.num_qubits() != h.num_qubits()) throw DomainError("entropy_rate: state does not match the Hamiltonian");
  const double coarse = central_difference(h, psi.amplitudes(), region_a, t, fd_step, backend);
  const double fine = central_difference(h, psi.amplitudes(), region_a, t, 0.5 * fd_step, backend);
  RateEstimate r;
  r.rate = (4.0 * fine - coarse) / 3.0;
  r.error = std::abs(r.rate - fine);
  return r;
}

std::vector<EntropyPoint> entropy_growth(const HamiltonianSpec& h, const PureState& psi0,
                                         std::span<const int> region_a, std::span<const double> times,
                                         const EntropyOptions& options) {
  const int n = h.num_qubits();
  if (psi0.num_qubits() != n) throw DomainError("entropy_growth: state does not match the Hamiltonian");
  if (times.empty()) throw DomainError("entropy_growth: empty time grid");
  const Region a(h.graph(), std::vector<int>(region_a.begin(), region_a.end()));
  if (a.size() == n) throw DomainError("entropy_growth: region A must leave a complement");
  double spacing = options.plan.dt;
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw DomainError("entropy_growth: times must be strictly increasing");
    spacing = std::min(spacing, times[i] - times[i - 1]);
  }
  const double fd_step = spacing / 10.0;

  detail::Trajectory traj(h, options.plan, detail::maybe_spectral(h, options.plan), psi0.amplitudes());
  std::vector<EntropyPoint> out;
  const double t0 = times.front();
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    const Vector& v = traj.advance_to(t);
    EntropyPoint p;
    p.t = t;
    p.entropy = region_entropy(n, v, a.vertices());
    p.rate_bound = instantaneous_rate_budget(h, a.vertices(), t);
    p.budget = integrated_rate_budget(h, a.vertices(), t0, t);
    if (i > 0) {
      const RateEstimate r = entropy_rate(h, PureState::normalized(n, v), a.vertices(), t, fd_step,
                                          options.plan.backend);
      p.rate = r.rate;
      p.rate_error = r.error;
      p.rate_checked = true;
      p.within = p.rate <= p.rate_bound + options.rate_slack &&
                 p.entropy - out.front().entropy <= p.budget + options.rate_slack;
    }
    out.push_back(p);
  }
  if (out.size() > 1) out.front().within = out[1].entropy - out.front().entropy <= out[1].budget + options.rate_slack;
  return out;
}

}  // namespace lrlab
