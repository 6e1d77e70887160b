#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "lrlab/errors.hpp"
#include "lrlab/experiments.hpp"
#include "trajectory.hpp"

namespace lrlab {

namespace {

constexpr double kPi = std::numbers::pi;

Matrix hadamard_generator() { return (pauli::X() + pauli::Z()) / std::sqrt(2.0); }

/// |1><1| (x) |-><-|; a pi pulse of it is exactly CNOT.
DenseOperator cnot_generator(int control, int target) {
  Matrix p1 = Matrix::Zero(2, 2);
  p1(1, 1) = 1.0;
  const Matrix minus = 0.5 * (pauli::I() - pauli::X());
  return pair_operator(p1, minus, control, target);
}

}  // namespace

Protocol random_two_local_circuit(std::shared_ptr<const SpinGraph> graph, int depth, Rng& rng) {
  if (depth < 0) throw DomainError("random_two_local_circuit: depth must be >= 0");
  std::vector<Edge> edges;
  for (const Edge& e : graph->edges()) {
    const Edge sorted{std::min(e.u, e.v), std::max(e.u, e.v)};
    if (std::find(edges.begin(), edges.end(), sorted) == edges.end()) edges.push_back(sorted);
  }
  std::vector<LocalTerm> terms;
  for (int layer = 0; layer < depth; ++layer) {
    std::vector<Edge> order = edges;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<char> used(static_cast<std::size_t>(graph->size()), 0);
    for (const Edge& e : order) {
      if (used[e.u] || used[e.v]) continue;
      used[e.u] = used[e.v] = 1;
      const Matrix k = unitary_generator(haar_unitary(4, rng));
      terms.emplace_back(DenseOperator(k, {e.u, e.v}), Schedule::pulse(layer, layer + 1.0), TermKind::Bond,
                         "gate");
    }
  }
  return {"random-2-local-depth-" + std::to_string(depth), HamiltonianSpec(std::move(graph), std::move(terms)),
          static_cast<double>(depth)};
}

std::pair<PureState, PureState> toric_product_pair(const ToricLayout& layout) {
  const int n = layout.num_qubits();
  std::uint64_t flipped = 0;
  for (int q : layout.dual_loop(layout.ny - 1)) flipped |= std::uint64_t{1} << (n - 1 - q);
  return {PureState::basis(n, 0), PureState::basis(n, flipped)};
}

Protocol toric_preparation_protocol(std::shared_ptr<const ToricLayout> layout) {
  const int n = layout->num_qubits();
  std::shared_ptr<const SpinGraph> graph(layout, &layout->qubits);
  std::vector<char> touched(static_cast<std::size_t>(n), 0);
  std::vector<LocalTerm> terms;
  double t = 0.0;
  // the last star is the product of the others
  for (std::size_t s = 0; s + 1 < layout->stars.size(); ++s) {
    const auto& star = layout->stars[s];
    int pivot = -1;
    for (int q : star)
      if (!touched[q]) {
        pivot = q;
        break;
      }
    if (pivot < 0) throw DomainError("toric_preparation_protocol: no free pivot for star " + std::to_string(s));
    terms.emplace_back(site_operator(hadamard_generator(), pivot), Schedule::pulse(t, t + kPi / 2), TermKind::Site,
                       "hadamard");
    t += kPi / 2;
    for (int q : star) {
      touched[q] = 1;
      if (q == pivot) continue;
      terms.emplace_back(cnot_generator(pivot, q), Schedule::pulse(t, t + kPi), TermKind::Bond, "cnot");
      t += kPi;
    }
  }
  return {"toric-preparation", HamiltonianSpec(std::move(graph), std::move(terms)), t};
}

Protocol ghz_protocol(int n, double g_scale) {
  if (n < 2) throw DomainError("ghz_protocol: n must be >= 2");
  if (!(g_scale > 0.0)) throw DomainError("ghz_protocol: g_scale must be positive");
  auto graph = std::make_shared<const SpinGraph>(build_chain(n, false));
  std::vector<LocalTerm> terms;
  const double hadamard_end = kPi / (2.0 * g_scale);
  for (int q = 1; q < n; ++q)
    terms.emplace_back(site_operator(hadamard_generator(), q), Schedule::pulse(0.0, hadamard_end, g_scale),
                       TermKind::Site, "hadamard");
  double t = hadamard_end;
  for (int q = 0; q + 1 < n; ++q) {
    const double stop = t + kPi / g_scale;
    terms.emplace_back(cnot_generator(q, q + 1), Schedule::pulse(t, stop, g_scale), TermKind::Bond, "cnot");
    t = stop;
  }
  return {"ghz-ladder", HamiltonianSpec(std::move(graph), std::move(terms)), t};
}

LowerBoundReport circuit_lower_bound_demo(const PureState& psi1, const PureState& psi2, const Protocol& protocol,
                                          const SpinGraph& region_graph, int l_f, const PropagatorPlan& plan,
                                          std::optional<LRConstants> constants, int dimension,
                                          const TqoOptions& tqo) {
  const int n = protocol.hamiltonian.num_qubits();
  if (n > kDenseQubitLimit) throw CapabilityError("circuit_lower_bound_demo", "qubits", n, kDenseQubitLimit);
  if (psi1.num_qubits() != n || psi2.num_qubits() != n)
    throw DomainError("circuit_lower_bound_demo: states do not match the protocol");
  if (l_f < 1) throw DomainError("circuit_lower_bound_demo: l_f must be >= 1");
  LowerBoundReport report;
  report.l_f = l_f;
  report.l_i = std::max(1, l_f / 2);
  report.duration = protocol.duration;
  const int li[] = {report.l_i};
  report.initial = tqo_accuracy(psi1, psi2, region_graph, li, tqo);
  report.eps_initial = report.initial.levels.front().eps;

  const PropagatorPlan window = plan.window(0.0, protocol.duration);
  const PureState out1 = evolve_state(protocol.hamiltonian, psi1, window);
  const PureState out2 = evolve_state(protocol.hamiltonian, psi2, window);
  const int lf[] = {l_f};
  report.final_report = tqo_accuracy(out1, out2, region_graph, lf, tqo);
  report.eps_final = report.final_report.levels.front().eps;
  if (constants)
    report.shape = tqo_epsilon_propagation(report.eps_final, l_f, *constants, protocol.duration, dimension);
  return report;
}

GhzReport ghz_protocol_check(std::span<const int> ns, double theta_c, double g_scale, double sample_dt,
                             const PropagatorPlan& plan) {
  if (!(theta_c > 0.0)) throw DomainError("ghz_protocol_check: threshold must be positive");
  if (!(sample_dt > 0.0)) throw DomainError("ghz_protocol_check: sample spacing must be positive");
  GhzReport report;
  report.theta_c = theta_c;
  report.g_scale = g_scale;
  std::vector<double> xs, ys;
  for (int n : ns) {
    if (n < 2 || n > kDenseQubitLimit) throw CapabilityError("ghz_protocol_check", "qubits", n, kDenseQubitLimit);
    const Protocol p = ghz_protocol(n, g_scale);
    const DenseOperator za = site_operator(pauli::Z(), 0);
    const DenseOperator zb = site_operator(pauli::Z(), n - 1);
    detail::Trajectory traj(p.hamiltonian, plan.window(0.0, p.duration), nullptr, PureState::all_plus(n).amplitudes());
    const double step = sample_dt / g_scale;
    const int samples = static_cast<int>(std::ceil(p.duration / step - 1e-12));
    GhzRow row;
    row.n = n;
    row.crossing_time = std::numeric_limits<double>::quiet_NaN();
    row.flagged = true;
    double prev_t = 0.0, prev_c = 0.0;
    for (int k = 0; k <= samples; ++k) {
      const double t = std::min(k * step, p.duration);
      const Vector& v = traj.advance_to(t);
      const Vector zbv = apply_local(v, n, zb);
      const double ab = v.dot(apply_local(zbv, n, za)).real();
      const double a = v.dot(apply_local(v, n, za)).real();
      const double b = v.dot(zbv).real();
      const double c = std::abs(ab - a * b);
      if (c >= theta_c) {
        row.crossing_time = k == 0 ? t : prev_t + (theta_c - prev_c) / (c - prev_c) * (t - prev_t);
        row.flagged = false;
        break;
      }
      prev_t = t;
      prev_c = c;
    }
    if (!row.flagged) {
      xs.push_back(n);
      ys.push_back(row.crossing_time);
    }
    report.rows.push_back(row);
  }
  if (xs.size() >= 2) report.fit = fit_line(xs, ys);
  return report;
}

}  // namespace lrlab
