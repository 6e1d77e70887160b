#include <cmath>

#include "lrlab/errors.hpp"
#include "lrlab/experiments.hpp"
#include "trajectory.hpp"

namespace lrlab {

void Ensemble::validate() const {
  if (probabilities.empty() || probabilities.size() != unitaries.size())
    throw DomainError("Ensemble: need one probability per unitary");
  double sum = 0.0;
  for (double p : probabilities) {
    if (!(p >= 0.0)) throw DomainError("Ensemble: probabilities must be nonnegative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw DomainError("Ensemble: probabilities must sum to 1");
  for (const auto& u : unitaries) {
    const Matrix id = Matrix::Identity(u.dim(), u.dim());
    if ((u.matrix().adjoint() * u.matrix() - id).norm() > 1e-10)
      throw DomainError("Ensemble: operations must be unitary");
  }
}

Ensemble pauli_ensemble(std::span<const int> region_a) {
  if (region_a.empty()) throw DomainError("pauli_ensemble: empty region");
  const std::vector<int> support(region_a.begin(), region_a.end());
  const Matrix paulis[4] = {pauli::I(), pauli::X(), pauli::Y(), pauli::Z()};
  const std::size_t count = std::size_t{1} << (2 * support.size());
  Ensemble e;
  for (std::size_t code = 0; code < count; ++code) {
    Matrix m = Matrix::Identity(1, 1);
    for (std::size_t q = 0; q < support.size(); ++q) {
      const std::size_t letter = (code >> (2 * (support.size() - 1 - q))) & 3U;
      Matrix next(m.rows() * 2, m.cols() * 2);
      for (Index r = 0; r < m.rows(); ++r)
        for (Index c = 0; c < m.cols(); ++c) next.block(2 * r, 2 * c, 2, 2) = m(r, c) * paulis[letter];
      m = std::move(next);
    }
    e.unitaries.emplace_back(std::move(m), support);
    e.probabilities.push_back(1.0 / static_cast<double>(count));
  }
  return e;
}

std::vector<HolevoPoint> holevo_experiment(const HamiltonianSpec& h, const Ensemble& ensemble,
                                           const PureState& psi0, std::span<const int> region_b,
                                           std::span<const double> times, const PropagatorPlan& plan) {
  ensemble.validate();
  const int n = h.num_qubits();
  if (psi0.num_qubits() != n) throw DomainError("holevo_experiment: state does not match the Hamiltonian");
  if (times.empty()) throw DomainError("holevo_experiment: empty time grid");
  const Region b(h.graph(), std::vector<int>(region_b.begin(), region_b.end()));
  for (const auto& u : ensemble.unitaries)
    for (int q : u.support())
      if (b.contains(q)) throw DomainError("holevo_experiment: operations must act outside B");

  const auto spectral = detail::maybe_spectral(h, plan);
  detail::Trajectory reference(h, plan, spectral, psi0.amplitudes());
  std::vector<detail::Trajectory> members;
  for (const auto& u : ensemble.unitaries) members.emplace_back(h, plan, spectral, apply_local(psi0, u));

  std::vector<HolevoPoint> out;
  const int nb = b.size();
  for (double t : times) {
    const PureState ref(n, reference.advance_to(t));
    const Matrix sigma_ref = partial_trace(ref, b.vertices()).matrix();
    Matrix average = Matrix::Zero(sigma_ref.rows(), sigma_ref.cols());
    double mean_entropy = 0.0;
    HolevoPoint p;
    p.t = t;
    for (std::size_t k = 0; k < members.size(); ++k) {
      const PureState psi = PureState::normalized(n, members[k].advance_to(t));
      const DensityMatrix sigma = partial_trace(psi, b.vertices());
      average += ensemble.probabilities[k] * sigma.matrix();
      mean_entropy += ensemble.probabilities[k] * von_neumann_entropy(sigma);
      p.epsilon = std::max(p.epsilon, trace_norm(Matrix(sigma.matrix() - sigma_ref)));
    }
    p.c_chi = von_neumann_entropy(DensityMatrix(average)) - mean_entropy;
    p.bound = capacity_bound(std::min(p.epsilon, 2.0), nb, 2);
    p.satisfied = p.c_chi <= p.bound + 1e-10;
    out.push_back(p);
  }
  return out;
}

}  // namespace lrlab
