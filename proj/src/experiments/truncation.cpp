#include "lrlab/errors.hpp"
#include "lrlab/experiments.hpp"

namespace lrlab {

std::vector<TruncationRow> truncation_scan(const HamiltonianSpec& h, const DenseOperator& o_a, double t,
                                           std::span<const int> ls, const PropagatorPlan& plan) {
  const int n = h.num_qubits();
  if (n > 10) throw CapabilityError("truncation_scan needs the dense Heisenberg path", "qubits", n, 10);
  const DenseOperator a = normalized_observable(o_a);
  const Region region_a(h.graph(), a.support());
  DenseOperator a_t = kron_embed(a, n);
  if (t != 0.0) {
    a_t = h.time_independent() ? DenseOperator::on_all(SpectralPropagator(h).heisenberg(a, t))
                               : heisenberg_operator(h, a, t, plan);
  }
  std::vector<TruncationRow> rows;
  for (int l : ls) {
    if (l < 1) throw DomainError("truncation_scan: l must be >= 1");
    TruncationRow row;
    row.l = l;
    const std::vector<int> outside = vertices_beyond(h.graph(), region_a, l);
    row.outside = static_cast<int>(outside.size());
    if (!outside.empty()) {
      const DenseOperator truncated = haar_truncate(a_t, outside);
      row.error = operator_norm(Matrix(a_t.matrix() - truncated.matrix()));
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace lrlab
