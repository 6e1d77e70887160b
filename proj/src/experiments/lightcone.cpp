#include <algorithm>
#include <cmath>
#include <limits>

#include "lrlab/errors.hpp"
#include "lrlab/experiments.hpp"
#include "lrlab/parallel.hpp"

namespace lrlab {

namespace {

int vertex_at_distance(const SpinGraph& g, const Region& a, int L) {
  for (int v = 0; v < g.size(); ++v) {
    if (a.contains(v)) continue;
    int d = std::numeric_limits<int>::max();
    for (int u : a.vertices()) d = std::min(d, g.distance(u, v));
    if (d == L) return v;
  }
  throw DomainError("lightcone_scan: no vertex at distance " + std::to_string(L) + " from O_A");
}

double dense_commutator_norm(const Matrix& a_t, const DenseOperator& ob, int n) {
  const Matrix k = multiply_local_right(a_t, ob, n) - multiply_local_left(ob, a_t, n);
  return operator_norm(k);
}

}  // namespace

LightconeTable lightcone_scan(const HamiltonianSpec& h, const DenseOperator& o_a, const Matrix& o_b,
                              const ScanGrid& grid, const LightconeOptions& options) {
  grid.validate();
  if (o_b.rows() != 2 || o_b.cols() != 2) throw DomainError("lightcone_scan: O_B must be a single-qubit matrix");
  const int n = h.num_qubits();
  const SpinGraph& g = h.graph();
  const DenseOperator a = normalized_observable(o_a);
  const Region region_a(g, a.support());

  LightconePath path = options.path;
  if (path == LightconePath::Auto) path = n <= 10 ? LightconePath::Dense : LightconePath::MatrixFree;
  if (path == LightconePath::Dense && n > 10)
    throw CapabilityError("lightcone_scan dense path", "qubits", n, 10);
  if (path == LightconePath::MatrixFree && n > 14)
    throw CapabilityError("lightcone_scan matrix-free path", "qubits", n, 14);

  LightconeTable table;
  table.L = grid.L;
  table.t = grid.t;
  table.path = path == LightconePath::Dense ? "dense" : "matrix-free";
  const auto nl = static_cast<Index>(grid.L.size());
  const auto nt = static_cast<Index>(grid.t.size());
  table.value = Eigen::MatrixXd::Zero(nl, nt);
  table.error = Eigen::MatrixXd::Zero(nl, nt);
  std::vector<DenseOperator> obs;
  for (int L : grid.L) {
    const int site = vertex_at_distance(g, region_a, L);
    table.site_b.push_back(site);
    obs.push_back(normalized_observable(DenseOperator(o_b, {site})));
  }

  if (path == LightconePath::Dense) {
    std::shared_ptr<const SpectralPropagator> spectral;
    if (h.time_independent()) spectral = std::make_shared<const SpectralPropagator>(h);
    parallel_for(grid.t.size(), options.threads, [&](std::size_t j) {
      const double t = grid.t[j];
      if (t == 0.0) return;  // disjoint supports commute exactly
      const Matrix a_t = spectral ? spectral->heisenberg(a, t) : heisenberg_operator(h, a, t, options.plan).matrix();
      for (Index i = 0; i < nl; ++i) table.value(i, static_cast<Index>(j)) = dense_commutator_norm(a_t, obs[i], n);
    });
    return table;
  }

  PropagatorPlan plan = options.plan;
  plan.backend = Backend::Krylov;
  const DenseOperator a_dag = a.adjoint();
  const std::size_t tasks = grid.L.size() * grid.t.size();
  parallel_for(tasks, options.threads, [&](std::size_t task) {
    const auto i = static_cast<Index>(task / grid.t.size());
    const auto j = static_cast<Index>(task % grid.t.size());
    const double t = grid.t[static_cast<std::size_t>(j)];
    if (t == 0.0) return;
    const DenseOperator& ob = obs[static_cast<std::size_t>(i)];
    const DenseOperator ob_dag = ob.adjoint();
    const LinearMap apply = [&](const Vector& v) {
      return Vector(heisenberg_apply(h, a, t, apply_local(v, n, ob), plan) -
                    apply_local(heisenberg_apply(h, a, t, v, plan), n, ob));
    };
    const LinearMap apply_adjoint = [&](const Vector& v) {
      return Vector(apply_local(heisenberg_apply(h, a_dag, t, v, plan), n, ob_dag) -
                    heisenberg_apply(h, a_dag, t, apply_local(v, n, ob_dag), plan));
    };
    PowerIterationOptions power = options.power;
    power.seed = options.power.seed + static_cast<std::uint64_t>(task);
    const NormEstimate est = operator_norm_power(apply, apply_adjoint, dim_of(n), power);
    table.value(i, j) = est.value;
    table.error(i, j) = est.value - est.lower_bound;
  });
  return table;
}

double default_threshold(const LightconeTable& table) { return 0.1 * table.value.maxCoeff(); }

LightconeFit fit_lightcone(const LightconeTable& table, double theta, int min_L) {
  if (!(theta > 0.0)) throw DomainError("fit_lightcone: threshold must be positive");
  if (table.value.size() == 0) throw DomainError("fit_lightcone: empty table");
  if (theta >= table.value.maxCoeff())
    throw DomainError("fit_lightcone: threshold is never crossed; every distance is excluded");
  LightconeFit fit;
  fit.theta = theta;
  const auto nt = static_cast<Index>(table.t.size());
  std::vector<double> xs, ys;
  double last = -std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < table.L.size(); ++r) {
    const int L = table.L[r];
    if (L < min_L) continue;
    const auto row = static_cast<Index>(r);
    fit.L.push_back(L);
    double arrival = std::numeric_limits<double>::quiet_NaN();
    for (Index j = 0; j < nt; ++j) {
      const double c = table.value(row, j);
      if (c < theta) continue;
      if (j == 0) {
        arrival = table.t[0];
      } else {
        const double c0 = table.value(row, j - 1);
        const double t0 = table.t[static_cast<std::size_t>(j - 1)];
        const double t1 = table.t[static_cast<std::size_t>(j)];
        arrival = t0 + (theta - c0) / (c - c0) * (t1 - t0);
      }
      break;
    }
    fit.arrival.push_back(arrival);
    if (std::isnan(arrival)) {
      fit.excluded.push_back(L);
      continue;
    }
    if (arrival < last) fit.arrivals_monotone = false;
    last = arrival;
    xs.push_back(L);
    ys.push_back(arrival);
  }
  if (fit.L.empty()) throw DomainError("fit_lightcone: no distances at or above min_L");
  if (xs.empty()) throw DomainError("fit_lightcone: threshold never crossed at any fitted distance");
  if (xs.size() < 2) throw DomainError("fit_lightcone: degenerate fit, only one arrival time");
  fit.arrival_fit = fit_line(xs, ys);
  if (!(fit.arrival_fit.slope > 0.0)) throw DomainError("fit_lightcone: arrival times do not increase with L");
  fit.v_est = 1.0 / fit.arrival_fit.slope;

  fit.fit_time = table.t.back();
  std::vector<double> ls, logs;
  for (std::size_t r = 0; r < table.L.size(); ++r) {
    const double c = table.value(static_cast<Index>(r), nt - 1);
    if (table.L[r] < min_L || !(c > 0.0)) continue;
    ls.push_back(table.L[r]);
    logs.push_back(std::log(c));
  }
  if (ls.size() < 2) throw DomainError("fit_lightcone: degenerate decay fit at the largest time");
  fit.decay_fit = fit_line(ls, logs);
  if (!(fit.decay_fit.slope < 0.0)) throw DomainError("fit_lightcone: C does not decay with L at the largest time");
  fit.xi_est = -1.0 / fit.decay_fit.slope;
  return fit;
}

}  // namespace lrlab
