#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "lrlab/errors.hpp"
#include "lrlab/experiments.hpp"
#include "lrlab/parallel.hpp"

namespace lrlab {

namespace {

using Clique = std::vector<int>;

/// Bron-Kerbosch with pivoting over the "within distance d" relation.
void bron_kerbosch(const std::vector<std::vector<char>>& adj, Clique& r, std::vector<int> p, std::vector<int> x,
                   std::vector<Clique>& out) {
  if (p.empty() && x.empty()) {
    out.push_back(r);
    return;
  }
  int pivot = !p.empty() ? p.front() : x.front();
  std::size_t best = 0;
  for (const auto* set : {&p, &x}) {
    for (int u : *set) {
      std::size_t count = 0;
      for (int w : p) count += adj[u][w] ? 1 : 0;
      if (count >= best) {
        best = count;
        pivot = u;
      }
    }
  }
  const std::vector<int> candidates = p;
  for (int v : candidates) {
    if (adj[pivot][v]) continue;
    std::vector<int> p2, x2;
    for (int w : p)
      if (adj[v][w]) p2.push_back(w);
    for (int w : x)
      if (adj[v][w]) x2.push_back(w);
    r.push_back(v);
    bron_kerbosch(adj, r, std::move(p2), std::move(x2), out);
    r.pop_back();
    p.erase(std::find(p.begin(), p.end(), v));
    x.push_back(v);
  }
}

void combinations(const Clique& items, int k, std::size_t start, Clique& cur, std::set<Clique>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.insert(cur);
    return;
  }
  for (std::size_t i = start; i < items.size(); ++i) {
    cur.push_back(items[i]);
    combinations(items, k, i + 1, cur, out);
    cur.pop_back();
  }
}

double golden_max(const std::function<double(double)>& f, double a, double b, double tol) {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    }
  }
  return std::max(f1, f2);
}

struct RegionValue {
  double diag = 0.0;
  double offdiag = 0.0;
  double hermitian = std::numeric_limits<double>::quiet_NaN();
};

}  // namespace

std::vector<std::vector<int>> tqo_regions(const SpinGraph& g, int l, int cap, bool* truncated) {
  if (l < 1) throw DomainError("tqo_regions: l must be >= 1");
  if (cap < 1) throw DomainError("tqo_regions: region cap must be >= 1");
  const int n = g.size();
  std::vector<std::vector<char>> adj(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) adj[u][v] = (u != v && g.distance(u, v) <= l - 1) ? 1 : 0;
  std::vector<Clique> cliques;
  Clique r;
  std::vector<int> all(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
  bron_kerbosch(adj, r, all, {}, cliques);
  std::set<Clique> regions;
  bool cut = false;
  for (auto& c : cliques) {
    std::sort(c.begin(), c.end());
    if (static_cast<int>(c.size()) <= cap) {
      regions.insert(c);
    } else {
      cut = true;
      Clique cur;
      combinations(c, cap, 0, cur, regions);
    }
  }
  if (truncated) *truncated = cut;
  return {regions.begin(), regions.end()};
}

double hermitian_offdiag_value(const Matrix& x) {
  const auto f = [&x](double theta) {
    const cplx phase = std::polar(1.0, theta);
    return trace_norm(Matrix(0.5 * (phase * x + std::conj(phase) * x.adjoint())));
  };
  constexpr int kScan = 64;
  const double width = std::numbers::pi / kScan;
  int best = 0;
  double best_value = -1.0;
  for (int k = 0; k < kScan; ++k) {
    const double v = f(k * width);
    if (v > best_value) {
      best_value = v;
      best = k;
    }
  }
  return std::max(best_value, golden_max(f, (best - 1) * width, (best + 1) * width, 1e-10));
}

const TqoLevel& TqoReport::at(int l) const {
  for (const auto& level : levels)
    if (level.l == l) return level;
  throw DomainError("TqoReport: no level l = " + std::to_string(l));
}

TqoReport tqo_accuracy(const PureState& psi1, const PureState& psi2, const SpinGraph& g, std::span<const int> ls,
                       const TqoOptions& options) {
  const int n = psi1.num_qubits();
  if (psi2.num_qubits() != n || g.size() != n) throw DomainError("tqo_accuracy: qubit counts differ");
  if (std::abs(psi1.amplitudes().dot(psi2.amplitudes())) > 1e-10)
    throw DomainError("tqo_accuracy: states must be orthogonal");
  if (ls.empty()) throw DomainError("tqo_accuracy: no range l given");
  TqoReport report;
  report.region_cap = options.region_cap;
  for (int l : ls) {
    bool truncated = false;
    const auto regions = tqo_regions(g, l, options.region_cap, &truncated);
    report.truncated = report.truncated || truncated;
    std::vector<RegionValue> values(regions.size());
    parallel_for(regions.size(), options.threads, [&](std::size_t i) {
      const auto& s = regions[i];
      const Matrix rho1 = partial_trace(psi1, s).matrix();
      const Matrix rho2 = partial_trace(psi2, s).matrix();
      const Matrix x = transition_matrix(psi1, psi2, s).matrix();
      values[i].diag = 0.5 * trace_norm(Matrix(rho1 - rho2));
      values[i].offdiag = trace_norm(x);
      if (options.hermitian_scan) values[i].hermitian = hermitian_offdiag_value(x);
    });
    TqoLevel level;
    level.l = l;
    level.regions = regions.size();
    level.eps_offdiag_hermitian = options.hermitian_scan ? 0.0 : std::numeric_limits<double>::quiet_NaN();
    double worst = -1.0;
    for (std::size_t i = 0; i < regions.size(); ++i) {
      level.eps_diag = std::max(level.eps_diag, values[i].diag);
      level.eps_offdiag = std::max(level.eps_offdiag, values[i].offdiag);
      if (options.hermitian_scan) level.eps_offdiag_hermitian = std::max(level.eps_offdiag_hermitian, values[i].hermitian);
      const double e = std::max(values[i].diag, values[i].offdiag);
      if (e > worst) {
        worst = e;
        level.worst_region = regions[i];
      }
    }
    level.eps = std::max(level.eps_diag, level.eps_offdiag);
    report.levels.push_back(std::move(level));
  }
  return report;
}

}  // namespace lrlab
