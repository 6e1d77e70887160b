#include "lrlab/lattice.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <set>
#include <string>

#include "lrlab/errors.hpp"

namespace lrlab {

SpinGraph::SpinGraph(int n_vertices, std::vector<Edge> edges, std::vector<Coord> coords,
                     bool allow_parallel_bonds)
    : n_(n_vertices), coords_(std::move(coords)) {
  if (n_ < 1) throw DomainError("SpinGraph needs at least one vertex");
  if (!coords_.empty() && static_cast<int>(coords_.size()) != n_)
    throw DomainError("coordinate count does not match vertex count");

  adjacency_.assign(n_, {});
  degree_.assign(n_, 0);
  std::set<std::pair<int, int>> seen;
  edges_.reserve(edges.size());
  for (Edge e : edges) {
    if (!contains(e.u) || !contains(e.v))
      throw DomainError("edge endpoint out of range: (" + std::to_string(e.u) + "," +
                        std::to_string(e.v) + ")");
    if (e.u == e.v) throw DomainError("self-loop at vertex " + std::to_string(e.u));
    if (e.u > e.v) std::swap(e.u, e.v);
    const bool fresh = seen.insert({e.u, e.v}).second;
    if (!fresh && !allow_parallel_bonds)
      throw DomainError("duplicate edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ")");
    if (fresh) {
      adjacency_[e.u].push_back(e.v);
      adjacency_[e.v].push_back(e.u);
    }
    ++degree_[e.u];
    ++degree_[e.v];
    edges_.push_back(e);
  }
  for (auto& nb : adjacency_) std::sort(nb.begin(), nb.end());
  max_degree_ = *std::max_element(degree_.begin(), degree_.end());

  // all-pairs BFS
  constexpr int kUnreached = std::numeric_limits<int>::max();
  dist_.assign(static_cast<std::size_t>(n_) * n_, kUnreached);
  for (Vertex s = 0; s < n_; ++s) {
    std::deque<Vertex> queue{s};
    dist_[index(s, s)] = 0;
    while (!queue.empty()) {
      const Vertex u = queue.front();
      queue.pop_front();
      for (Vertex w : adjacency_[u]) {
        if (dist_[index(s, w)] == kUnreached) {
          dist_[index(s, w)] = dist_[index(s, u)] + 1;
          queue.push_back(w);
        }
      }
    }
  }
  for (int d : dist_) {
    if (d == kUnreached) throw DomainError("SpinGraph must be connected");
    diameter_ = std::max(diameter_, d);
  }
}

std::size_t SpinGraph::index(Vertex a, Vertex b) const {
  if (!contains(a) || !contains(b)) throw DomainError("vertex out of range");
  return static_cast<std::size_t>(a) * n_ + b;
}

bool SpinGraph::has_edge(Vertex a, Vertex b) const {
  if (!contains(a) || !contains(b)) return false;
  const auto& nb = adjacency_[a];
  return std::binary_search(nb.begin(), nb.end(), b);
}

std::optional<Coord> SpinGraph::coord(Vertex v) const {
  if (coords_.empty() || !contains(v)) return std::nullopt;
  return coords_[v];
}

Region::Region(const SpinGraph& g, std::vector<Vertex> vertices) : vertices_(std::move(vertices)) {
  std::sort(vertices_.begin(), vertices_.end());
  vertices_.erase(std::unique(vertices_.begin(), vertices_.end()), vertices_.end());
  if (vertices_.empty()) throw DomainError("region must be nonempty");
  for (Vertex v : vertices_)
    if (!g.contains(v)) throw DomainError("region vertex " + std::to_string(v) + " not in graph");
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    for (std::size_t j = i + 1; j < vertices_.size(); ++j)
      diameter_ = std::max(diameter_, g.distance(vertices_[i], vertices_[j]));
}

bool Region::contains(Vertex v) const {
  return std::binary_search(vertices_.begin(), vertices_.end(), v);
}

bool Region::overlaps(const Region& other) const {
  return std::any_of(vertices_.begin(), vertices_.end(),
                     [&](Vertex v) { return other.contains(v); });
}

Region Region::complement(const SpinGraph& g) const {
  std::vector<Vertex> rest;
  for (Vertex v = 0; v < g.size(); ++v)
    if (!contains(v)) rest.push_back(v);
  return Region(g, std::move(rest));
}

int graph_distance(const SpinGraph& g, const Region& a, const Region& b) {
  if (a.overlaps(b)) throw DomainError("graph_distance: regions overlap");
  int best = std::numeric_limits<int>::max();
  for (Vertex u : a.vertices())
    for (Vertex v : b.vertices()) best = std::min(best, g.distance(u, v));
  return best;
}

int boundary_term_count(const SpinGraph& g, const Region& a) {
  int count = 0;
  for (const Edge& e : g.edges())
    if (a.contains(e.u) != a.contains(e.v)) ++count;
  return count;
}

std::vector<Vertex> vertices_beyond(const SpinGraph& g, const Region& a, int l) {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < g.size(); ++v) {
    int d = std::numeric_limits<int>::max();
    for (Vertex u : a.vertices()) d = std::min(d, g.distance(u, v));
    if (d >= l) out.push_back(v);
  }
  return out;
}

SpinGraph build_chain(int n, bool periodic) {
  if (n < 2) throw DomainError("build_chain: n must be >= 2, got " + std::to_string(n));
  std::vector<Edge> edges;
  std::vector<Coord> coords;
  for (int i = 0; i < n; ++i) coords.push_back({i, 0});
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  if (periodic) edges.push_back({n - 1, 0});
  return SpinGraph(n, std::move(edges), std::move(coords), /*allow_parallel_bonds=*/periodic);
}

SpinGraph build_torus_2d(int nx, int ny) {
  if (nx < 2 || ny < 2)
    throw DomainError("build_torus_2d: nx and ny must be >= 2, got " + std::to_string(nx) + "x" +
                      std::to_string(ny));
  auto site = [nx, ny](int x, int y) { return ((y + ny) % ny) * nx + (x + nx) % nx; };
  std::vector<Edge> edges;
  std::vector<Coord> coords(static_cast<std::size_t>(nx) * ny);
  for (int y = 0; y < ny; ++y) {
    for (int x = 0; x < nx; ++x) {
      coords[site(x, y)] = {x, y};
      edges.push_back({site(x, y), site(x + 1, y)});
      edges.push_back({site(x, y), site(x, y + 1)});
    }
  }
  return SpinGraph(nx * ny, std::move(edges), std::move(coords), /*allow_parallel_bonds=*/true);
}

int ToricLayout::horizontal(int x, int y) const {
  return 2 * (((y % ny) + ny) % ny * nx + ((x % nx) + nx) % nx);
}

int ToricLayout::vertical(int x, int y) const { return horizontal(x, y) + 1; }

std::vector<int> ToricLayout::dual_loop(int row) const {
  std::vector<int> out;
  for (int x = 0; x < nx; ++x) out.push_back(vertical(x, row));
  return out;
}

namespace {

SpinGraph toric_qubit_graph(int nx, int ny, const std::vector<std::array<int, 4>>& stars,
                            const std::vector<std::array<int, 4>>& plaquettes) {
  const int n = 2 * nx * ny;
  std::set<std::pair<int, int>> pairs;
  auto add_group = [&](const std::array<int, 4>& q) {
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) pairs.insert({std::min(q[i], q[j]), std::max(q[i], q[j])});
  };
  for (const auto& s : stars) add_group(s);
  for (const auto& p : plaquettes) add_group(p);
  std::vector<Edge> edges;
  for (auto [a, b] : pairs) edges.push_back({a, b});
  return SpinGraph(n, std::move(edges));
}

}  // namespace

ToricLayout build_toric_code_layout(int nx, int ny) {
  if (nx < 2 || ny < 2)
    throw DomainError("build_toric_code_layout: nx and ny must be >= 2, got " +
                      std::to_string(nx) + "x" + std::to_string(ny));
  ToricLayout probe{nx, ny, SpinGraph(1, {}), {}, {}};
  std::vector<std::array<int, 4>> stars;
  std::vector<std::array<int, 4>> plaquettes;
  for (int y = 0; y < ny; ++y) {
    for (int x = 0; x < nx; ++x) {
      stars.push_back({probe.horizontal(x, y), probe.horizontal(x - 1, y), probe.vertical(x, y),
                       probe.vertical(x, y - 1)});
      plaquettes.push_back({probe.horizontal(x, y), probe.horizontal(x, y + 1),
                            probe.vertical(x, y), probe.vertical(x + 1, y)});
    }
  }
  SpinGraph qubits = toric_qubit_graph(nx, ny, stars, plaquettes);
  return ToricLayout{nx, ny, std::move(qubits), std::move(stars), std::move(plaquettes)};
}

}  // namespace lrlab
