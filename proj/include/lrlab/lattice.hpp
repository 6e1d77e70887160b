#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

namespace lrlab {

using Vertex = int;

struct Edge {
  Vertex u;
  Vertex v;
  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Coord {
  int x = 0;
  int y = 0;
  friend bool operator==(const Coord&, const Coord&) = default;
};

/// Undirected connected graph with an unweighted (edge-count) metric.
///
/// Lattice builders may create parallel bonds: a periodic direction of length
/// two wraps onto the same vertex pair twice, and each wrap is a distinct bond
/// with its own Hamiltonian term. Graphs built from a plain edge list reject
/// duplicates. Self-loops are always rejected and the graph must be connected.
class SpinGraph {
 public:
  SpinGraph(int n_vertices, std::vector<Edge> edges, std::vector<Coord> coords = {},
            bool allow_parallel_bonds = false);

  int size() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Vertex>& neighbors(Vertex v) const { return adjacency_.at(v); }
  /// Number of bonds incident to v (parallel bonds counted separately).
  int degree(Vertex v) const { return degree_.at(v); }
  int max_degree() const { return max_degree_; }
  bool has_edge(Vertex a, Vertex b) const;
  int distance(Vertex a, Vertex b) const { return dist_[index(a, b)]; }
  int diameter() const { return diameter_; }
  std::optional<Coord> coord(Vertex v) const;
  bool contains(Vertex v) const { return v >= 0 && v < n_; }

 private:
  std::size_t index(Vertex a, Vertex b) const;

  int n_;
  std::vector<Edge> edges_;
  std::vector<Coord> coords_;
  std::vector<std::vector<Vertex>> adjacency_;
  std::vector<int> degree_;
  std::vector<int> dist_;
  int max_degree_ = 0;
  int diameter_ = 0;
};

/// Nonempty vertex subset of a host graph; diameter measured in the host metric.
class Region {
 public:
  Region(const SpinGraph& g, std::vector<Vertex> vertices);

  const std::vector<Vertex>& vertices() const { return vertices_; }
  int size() const { return static_cast<int>(vertices_.size()); }
  int diameter() const { return diameter_; }
  bool contains(Vertex v) const;
  bool overlaps(const Region& other) const;
  Region complement(const SpinGraph& g) const;

 private:
  std::vector<Vertex> vertices_;
  int diameter_ = 0;
};

/// Shortest-path edge count between two disjoint regions.
int graph_distance(const SpinGraph& g, const Region& a, const Region& b);

/// Edges with exactly one endpoint in a.
int boundary_term_count(const SpinGraph& g, const Region& a);

/// Vertices at graph distance >= l from every vertex of a.
std::vector<Vertex> vertices_beyond(const SpinGraph& g, const Region& a, int l);

SpinGraph build_chain(int n, bool periodic);
SpinGraph build_torus_2d(int nx, int ny);

/// Kitaev toric code on an nx-by-ny torus: one qubit per torus edge.
///
/// Qubit 2*(y*nx + x) is the horizontal edge (x,y)->(x+1,y), qubit
/// 2*(y*nx + x) + 1 the vertical edge (x,y)->(x,y+1). Two qubits are adjacent
/// when they share a star or a plaquette.
struct ToricLayout {
  int nx = 0;
  int ny = 0;
  SpinGraph qubits;
  std::vector<std::array<int, 4>> stars;
  std::vector<std::array<int, 4>> plaquettes;

  int num_qubits() const { return qubits.size(); }
  int horizontal(int x, int y) const;
  int vertical(int x, int y) const;
  /// Vertical edges of row y: an X string on them winds around the torus
  /// horizontally and commutes with every plaquette.
  std::vector<int> dual_loop(int row) const;
};

ToricLayout build_toric_code_layout(int nx, int ny);

}  // namespace lrlab
