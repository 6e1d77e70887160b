#include <random>

#include "doctest.h"
#include "lrlab/errors.hpp"
#include "lrlab/lattice.hpp"
#include "oracles.hpp"

using namespace lrlab;

TEST_CASE("graph_distance on small graphs") {
  const SpinGraph chain = build_chain(5, false);
  CHECK(graph_distance(chain, Region(chain, {0}), Region(chain, {4})) == 4);
  CHECK(graph_distance(chain, Region(chain, {0, 1}), Region(chain, {4})) == 3);
  CHECK(graph_distance(chain, Region(chain, {4}), Region(chain, {0, 1})) == 3);
  CHECK_THROWS_AS(graph_distance(chain, Region(chain, {0, 1}), Region(chain, {1, 2})), DomainError);

  const SpinGraph torus = build_torus_2d(4, 4);
  // vertex index y*nx + x
  std::vector<std::pair<int, int>> edges;
  for (const Edge& e : torus.edges()) edges.emplace_back(e.u, e.v);
  const auto dist = oracle::bfs(edges, 16, 0);
  CHECK(dist[2 * 4 + 2] == 4);
  CHECK(graph_distance(torus, Region(torus, {0}), Region(torus, {2 * 4 + 2})) == 4);
  CHECK(graph_distance(torus, Region(torus, {0}), Region(torus, {1 * 4 + 1})) == 2);
}

TEST_CASE("boundary_term_count") {
  const SpinGraph ring = build_chain(10, true);
  CHECK(boundary_term_count(ring, Region(ring, {3, 4, 5, 6})) == 2);
  const SpinGraph open = build_chain(10, false);
  CHECK(boundary_term_count(open, Region(open, {0, 1, 2})) == 1);
  const SpinGraph torus = build_torus_2d(4, 4);
  CHECK(boundary_term_count(torus, Region(torus, {0, 1, 4, 5})) == 8);
}

TEST_CASE("builders") {
  CHECK(build_chain(2, false).edges().size() == 1);
  CHECK(build_chain(3, true).edges().size() == 3);
  const SpinGraph ring = build_chain(10, true);
  for (int v = 0; v < 10; ++v) CHECK(ring.degree(v) == 2);
  CHECK_THROWS_AS(build_chain(1, false), DomainError);

  const SpinGraph t22 = build_torus_2d(2, 2);
  CHECK(t22.size() == 4);
  CHECK(t22.edges().size() == 8);
  for (int v = 0; v < 4; ++v) CHECK(t22.degree(v) == 4);
  CHECK(build_torus_2d(3, 3).edges().size() == 18);
  CHECK(build_torus_2d(4, 4).distance(0, 5) == 2);
  CHECK_THROWS_AS(build_torus_2d(1, 3), DomainError);
}

TEST_CASE("SpinGraph invariants") {
  CHECK_THROWS_AS(SpinGraph(3, {{0, 0}, {0, 1}, {1, 2}}), DomainError);
  CHECK_THROWS_AS(SpinGraph(3, {{0, 1}, {1, 0}, {1, 2}}), DomainError);
  CHECK_THROWS_AS(SpinGraph(4, {{0, 1}, {2, 3}}), DomainError);
  const SpinGraph g(4, {{0, 1}, {1, 2}, {1, 3}});
  CHECK(g.max_degree() == 3);
  CHECK(g.diameter() == 2);
}

TEST_CASE("toric layout") {
  const ToricLayout t = build_toric_code_layout(2, 2);
  CHECK(t.num_qubits() == 8);
  CHECK(t.stars.size() == 4);
  CHECK(t.plaquettes.size() == 4);
  std::vector<int> star_count(8, 0), plaquette_count(8, 0);
  for (const auto& s : t.stars)
    for (int q : s) ++star_count[static_cast<std::size_t>(q)];
  for (const auto& p : t.plaquettes)
    for (int q : p) ++plaquette_count[static_cast<std::size_t>(q)];
  for (int q = 0; q < 8; ++q) {
    CHECK(star_count[static_cast<std::size_t>(q)] == 2);
    CHECK(plaquette_count[static_cast<std::size_t>(q)] == 2);
  }
  CHECK(build_toric_code_layout(2, 3).num_qubits() == 12);
  CHECK_THROWS_AS(build_toric_code_layout(1, 2), DomainError);
  // qubits sharing a stabilizer are adjacent
  for (const auto& s : t.stars)
    for (int a : s)
      for (int b : s)
        if (a != b) CHECK(t.qubits.has_edge(a, b));
}

TEST_CASE("region diameter uses the host metric") {
  const SpinGraph ring = build_chain(8, true);
  const Region r(ring, {0, 7});
  CHECK(r.diameter() == 1);
  CHECK(Region(ring, {0, 4}).diameter() == 4);
  CHECK_THROWS_AS(Region(ring, {}), DomainError);
  CHECK_THROWS_AS(Region(ring, {9}), DomainError);
}

TEST_CASE("property: metric axioms and complement symmetry") {
  std::mt19937_64 rng(7);
  for (int n = 2; n <= 20; ++n) {
    const SpinGraph chain = build_chain(n, false);
    CHECK(graph_distance(chain, Region(chain, {0}), Region(chain, {n - 1})) == n - 1);
  }
  const SpinGraph g = build_torus_2d(4, 3);
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<int> pick(0, g.size() - 1);
    const int a = pick(rng), b = pick(rng), c = pick(rng);
    CHECK(g.distance(a, c) <= g.distance(a, b) + g.distance(b, c));
    CHECK(g.distance(a, b) == g.distance(b, a));
    std::vector<int> verts;
    for (int v = 0; v < g.size(); ++v)
      if (rng() % 2) verts.push_back(v);
    if (verts.empty() || static_cast<int>(verts.size()) == g.size()) continue;
    const Region r(g, verts);
    CHECK(boundary_term_count(g, r) == boundary_term_count(g, r.complement(g)));
  }
}
