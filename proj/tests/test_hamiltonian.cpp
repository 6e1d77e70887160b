#include <cmath>
#include <memory>

#include "doctest.h"
#include "lrlab/errors.hpp"
#include "lrlab/hamiltonian.hpp"
#include "lrlab/random.hpp"
#include "oracles.hpp"

using namespace lrlab;

namespace {

std::shared_ptr<const SpinGraph> chain(int n, bool periodic = false) {
  return std::make_shared<const SpinGraph>(build_chain(n, periodic));
}

RealVector spectrum(const Matrix& h) { return Eigen::SelfAdjointEigenSolver<Matrix>(h).eigenvalues(); }

Matrix tfim_oracle(int n, double J, double h) {
  Matrix out = Matrix::Zero(dim_of(n), dim_of(n));
  for (int i = 0; i + 1 < n; ++i) {
    Matrix zz(4, 4);
    zz.setZero();
    zz.diagonal() << 1, -1, -1, 1;
    out -= J * oracle::embed(zz, {i, i + 1}, n);
  }
  for (int i = 0; i < n; ++i) out -= h * oracle::embed(pauli::X(), {i}, n);
  return out;
}

}  // namespace

TEST_CASE("schedules") {
  const Schedule c = Schedule::constant(-2.0);
  CHECK(c(5.0) == -2.0);
  CHECK(c.bound() == 2.0);
  const Schedule p = Schedule::piecewise({0.0, 1.0, 2.0}, {3.0, -4.0});
  CHECK(p(0.5) == 3.0);
  CHECK(p(1.0) == -4.0);
  CHECK(p(2.0) == 0.0);
  CHECK(p(-0.1) == 0.0);
  CHECK(p.bound() == 4.0);
  CHECK(p.scaled(0.5)(1.5) == -2.0);
  CHECK(p.time_mapped(2.0, 0.0)(0.75) == -4.0);
  CHECK_THROWS_AS(Schedule::piecewise({0.0, 0.0}, {1.0}), DomainError);
  CHECK_THROWS_AS(Schedule::piecewise({0.0, 1.0}, {1.0, 2.0}), DomainError);
  const Schedule pulse = Schedule::pulse(1.0, 2.0, 0.5);
  CHECK(pulse(1.5) == 0.5);
  CHECK(pulse(0.5) == 0.0);
  const Schedule f = Schedule::closed_form([](double t) { return std::sin(t); }, 1.0);
  CHECK_FALSE(f.is_piecewise_constant());
  for (int k = 0; k <= 100; ++k) CHECK(std::abs(f(0.1 * k)) <= f.bound());
}

TEST_CASE("TFIM construction") {
  const HamiltonianSpec two = build_tfim(chain(2), 1.0, 0.0);
  int nonzero = 0;
  for (const auto& t : two.terms())
    if (t.strength() > 0) {
      ++nonzero;
      CHECK(t.base_norm == doctest::Approx(1.0));
    }
  CHECK(nonzero == 1);
  const HamiltonianSpec fields = build_tfim(chain(5), 0.0, 1.0);
  int sites = 0;
  for (const auto& t : fields.terms())
    if (t.strength() > 0) {
      ++sites;
      CHECK(t.kind == TermKind::Site);
    }
  CHECK(sites == 5);

  const HamiltonianSpec three = build_tfim(chain(3), 1.0, 1.0);
  const Matrix h = assemble_dense(three, 0.0);
  CHECK((h - tfim_oracle(3, 1.0, 1.0)).norm() < 1e-12);
  CHECK(spectrum(h)(0) == doctest::Approx(-3.4940).epsilon(1e-3 / 3.494));
  CHECK(three.coupling_strength() == doctest::Approx(1.0));
}

TEST_CASE("Heisenberg construction") {
  const Matrix h = assemble_dense(build_heisenberg(chain(2), 1.0), 0.0);
  const RealVector ev = spectrum(h);
  CHECK(ev(0) == doctest::Approx(-3.0));
  for (int i = 1; i < 4; ++i) CHECK(ev(i) == doctest::Approx(1.0));
  Vector singlet = Vector::Zero(4);
  singlet(1) = 1.0 / std::sqrt(2.0);
  singlet(2) = -1.0 / std::sqrt(2.0);
  CHECK((h * singlet + 3.0 * singlet).norm() < 1e-12);
  CHECK(assemble_dense(build_heisenberg(chain(3), 0.0), 0.0).norm() == 0.0);
}

TEST_CASE("toric code ground space") {
  const ToricCode code(build_toric_code_layout(2, 2));
  CHECK(code.layout().num_qubits() == 8);
  const Matrix h = assemble_dense(code.hamiltonian(), 0.0);
  const RealVector ev = spectrum(h);
  int degeneracy = 0;
  for (Index i = 0; i < ev.size(); ++i)
    if (std::abs(ev(i) - ev(0)) < 1e-9) ++degeneracy;
  CHECK(degeneracy == 4);

  const PureState g0 = code.ground_state(0), g1 = code.ground_state(1);
  CHECK(std::abs(g0.amplitudes().dot(g1.amplitudes())) < 1e-12);
  CHECK(std::abs(g0.amplitudes().squaredNorm() - 1.0) < 1e-12);
  CHECK(std::abs(g1.amplitudes().squaredNorm() - 1.0) < 1e-12);
  for (const PureState* g : {&g0, &g1}) {
    CHECK((h * g->amplitudes() - ev(0) * g->amplitudes()).norm() < 1e-10);
    for (int s = 0; s < static_cast<int>(code.layout().stars.size()); ++s) {
      const Vector as = apply_local(*g, code.star_operator(s));
      CHECK((as - g->amplitudes()).norm() < 1e-12);
    }
  }
}

TEST_CASE("product coupling") {
  const LocalTerm xx = build_product_coupling(DenseOperator(pauli::X(), {0}), DenseOperator(pauli::X(), {1}),
                                              Schedule::constant(1.0));
  CHECK(xx.kind == TermKind::Coupling);
  CHECK(xx.strength() == doctest::Approx(1.0));
  Matrix expected = Matrix::Zero(4, 4);
  expected.block(0, 2, 2, 2) = pauli::X();
  expected.block(2, 0, 2, 2) = pauli::X();
  CHECK((kron_embed(xx.base, 2).matrix() - expected).norm() < 1e-15);
  CHECK_THROWS_AS(build_product_coupling(DenseOperator(2.0 * pauli::X(), {0}), DenseOperator(pauli::X(), {1}),
                                         Schedule::constant(1.0)),
                  DomainError);
  const int a[] = {0};
  CHECK(cut_weight(xx, a) == doctest::Approx(1.0));
  const HamiltonianSpec off(chain(2), {build_product_coupling(DenseOperator(pauli::X(), {0}),
                                                              DenseOperator(pauli::X(), {1}), Schedule::constant(0.0))});
  CHECK(assemble_dense(off, 0.3).norm() == 0.0);
}

TEST_CASE("assembly and matvec") {
  Rng rng(21);
  const auto g = chain(6);
  const HamiltonianSpec h = build_tfim_scheduled(g, Schedule::piecewise({0.0, 1.0, 2.0}, {1.0, -0.5}),
                                                 Schedule::closed_form([](double t) { return std::cos(t); }, 1.0));
  for (double t : {0.0, 0.4, 1.3, 2.5}) {
    const Matrix m = assemble_dense(h, t);
    CHECK(is_hermitian(m));
    const Vector v = ginibre(64, 1, rng).col(0);
    CHECK((matvec(h, t, v) - m * v).norm() <= 1e-12 * std::max(1.0, v.norm()));
  }
  const HamiltonianSpec zero = build_tfim(g, 0.0, 0.0);
  CHECK(assemble_dense(zero, 0.0).norm() == 0.0);
}

TEST_CASE("coupling strength matches a time-grid scan") {
  const auto g = chain(4);
  for (int trial = 0; trial < 5; ++trial) {
    const double a = 0.3 + trial, b = 1.7 - 0.2 * trial;
    const HamiltonianSpec h = build_tfim_scheduled(g, Schedule::piecewise({0.0, 0.5, 1.0}, {a, -0.5 * a}),
                                                   Schedule::piecewise({0.0, 1.0}, {b}));
    CHECK(std::abs(h.coupling_strength() - sampled_coupling_strength(h, 0.0, 1.0, 1000)) <= 1e-9);
  }
}

TEST_CASE("TFIM spectrum is invariant under a global spin flip") {
  for (int n = 2; n <= 6; ++n) {
    const Matrix h = assemble_dense(build_tfim(chain(n, n > 2), 0.7, 1.3), 0.0);
    Matrix flip = Matrix::Identity(dim_of(n), dim_of(n));
    for (int q = 0; q < n; ++q) flip = flip * oracle::embed(pauli::X(), {q}, n);
    CHECK((spectrum(h) - spectrum(flip * h * flip)).norm() <= 1e-10);
  }
}

TEST_CASE("rescaled and reversed specs") {
  const HamiltonianSpec h = build_tfim(chain(3), 1.0, 0.5);
  CHECK((assemble_dense(h.rescaled(2.0), 0.1) - 2.0 * assemble_dense(h, 0.2)).norm() < 1e-12);
  CHECK((assemble_dense(h.reversed(1.0), 0.25) + assemble_dense(h, 0.75)).norm() < 1e-12);
  CHECK(h.time_independent());
}
