#include <cmath>
#include <memory>
#include <numbers>

#include <unsupported/Eigen/KroneckerProduct>

#include "doctest.h"
#include "lrlab/errors.hpp"
#include "lrlab/evolution.hpp"
#include "lrlab/experiments.hpp"
#include "lrlab/random.hpp"
#include "oracles.hpp"

using namespace lrlab;

namespace {

std::shared_ptr<const SpinGraph> chain(int n) { return std::make_shared<const SpinGraph>(build_chain(n, false)); }
std::shared_ptr<const SpinGraph> single() { return std::make_shared<const SpinGraph>(1, std::vector<Edge>{}); }

PropagatorPlan plan_to(double t) {
  PropagatorPlan p;
  p.t_end = t;
  return p;
}

HamiltonianSpec single_qubit(const Matrix& m) {
  return HamiltonianSpec(single(), {LocalTerm(DenseOperator(m, {0}), Schedule::constant(1.0), TermKind::Site)});
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= x.size();
  my /= y.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sxy += (x[i] - mx) * (y[i] - my), sxx += (x[i] - mx) * (x[i] - mx);
  return sxy / sxx;
}

}  // namespace

TEST_CASE("plan validation") {
  PropagatorPlan p;
  p.dt = -1.0;
  CHECK_THROWS_AS(p.validate(), DomainError);
  p = plan_to(-1.0);
  CHECK_THROWS_AS(p.validate(), DomainError);
  p = plan_to(1.0);
  p.tolerance = 0.0;
  CHECK_THROWS_AS(p.validate(), DomainError);
}

TEST_CASE("analytic single-qubit evolution") {
  const HamiltonianSpec zero(chain(2), {});
  const PureState psi = PureState::all_plus(2);
  CHECK((evolve_state(zero, psi, plan_to(3.0)).amplitudes() - psi.amplitudes()).norm() == 0.0);

  const PureState out = evolve_state(single_qubit(pauli::X()), PureState::basis(1, 0), plan_to(std::numbers::pi / 2));
  CHECK(std::abs(out.amplitudes()(0)) < 1e-10);
  CHECK(std::abs(out.amplitudes()(1) - cplx(0.0, -1.0)) < 1e-10);

  const HamiltonianSpec hz = single_qubit(pauli::Z());
  for (double t : {0.0, 0.3, 1.1, 2.5}) {
    const Matrix xt = heisenberg_operator(hz, DenseOperator(pauli::X(), {0}), t, {}).matrix();
    const Matrix expected = std::cos(2 * t) * pauli::X() - std::sin(2 * t) * pauli::Y();
    CHECK((xt - expected).norm() < 1e-9);
  }
}

TEST_CASE("dense and Krylov backends agree on TFIM n=8") {
  const HamiltonianSpec h = build_tfim(chain(8), 1.0, 1.0);
  Rng rng(31);
  const PureState psi = random_state(8, rng);
  PropagatorPlan dense = plan_to(1.0), krylov = plan_to(1.0);
  dense.backend = Backend::Dense;
  krylov.backend = Backend::Krylov;
  const Vector a = evolve_state(h, psi, dense).amplitudes();
  const Vector b = evolve_state(h, psi, krylov).amplitudes();
  CHECK((a - b).norm() <= 1e-8);
  const Matrix u = oracle::expm(cplx(0.0, -1.0) * assemble_dense(h, 0.0));
  CHECK((u * psi.amplitudes() - a).norm() <= 1e-10);
}

TEST_CASE("Krylov exponential against a dense oracle") {
  Rng rng(32);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix m = random_hermitian(40, rng, 3.0);
    const Vector v = ginibre(40, 1, rng).col(0).normalized();
    const LinearMap h = [&m](const Vector& x) { return Vector(m * x); };
    for (double tau : {0.1, 1.0, -2.0}) {
      const Vector expected = oracle::expm(cplx(0.0, -tau) * m) * v;
      CHECK((krylov_expv(h, v, tau) - expected).norm() <= 1e-9);
    }
  }
}

TEST_CASE("heisenberg operator and apply") {
  const HamiltonianSpec h = build_tfim(chain(4), 1.0, 0.7);
  const DenseOperator z0(pauli::Z(), {0});
  CHECK((heisenberg_operator(h, z0, 0.0, {}).matrix() - oracle::embed(pauli::Z(), {0}, 4)).norm() == 0.0);
  CHECK((heisenberg_operator(h, DenseOperator::identity({1, 2}), 0.8, {}).matrix() - Matrix::Identity(16, 16)).norm() <
        1e-10);
  const Matrix zt = heisenberg_operator(h, z0, 0.9, {}).matrix();
  CHECK(operator_norm(zt) == doctest::Approx(1.0).epsilon(1e-9));

  const HamiltonianSpec zonly = build_tfim(chain(4), 1.0, 0.0);
  Rng rng(33);
  const Vector v = random_state(4, rng).amplitudes();
  CHECK((heisenberg_apply(zonly, z0, 1.3, v, {}) - apply_local(v, 4, z0)).norm() < 1e-10);

  const HamiltonianSpec h8 = build_tfim(chain(8), 1.0, 1.0);
  const DenseOperator zz(Eigen::kroneckerProduct(pauli::Z(), pauli::X()).eval(), {2, 5});
  const Vector w = random_state(8, rng).amplitudes();
  const Matrix u = oracle::expm(cplx(0.0, -0.7) * assemble_dense(h8, 0.0));
  const Vector expected = u.adjoint() * oracle::embed(zz.matrix(), {2, 5}, 8) * u * w;
  CHECK((heisenberg_apply(h8, zz, 0.7, w, {}) - expected).norm() <= 1e-8);
  CHECK((heisenberg_operator(h8, zz, 0.7, {}).matrix() * w - expected).norm() <= 1e-8);
}

TEST_CASE("disjoint operators commute at t = 0") {
  const HamiltonianSpec h = build_tfim(chain(6), 1.0, 1.0);
  const Matrix a = heisenberg_operator(h, DenseOperator(pauli::X(), {0}), 0.0, {}).matrix();
  const Matrix b = oracle::embed(pauli::Y(), {4}, 6);
  CHECK(operator_norm(Matrix(a * b - b * a)) <= 1e-12);
}

TEST_CASE("spectral propagator") {
  const HamiltonianSpec h = build_heisenberg(chain(4), 0.8);
  const SpectralPropagator sp(h);
  const Matrix u = oracle::expm(cplx(0.0, -1.7) * assemble_dense(h, 0.0));
  CHECK((sp.unitary(1.7) - u).norm() < 1e-10);
  CHECK((sp.unitary(1.7) - propagator(h, plan_to(1.7))).norm() < 1e-10);
  CHECK_THROWS_AS(SpectralPropagator(build_tfim_scheduled(chain(3), Schedule::pulse(0.0, 1.0), Schedule::constant(1.0))),
                  DomainError);
}

TEST_CASE("Trotter product formulas") {
  // every ZZ bond commutes with every other: one step is exact
  const HamiltonianSpec zz = build_tfim(chain(5), 1.0, 0.0);
  const PureState plus = PureState::all_plus(5);
  const Vector exact = evolve_state(zz, plus, plan_to(1.3)).amplitudes();
  CHECK((trotter_evolve(zz, plus, 1.3, 1, 1).amplitudes() - exact).norm() < 1e-12);

  const HamiltonianSpec h = build_tfim(chain(6), 1.0, 1.0);
  const PureState psi = PureState::all_plus(6);
  const Vector ref = evolve_state(h, psi, plan_to(1.0)).amplitudes();
  std::vector<double> lx, ly;
  double previous = 1e300;
  for (int steps : {8, 16, 32, 64, 128}) {
    const double err = (trotter_evolve(h, psi, 1.0, steps, 2).amplitudes() - ref).norm();
    CHECK(err < previous);
    previous = err;
    lx.push_back(std::log(1.0 / steps));
    ly.push_back(std::log(err));
  }
  const double slope = fit_slope(lx, ly);
  CHECK(slope == doctest::Approx(2.0).epsilon(0.1));
  const double e1 = (trotter_evolve(h, psi, 1.0, 64, 1).amplitudes() - ref).norm();
  const double e2 = (trotter_evolve(h, psi, 1.0, 128, 1).amplitudes() - ref).norm();
  CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.15));
  CHECK_THROWS_AS(trotter_evolve(h, psi, 1.0, 0, 2), DomainError);
  CHECK_THROWS_AS(trotter_evolve(h, psi, 1.0, 4, 3), DomainError);
}

TEST_CASE("piecewise schedules are propagated exactly") {
  const auto g = chain(4);
  const HamiltonianSpec h =
      build_tfim_scheduled(g, Schedule::piecewise({0.0, 0.5, 1.2}, {1.0, -0.4}), Schedule::piecewise({0.0, 1.2}, {0.8}));
  const PureState psi = PureState::all_plus(4);
  const Matrix u1 = oracle::expm(cplx(0.0, -0.5) * assemble_dense(h, 0.25));
  const Matrix u2 = oracle::expm(cplx(0.0, -0.7) * assemble_dense(h, 0.8));
  EvolutionReport report;
  const Vector out = evolve_state(h, psi, plan_to(1.2), &report).amplitudes();
  CHECK((out - u2 * u1 * psi.amplitudes()).norm() < 1e-10);
  CHECK(report.exact_segments);
}

TEST_CASE("closed-form schedules converge by step halving") {
  const HamiltonianSpec h = build_tfim_scheduled(
      chain(3), Schedule::constant(1.0), Schedule::closed_form([](double t) { return std::cos(3 * t); }, 1.0));
  EvolutionReport report;
  const PureState psi = PureState::all_plus(3);
  const Vector out = evolve_state(h, psi, plan_to(1.0), &report).amplitudes();
  CHECK_FALSE(report.exact_segments);
  CHECK(report.last_difference <= 1e-8);
  PropagatorPlan fine = plan_to(1.0);
  fine.dt = 1e-4;
  fine.tolerance = 1e-10;
  CHECK((evolve_state(h, psi, fine).amplitudes() - out).norm() < 1e-7);
  PropagatorPlan hopeless = plan_to(1.0);
  hopeless.dt = 0.5;
  hopeless.tolerance = 1e-14;
  hopeless.max_halvings = 1;
  CHECK_THROWS_AS(evolve_state(h, psi, hopeless), IntegratorConvergenceError);
}

TEST_CASE("evolution properties on random instances") {
  Rng rng(34);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 3 + trial % 4;
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    const double J = u(rng), hx = u(rng);
    const HamiltonianSpec h = trial % 2 == 0 ? build_tfim(chain(n), J, hx) : build_heisenberg(chain(n), J);
    const PureState psi = random_state(n, rng);
    const double t = 0.5 + trial;
    const PureState out = evolve_state(h, psi, plan_to(t));
    CHECK(std::abs(out.amplitudes().norm() - 1.0) <= 1e-10);

    const PureState back = evolve_state(h.reversed(t), out, plan_to(t));
    CHECK((back.amplitudes() - psi.amplitudes()).norm() <= 1e-8);
    const Vector undone = propagate(h, out.amplitudes(), plan_to(t), true);
    CHECK((undone - psi.amplitudes()).norm() <= 1e-8);

    const Matrix hm = assemble_dense(h, 0.0);
    const double e0 = psi.amplitudes().dot(hm * psi.amplitudes()).real();
    const PureState late = evolve_state(h, psi, plan_to(10.0));
    CHECK(std::abs(late.amplitudes().dot(hm * late.amplitudes()).real() - e0) <= 1e-9);

    const double alpha = 0.5 + 0.25 * trial;
    const Vector scaled = evolve_state(h.scaled(alpha), psi, plan_to(t)).amplitudes();
    const Vector stretched = evolve_state(h, psi, plan_to(alpha * t)).amplitudes();
    CHECK((scaled - stretched).norm() <= 1e-10);
    const Vector remapped = evolve_state(h.rescaled(alpha), psi, plan_to(t)).amplitudes();
    CHECK((remapped - stretched).norm() <= 1e-10);
  }
}
