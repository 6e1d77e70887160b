#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "lrlab/errors.hpp"
#include "lrlab/quantum.hpp"
#include "lrlab/random.hpp"
#include "oracles.hpp"

using namespace lrlab;

namespace {

std::vector<int> random_support(int n, int k, Rng& rng) {
  std::vector<int> all(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(static_cast<std::size_t>(k));
  return all;
}

Matrix outer(const Vector& a, const Vector& b) { return a * b.adjoint(); }

}  // namespace

TEST_CASE("kron_embed") {
  CHECK((kron_embed(DenseOperator(pauli::X(), {0}), 1).matrix() - pauli::X()).norm() == 0.0);
  const Matrix ix = kron_embed(DenseOperator(pauli::X(), {1}), 2).matrix();
  Matrix expected = Matrix::Zero(4, 4);
  expected.block(0, 0, 2, 2) = pauli::X();
  expected.block(2, 2, 2, 2) = pauli::X();
  CHECK((ix - expected).norm() == 0.0);
  Rng rng(1);
  const Matrix h = random_hermitian(4, rng, 2.5);
  CHECK(operator_norm(kron_embed(DenseOperator(h, {3, 1}), 4)) == doctest::Approx(2.5).epsilon(1e-12));
  CHECK_THROWS_AS(kron_embed(DenseOperator(pauli::X(), {2}), 2), DomainError);
}

TEST_CASE("apply_local matches the explicit embedding") {
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const int k = 1 + static_cast<int>(rng() % std::min(n, 3));
    const auto support = random_support(n, k, rng);
    const Matrix op = ginibre(Index{1} << k, Index{1} << k, rng);
    const Vector v = ginibre(dim_of(n), 1, rng).col(0);
    const Vector fast = apply_local(v, n, DenseOperator(op, support));
    const Vector slow = oracle::embed(op, support, n) * v;
    CHECK((fast - slow).norm() <= 1e-12 * std::max(1.0, slow.norm()));
    CHECK((kron_embed(DenseOperator(op, support), n).matrix() - oracle::embed(op, support, n)).norm() <= 1e-12);
  }
  const PureState zz = PureState::basis(2, 0);
  const Vector flipped = apply_local(zz, DenseOperator(pauli::X(), {0}));
  CHECK(std::abs(flipped(2) - cplx(1.0)) < 1e-15);
  CHECK((apply_local(zz, DenseOperator::identity({0, 1})) - zz.amplitudes()).norm() == 0.0);
  CHECK_THROWS_AS(apply_local(Vector::Zero(3), 2, DenseOperator(pauli::X(), {0})), DomainError);
}

TEST_CASE("multiply_local_left and right") {
  Rng rng(3);
  const int n = 4;
  const Matrix m = ginibre(16, 16, rng);
  const Matrix op = ginibre(4, 4, rng);
  const DenseOperator d(op, {2, 0});
  const Matrix e = oracle::embed(op, {2, 0}, n);
  CHECK((multiply_local_left(d, m, n) - e * m).norm() <= 1e-12);
  CHECK((multiply_local_right(m, d, n) - m * e).norm() <= 1e-12);
}

TEST_CASE("partial_trace") {
  const Vector bell = (Vector::Unit(4, 0) + Vector::Unit(4, 3)) / std::sqrt(2.0);
  const int keep0[] = {0};
  CHECK((partial_trace(PureState(2, bell), keep0).matrix() - 0.5 * Matrix::Identity(2, 2)).norm() < 1e-15);
  const int keep1[] = {1};
  const Matrix r01 = partial_trace(PureState::basis(2, 1), keep1).matrix();
  CHECK(std::abs(r01(1, 1) - cplx(1.0)) < 1e-15);
  CHECK(std::abs(r01(0, 0)) < 1e-15);
  const int keep01[] = {0, 1};
  const Matrix g = partial_trace(PureState::ghz(3), keep01).matrix();
  Matrix expected = Matrix::Zero(4, 4);
  expected(0, 0) = expected(3, 3) = 0.5;
  CHECK((g - expected).norm() < 1e-15);
  CHECK_THROWS_AS(partial_trace(PureState::ghz(3), std::span<const int>{}), DomainError);

  Rng rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 4);
    auto keep = random_support(n, 1 + static_cast<int>(rng() % (n - 1)), rng);
    std::sort(keep.begin(), keep.end());
    const PureState psi = random_state(n, rng);
    const DensityMatrix rho = partial_trace(psi, keep);
    const Matrix slow = oracle::partial_trace(outer(psi.amplitudes(), psi.amplitudes()), n, keep);
    CHECK((rho.matrix() - slow).norm() < 1e-12);
    CHECK(is_hermitian(rho.matrix()));
    CHECK(std::abs(rho.matrix().trace() - cplx(1.0)) < 1e-12);
    const DensityMatrix full = DensityMatrix::from_pure(psi);
    CHECK((partial_trace(full, keep).matrix() - slow).norm() < 1e-12);
  }
}

TEST_CASE("transition_matrix") {
  const int keep0[] = {0};
  const PureState a = PureState::basis(2, 0), b = PureState::basis(2, 2);
  const Matrix x = transition_matrix(a, b, keep0).matrix();
  Matrix expected = Matrix::Zero(2, 2);
  expected(1, 0) = 1.0;
  CHECK((x - expected).norm() < 1e-15);
  CHECK((transition_matrix(a, a, keep0).matrix() - partial_trace(a, keep0).matrix()).norm() < 1e-15);

  // GHZ+/- on four qubits against the explicit outer product
  const PureState gp = PureState::ghz(4, 1.0), gm = PureState::ghz(4, -1.0);
  const Matrix direct = oracle::partial_trace(outer(gm.amplitudes(), gp.amplitudes()), 4, {0});
  const Matrix xg = transition_matrix(gp, gm, keep0).matrix();
  CHECK((xg - direct).norm() < 1e-14);
  CHECK((xg - 0.5 * pauli::Z()).norm() < 1e-14);

  Rng rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    auto keep = random_support(n, 1 + static_cast<int>(rng() % std::min(3, n)), rng);
    std::sort(keep.begin(), keep.end());
    const PureState p1 = random_state(n, rng), p2 = random_state(n, rng);
    const Matrix o = ginibre(Index{1} << keep.size(), Index{1} << keep.size(), rng);
    const cplx lhs = (o * transition_matrix(p1, p2, keep).matrix()).trace();
    const cplx rhs = p1.amplitudes().dot(apply_local(p2, DenseOperator(o, keep)));
    CHECK(std::abs(lhs - rhs) <= 1e-10);
  }
  CHECK_THROWS_AS(transition_matrix(PureState::basis(2, 0), PureState::basis(3, 0), keep0), DomainError);
}

TEST_CASE("operator norms") {
  CHECK(operator_norm(pauli::X()) == doctest::Approx(1.0));
  const Matrix comm = pauli::X() * pauli::Z() - pauli::Z() * pauli::X();
  CHECK(operator_norm(comm) == doctest::Approx(2.0).epsilon(1e-14));
  Rng rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix m = ginibre(8, 8, rng);
    Eigen::JacobiSVD<Matrix> svd(m);
    const double exact = svd.singularValues()(0);
    CHECK(operator_norm(m) == doctest::Approx(exact).epsilon(1e-12));
    const LinearMap a = [&m](const Vector& v) { return Vector(m * v); };
    const LinearMap ad = [&m](const Vector& v) { return Vector(m.adjoint() * v); };
    const NormEstimate est = operator_norm_power(a, ad, 8, {});
    CHECK(std::abs(est.value - exact) <= 1e-6);
    CHECK(est.lower_bound <= exact + 1e-12);
  }
  PowerIterationOptions few;
  few.max_iterations = 1;
  const Matrix m = ginibre(16, 16, rng);
  const LinearMap a = [&m](const Vector& v) { return Vector(m * v); };
  const LinearMap ad = [&m](const Vector& v) { return Vector(m.adjoint() * v); };
  try {
    operator_norm_power(a, ad, 16, few);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.best_estimate() > 0.0);
  }
}

TEST_CASE("trace norm and its maximizer") {
  CHECK(trace_norm(DensityMatrix::from_pure(PureState::ghz(2)).matrix()) == doctest::Approx(1.0));
  Matrix x = Matrix::Zero(2, 2);
  x(1, 0) = 1.0;
  CHECK(trace_norm(x) == doctest::Approx(1.0));
  const Matrix d = outer(Vector::Unit(2, 0), Vector::Unit(2, 0)) - outer(Vector::Unit(2, 1), Vector::Unit(2, 1));
  CHECK(trace_norm(d) == doctest::Approx(2.0));

  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix m = ginibre(4, 4, rng);
    const double tn = trace_norm(m);
    const Matrix o = trace_norm_maximizer(m);
    CHECK(operator_norm(o) <= 1.0 + 1e-12);
    CHECK(std::abs((o * m).trace() - cplx(tn)) <= 1e-10);
    for (int k = 0; k < 50; ++k) {
      Matrix r = haar_unitary(4, rng);
      CHECK(std::abs((r * m).trace()) <= tn + 1e-12);
    }
  }
}

TEST_CASE("von Neumann entropy in bits") {
  CHECK(von_neumann_entropy(DensityMatrix::from_pure(PureState::ghz(3))) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(von_neumann_entropy(DensityMatrix(0.5 * Matrix::Identity(2, 2))) == doctest::Approx(1.0));
  CHECK(von_neumann_entropy(DensityMatrix(0.25 * Matrix::Identity(4, 4))) == doctest::Approx(2.0));
  Matrix bad = Matrix::Zero(2, 2);
  bad(0, 0) = 1.1;
  bad(1, 1) = -0.1;
  CHECK_THROWS_AS(DensityMatrix{bad}, DomainError);
  RealVector spectrum(2);
  spectrum << 1.0 + 5e-11, -5e-11;
  CHECK(entropy_of_spectrum(spectrum) == doctest::Approx(0.0).epsilon(1e-9));
  spectrum << 1.0, -1e-9;
  CHECK_THROWS_AS(entropy_of_spectrum(spectrum), DomainError);
  Rng rng(9);
  for (int k = 0; k < 20; ++k) {
    const Matrix rho = random_density(8, rng);
    CHECK(von_neumann_entropy(DensityMatrix(rho)) == doctest::Approx(oracle::entropy_bits(rho)).epsilon(1e-10));
  }
}

TEST_CASE("state validation") {
  CHECK_THROWS_AS(PureState(1, Vector::Ones(2)), DomainError);
  CHECK_NOTHROW(PureState::normalized(1, Vector::Ones(2)));
  CHECK_THROWS_AS(PureState(2, Vector::Unit(2, 0)), DomainError);
}

TEST_CASE("haar_truncate") {
  const int n = 3;
  const DenseOperator id = DenseOperator::on_all(Matrix::Identity(8, 8));
  const int outside0[] = {0};
  CHECK((haar_truncate(id, outside0).matrix() - id.matrix()).norm() < 1e-15);
  const DenseOperator x2 = kron_embed(DenseOperator(pauli::X(), {2}), n);
  const int outside01[] = {0, 1};
  CHECK((haar_truncate(x2, outside01).matrix() - x2.matrix()).norm() < 1e-15);
  const DenseOperator z0 = kron_embed(DenseOperator(pauli::Z(), {0}), n);
  CHECK(haar_truncate(z0, outside0).matrix().norm() < 1e-15);
  const int all[] = {0, 1, 2};
  CHECK_THROWS_AS(haar_truncate(z0, all), DomainError);

  Rng rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix h = random_hermitian(16, rng);
    const DenseOperator op = DenseOperator::on_all(h);
    auto s = random_support(4, 1 + static_cast<int>(rng() % 3), rng);
    const DenseOperator once = haar_truncate(op, s);
    const DenseOperator twice = haar_truncate(once, s);
    CHECK((once.matrix() - twice.matrix()).norm() <= 1e-12);
    CHECK(operator_norm(Matrix(h - once.matrix())) <= 2.0 * operator_norm(h) + 1e-12);
    std::sort(s.begin(), s.end());
    std::vector<int> keep;
    for (int q = 0; q < 4; ++q)
      if (!std::binary_search(s.begin(), s.end(), q)) keep.push_back(q);
    const Matrix reduced = oracle::partial_trace(h, 4, keep) / std::pow(2.0, static_cast<double>(s.size()));
    CHECK((once.matrix() - oracle::embed(reduced, keep, 4)).norm() <= 1e-12);
  }
  // Monte-Carlo twirl converges to the exact truncation
  const Matrix h = random_hermitian(8, rng);
  const int out1[] = {1};
  const DenseOperator exact = haar_truncate(DenseOperator::on_all(h), out1);
  const DenseOperator sampled = haar_twirl_sampled(DenseOperator::on_all(h), out1, 4000, 11);
  CHECK(operator_norm(Matrix(exact.matrix() - sampled.matrix())) < 0.1);
}
