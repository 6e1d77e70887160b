#include "lrlab/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>

#include "lrlab/errors.hpp"

namespace lrlab {

namespace {

constexpr double kNormSlack = 1e-12;

std::vector<LocalTerm> scale_terms(const std::vector<LocalTerm>& terms, double alpha, double a, double b) {
  std::vector<LocalTerm> out;
  out.reserve(terms.size());
  for (const LocalTerm& t : terms) {
    LocalTerm copy = t;
    copy.schedule = t.schedule.time_mapped(a, b).scaled(alpha);
    out.push_back(std::move(copy));
  }
  return out;
}

}  // namespace

LocalTerm::LocalTerm(DenseOperator base_op, Schedule sched, TermKind k, std::string name)
    : base(std::move(base_op)), schedule(std::move(sched)), kind(k), label(std::move(name)) {
  if (!is_hermitian(base.matrix(), 1e-12)) throw DomainError("LocalTerm '" + label + "' is not Hermitian");
  base_norm = operator_norm(base.matrix());
}

HamiltonianSpec::HamiltonianSpec(std::shared_ptr<const SpinGraph> graph, std::vector<LocalTerm> terms)
    : graph_(std::move(graph)), terms_(std::move(terms)) {
  if (!graph_) throw DomainError("HamiltonianSpec needs a graph");
  for (const LocalTerm& t : terms_) {
    for (int q : t.support())
      if (!graph_->contains(q))
        throw DomainError("term '" + t.label + "' acts on qubit " + std::to_string(q) + " outside the graph");
    switch (t.kind) {
      case TermKind::Site:
        if (t.support().size() != 1) throw DomainError("site term '" + t.label + "' must act on one qubit");
        break;
      case TermKind::Bond:
        if (t.support().size() != 2 || !graph_->has_edge(t.support()[0], t.support()[1]))
          throw DomainError("bond term '" + t.label + "' must act on a graph edge");
        break;
      default:
        break;
    }
    g_ = std::max(g_, t.strength());
  }
}

std::vector<double> HamiltonianSpec::breakpoints(double t0, double t1) const {
  std::set<double> pts;
  for (const LocalTerm& t : terms_)
    for (double b : t.schedule.breakpoints())
      if (b > t0 && b < t1) pts.insert(b);
  return {pts.begin(), pts.end()};
}

bool HamiltonianSpec::time_independent() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const LocalTerm& t) { return t.schedule.is_constant(); });
}

bool HamiltonianSpec::has_closed_form() const {
  return std::any_of(terms_.begin(), terms_.end(),
                     [](const LocalTerm& t) { return !t.schedule.is_piecewise_constant(); });
}

bool HamiltonianSpec::constant_on(double t0, double t1) const {
  return !has_closed_form() && breakpoints(t0, t1).empty();
}

HamiltonianSpec HamiltonianSpec::rescaled(double alpha) const {
  return HamiltonianSpec(graph_, scale_terms(terms_, alpha, alpha, 0.0));
}

HamiltonianSpec HamiltonianSpec::scaled(double alpha) const {
  return HamiltonianSpec(graph_, scale_terms(terms_, alpha, 1.0, 0.0));
}

HamiltonianSpec HamiltonianSpec::reversed(double total_time) const {
  return HamiltonianSpec(graph_, scale_terms(terms_, -1.0, -1.0, total_time));
}

HamiltonianSpec HamiltonianSpec::with_terms(std::vector<LocalTerm> extra) const {
  std::vector<LocalTerm> all = terms_;
  for (auto& t : extra) all.push_back(std::move(t));
  return HamiltonianSpec(graph_, std::move(all));
}

double sampled_coupling_strength(const HamiltonianSpec& h, double t0, double t1, int samples) {
  double g = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double t = samples == 1 ? t0 : t0 + (t1 - t0) * i / (samples - 1);
    for (const LocalTerm& term : h.terms()) g = std::max(g, std::abs(term.schedule(t)) * term.base_norm);
  }
  return g;
}

DenseOperator site_operator(const Matrix& m, int q) { return DenseOperator(m, {q}); }

DenseOperator pair_operator(const Matrix& a, const Matrix& b, int p, int q) {
  return DenseOperator(Eigen::kroneckerProduct(a, b).eval(), {p, q});
}

HamiltonianSpec build_tfim(std::shared_ptr<const SpinGraph> graph, double J, double h) {
  return build_tfim_scheduled(std::move(graph), Schedule::constant(J), Schedule::constant(h));
}

HamiltonianSpec build_tfim_scheduled(std::shared_ptr<const SpinGraph> graph, Schedule coupling, Schedule field) {
  std::vector<LocalTerm> terms;
  const Matrix z = pauli::Z();
  const Matrix x = pauli::X();
  for (const Edge& e : graph->edges())
    terms.emplace_back(pair_operator(-z, z, e.u, e.v), coupling, TermKind::Bond,
                       "ZZ(" + std::to_string(e.u) + "," + std::to_string(e.v) + ")");
  for (Vertex v = 0; v < graph->size(); ++v)
    terms.emplace_back(site_operator(-x, v), field, TermKind::Site, "X(" + std::to_string(v) + ")");
  return HamiltonianSpec(std::move(graph), std::move(terms));
}

HamiltonianSpec build_heisenberg(std::shared_ptr<const SpinGraph> graph, double J) {
  std::vector<LocalTerm> terms;
  const Matrix xx = Eigen::kroneckerProduct(pauli::X(), pauli::X()).eval();
  const Matrix yy = Eigen::kroneckerProduct(pauli::Y(), pauli::Y()).eval();
  const Matrix zz = Eigen::kroneckerProduct(pauli::Z(), pauli::Z()).eval();
  const Matrix bond = xx + yy + zz;
  for (const Edge& e : graph->edges())
    terms.emplace_back(DenseOperator(bond, {e.u, e.v}), Schedule::constant(J), TermKind::Bond,
                       "XXZ(" + std::to_string(e.u) + "," + std::to_string(e.v) + ")");
  return HamiltonianSpec(std::move(graph), std::move(terms));
}

namespace {

Matrix pauli_string(const Matrix& p, int k) {
  Matrix m = Matrix::Ones(1, 1);
  for (int i = 0; i < k; ++i) m = Eigen::kroneckerProduct(m, p).eval();
  return m;
}

HamiltonianSpec toric_hamiltonian(const ToricLayout& layout) {
  if (layout.num_qubits() > ToricCode::kMaxQubits)
    throw CapabilityError("toric code too large for dense construction", "qubits", layout.num_qubits(),
                          ToricCode::kMaxQubits);
  std::vector<LocalTerm> terms;
  const Matrix xs = pauli_string(pauli::X(), 4);
  const Matrix zs = pauli_string(pauli::Z(), 4);
  for (std::size_t s = 0; s < layout.stars.size(); ++s) {
    const auto& q = layout.stars[s];
    terms.emplace_back(DenseOperator(-xs, {q.begin(), q.end()}), Schedule::constant(1.0), TermKind::Stabilizer,
                       "A" + std::to_string(s));
  }
  for (std::size_t p = 0; p < layout.plaquettes.size(); ++p) {
    const auto& q = layout.plaquettes[p];
    terms.emplace_back(DenseOperator(-zs, {q.begin(), q.end()}), Schedule::constant(1.0), TermKind::Stabilizer,
                       "B" + std::to_string(p));
  }
  return HamiltonianSpec(std::make_shared<const SpinGraph>(layout.qubits), std::move(terms));
}

}  // namespace

ToricCode::ToricCode(ToricLayout layout)
    : layout_(std::make_shared<const ToricLayout>(std::move(layout))), hamiltonian_(toric_hamiltonian(*layout_)) {}

DenseOperator ToricCode::star_operator(int s) const {
  const auto& q = layout_->stars.at(static_cast<std::size_t>(s));
  return DenseOperator(pauli_string(pauli::X(), 4), {q.begin(), q.end()});
}

DenseOperator ToricCode::plaquette_operator(int p) const {
  const auto& q = layout_->plaquettes.at(static_cast<std::size_t>(p));
  return DenseOperator(pauli_string(pauli::Z(), 4), {q.begin(), q.end()});
}

Vector ToricCode::project_stars(Vector v) const {
  const int n = layout_->num_qubits();
  for (std::size_t s = 0; s < layout_->stars.size(); ++s)
    v = 0.5 * (v + apply_local(v, n, star_operator(static_cast<int>(s))));
  return v;
}

PureState ToricCode::ground_state(int logical) const {
  const int n = layout_->num_qubits();
  Vector v = Vector::Zero(dim_of(n));
  v(0) = 1.0;
  if (logical == 1) {
    for (int q : layout_->dual_loop(layout_->ny - 1)) v = apply_local(v, n, site_operator(pauli::X(), q));
  } else if (logical != 0) {
    throw DomainError("ToricCode::ground_state: logical index must be 0 or 1");
  }
  return PureState::normalized(n, project_stars(std::move(v)));
}

LocalTerm build_product_coupling(const DenseOperator& ja, const DenseOperator& jb, Schedule schedule) {
  const double na = operator_norm(ja.matrix());
  const double nb = operator_norm(jb.matrix());
  if (na > 1.0 + kNormSlack || nb > 1.0 + kNormSlack)
    throw DomainError("build_product_coupling: ||J_A|| = " + std::to_string(na) + ", ||J_B|| = " +
                      std::to_string(nb) + " (both must be <= 1)");
  for (int q : ja.support())
    if (std::find(jb.support().begin(), jb.support().end(), q) != jb.support().end())
      throw DomainError("build_product_coupling: J_A and J_B supports overlap");
  std::vector<int> support = ja.support();
  support.insert(support.end(), jb.support().begin(), jb.support().end());
  LocalTerm term(DenseOperator(Eigen::kroneckerProduct(ja.matrix(), jb.matrix()).eval(), support),
                 std::move(schedule), TermKind::Coupling, "coupling");
  term.factor_norm_a = na;
  term.factor_norm_b = nb;
  term.side_a = ja.support();
  term.side_b = jb.support();
  return term;
}

double cut_weight(const LocalTerm& term, std::span<const int> region_a) {
  const auto& sup = term.support();
  auto in_a = [&](int q) { return std::find(region_a.begin(), region_a.end(), q) != region_a.end(); };
  std::vector<int> pa, pb;  // positions within the support
  for (int i = 0; i < static_cast<int>(sup.size()); ++i) (in_a(sup[i]) ? pa : pb).push_back(i);
  if (pa.empty() || pb.empty()) return 0.0;

  if (term.kind == TermKind::Coupling) {
    const bool aligned = std::all_of(term.side_a.begin(), term.side_a.end(), in_a) &&
                         std::none_of(term.side_b.begin(), term.side_b.end(), in_a);
    const bool flipped = std::all_of(term.side_b.begin(), term.side_b.end(), in_a) &&
                         std::none_of(term.side_a.begin(), term.side_a.end(), in_a);
    if (aligned || flipped) return term.factor_norm_a * term.factor_norm_b;
  }

  // Operator-Schmidt decomposition across the cut.
  const int k = static_cast<int>(sup.size());
  const int ka = static_cast<int>(pa.size());
  const int kb = static_cast<int>(pb.size());
  auto offsets = [k](const std::vector<int>& pos) {
    std::vector<Index> off(Index{1} << pos.size(), 0);
    for (Index j = 0; j < static_cast<Index>(off.size()); ++j)
      for (std::size_t i = 0; i < pos.size(); ++i)
        if ((j >> (pos.size() - 1 - i)) & 1) off[j] |= Index{1} << (k - 1 - pos[i]);
    return off;
  };
  const auto oa = offsets(pa);
  const auto ob = offsets(pb);
  const Index da = dim_of(ka);
  const Index db = dim_of(kb);
  const Matrix& h = term.base.matrix();
  Matrix r(da * da, db * db);
  for (Index i = 0; i < da; ++i)
    for (Index j = 0; j < da; ++j)
      for (Index m = 0; m < db; ++m)
        for (Index l = 0; l < db; ++l) r(i * da + j, m * db + l) = h(oa[i] | ob[m], oa[j] | ob[l]);
  Eigen::JacobiSVD<Matrix> svd(r, Eigen::ComputeThinU | Eigen::ComputeThinV);
  double w = 0.0;
  for (Index s = 0; s < svd.singularValues().size(); ++s) {
    const double sv = svd.singularValues()(s);
    if (sv < 1e-14) continue;
    const Matrix a = svd.matrixU().col(s).reshaped(da, da).transpose();
    const Matrix b = svd.matrixV().col(s).conjugate().reshaped(db, db).transpose();
    w += sv * operator_norm(a) * operator_norm(b);
  }
  return w;
}

Matrix assemble_dense(const HamiltonianSpec& h, double t) {
  const int n = h.num_qubits();
  if (n > kDenseQubitLimit)
    throw CapabilityError("assemble_dense: system too large", "qubits", n, kDenseQubitLimit);
  const Index d = dim_of(n);
  Matrix out = Matrix::Zero(d, d);
  for (const LocalTerm& term : h.terms()) {
    const double r = term.schedule(t);
    if (r == 0.0) continue;
    out += r * kron_embed(term.base, n).matrix();
  }
  return out;
}

Vector matvec(const HamiltonianSpec& h, double t, const Vector& v) {
  const int n = h.num_qubits();
  if (n > kMatrixFreeQubitLimit)
    throw CapabilityError("matvec: system too large", "qubits", n, kMatrixFreeQubitLimit);
  Vector out = Vector::Zero(v.size());
  for (const LocalTerm& term : h.terms()) {
    const double r = term.schedule(t);
    if (r == 0.0) continue;
    out += r * apply_local(v, n, term.base);
  }
  return out;
}

}  // namespace lrlab
