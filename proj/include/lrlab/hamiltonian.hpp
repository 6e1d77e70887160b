#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "lrlab/lattice.hpp"
#include "lrlab/linalg.hpp"
#include "lrlab/quantum.hpp"

namespace lrlab {

/// Real coefficient r(t) multiplying a local term.
///
/// Piecewise-constant schedules hold value[i] on [breakpoint[i], breakpoint[i+1])
/// and zero outside. Closed-form schedules are sampled by the integrator at
/// step midpoints; their bound is declared by the caller.
class Schedule {
 public:
  static Schedule constant(double value);
  static Schedule piecewise(std::vector<double> breakpoints, std::vector<double> values);
  static Schedule closed_form(std::function<double(double)> f, double bound, std::string label = "closed-form");
  /// value on [start, stop), zero elsewhere.
  static Schedule pulse(double start, double stop, double value = 1.0);

  double operator()(double t) const;
  /// max |r(t)|: exact for constant and piecewise schedules, declared for closed form.
  double bound() const { return bound_; }
  bool is_piecewise_constant() const { return kind_ != Kind::ClosedForm; }
  bool is_constant() const { return kind_ == Kind::Constant; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::string& label() const { return label_; }

  Schedule scaled(double alpha) const;
  /// r'(s) = r(a*s + b), a != 0.
  Schedule time_mapped(double a, double b) const;

 private:
  enum class Kind { Constant, Piecewise, ClosedForm };

  Kind kind_ = Kind::Constant;
  double constant_ = 0.0;
  std::vector<double> breakpoints_;
  std::vector<double> values_;
  std::function<double(double)> f_;
  double bound_ = 0.0;
  std::string label_;
};

enum class TermKind {
  Site,        ///< single-qubit field
  Bond,        ///< two-qubit term on a graph edge
  Stabilizer,  ///< multi-qubit stabilizer; excluded from 2-local-only paths
  Coupling,    ///< product coupling J_A (x) J_B across a cut
  Block,       ///< arbitrary operator on a block (H_A, H_B); not 2-local
};

struct LocalTerm {
  DenseOperator base;
  Schedule schedule;
  TermKind kind = TermKind::Site;
  std::string label;
  double base_norm = 0.0;
  /// For Coupling terms: ||J_A|| and ||J_B||.
  double factor_norm_a = 0.0;
  double factor_norm_b = 0.0;
  std::vector<int> side_a;
  std::vector<int> side_b;

  LocalTerm(DenseOperator base, Schedule schedule, TermKind kind, std::string label = {});

  const std::vector<int>& support() const { return base.support(); }
  bool two_local() const { return kind == TermKind::Site || kind == TermKind::Bond; }
  /// max_t ||r(t) h||
  double strength() const { return base_norm * schedule.bound(); }
};

/// H(t) = sum_k r_k(t) h_k on the qubits (vertices) of a graph.
class HamiltonianSpec {
 public:
  HamiltonianSpec(std::shared_ptr<const SpinGraph> graph, std::vector<LocalTerm> terms);

  int num_qubits() const { return graph_->size(); }
  const SpinGraph& graph() const { return *graph_; }
  std::shared_ptr<const SpinGraph> graph_ptr() const { return graph_; }
  const std::vector<LocalTerm>& terms() const { return terms_; }

  /// g = max over terms and times of ||r(t) h||.
  double coupling_strength() const { return g_; }
  /// Sorted breakpoints of all piecewise schedules strictly inside (t0, t1).
  std::vector<double> breakpoints(double t0, double t1) const;
  bool time_independent() const;
  bool has_closed_form() const;
  /// True if every schedule is constant on (t0, t1).
  bool constant_on(double t0, double t1) const;

  /// alpha * H(alpha * s): evolving for time t equals evolving H for alpha * t.
  HamiltonianSpec rescaled(double alpha) const;
  /// alpha * H(t), same time axis.
  HamiltonianSpec scaled(double alpha) const;
  /// -H(T - s): undoes evolution under H over [0, T].
  HamiltonianSpec reversed(double total_time) const;
  /// This spec plus extra terms.
  HamiltonianSpec with_terms(std::vector<LocalTerm> extra) const;

 private:
  std::shared_ptr<const SpinGraph> graph_;
  std::vector<LocalTerm> terms_;
  double g_ = 0.0;
};

/// max over a uniform time grid of ||r_k(t) h_k||; brute-force check of g.
double sampled_coupling_strength(const HamiltonianSpec& h, double t0, double t1, int samples);

/// -J Z_i Z_j per edge, -h X_i per vertex.
HamiltonianSpec build_tfim(std::shared_ptr<const SpinGraph> graph, double J, double h);
/// J (X X + Y Y + Z Z) per edge.
HamiltonianSpec build_heisenberg(std::shared_ptr<const SpinGraph> graph, double J);
/// Nearest-neighbour Ising coupling with piecewise field/coupling schedules.
HamiltonianSpec build_tfim_scheduled(std::shared_ptr<const SpinGraph> graph, Schedule coupling, Schedule field);

/// Toric code H = -sum A_s - sum B_p with a logical ground basis.
class ToricCode {
 public:
  static constexpr int kMaxQubits = 16;

  explicit ToricCode(ToricLayout layout);

  const ToricLayout& layout() const { return *layout_; }
  const HamiltonianSpec& hamiltonian() const { return hamiltonian_; }
  /// Index 0: projection of |0...0>; index 1: projection of the dual-loop X
  /// string (vertical edges of the last row) applied to |0...0>.
  PureState ground_state(int logical) const;
  /// Product of X over a star, or Z over a plaquette, as a local operator.
  DenseOperator star_operator(int s) const;
  DenseOperator plaquette_operator(int p) const;
  /// Applies prod_s (1 + A_s)/2 (unnormalized projection onto the star +1 space).
  Vector project_stars(Vector v) const;

 private:
  std::shared_ptr<const ToricLayout> layout_;
  HamiltonianSpec hamiltonian_;
};

/// Coupling term J_A (x) J_B with schedule r(t); requires ||J_A||, ||J_B|| <= 1.
LocalTerm build_product_coupling(const DenseOperator& ja, const DenseOperator& jb, Schedule schedule);

/// Weight w with ||h|| decomposed as sum_i w_i A_i (x) B_i across the cut (A, rest):
/// sum of ||A_i|| ||B_i|| s_i over the operator-Schmidt decomposition. Zero if the
/// term does not cross the cut.
double cut_weight(const LocalTerm& term, std::span<const int> region_a);

constexpr int kDenseQubitLimit = 12;
constexpr int kMatrixFreeQubitLimit = 20;

/// sum_k r_k(t) embed(h_k) as a 2^n matrix (n <= 12).
Matrix assemble_dense(const HamiltonianSpec& h, double t);
/// H(t) v without assembling the matrix (n <= 20).
Vector matvec(const HamiltonianSpec& h, double t, const Vector& v);

/// Single-site operator on qubit q.
DenseOperator site_operator(const Matrix& m, int q);
/// Two-site operator a (x) b on qubits (p, q).
DenseOperator pair_operator(const Matrix& a, const Matrix& b, int p, int q);

}  // namespace lrlab
