#pragma once

#include <vector>

#include "lrlab/hamiltonian.hpp"
#include "lrlab/krylov.hpp"
#include "lrlab/quantum.hpp"

namespace lrlab {

enum class StepMethod { ExactStep, Trotter1, Trotter2 };
enum class Backend { Auto, Dense, Krylov };

/// Time window and stepping controls (hbar = 1, time in 1/energy).
struct PropagatorPlan {
  double t_start = 0.0;
  double t_end = 0.0;
  double dt = 0.01;
  double tolerance = 1e-8;
  StepMethod method = StepMethod::ExactStep;
  Backend backend = Backend::Auto;
  /// Auto picks the dense exponential up to this many qubits, Krylov above.
  int dense_auto_limit = 10;
  /// Step-halving attempts for closed-form schedules.
  int max_halvings = 10;
  KrylovOptions krylov;

  void validate() const;
  PropagatorPlan window(double t0, double t1) const;
  /// Window [t_start, t_start + duration].
  PropagatorPlan lasting(double duration) const { return window(t_start, t_start + duration); }
};

struct EvolutionReport {
  int steps = 0;
  int halvings = 0;
  double last_difference = 0.0;  ///< ||psi_dt - psi_dt/2|| of the accepted pair
  bool exact_segments = true;    ///< every segment had a constant Hamiltonian
  Backend backend = Backend::Auto;
};

/// U v over the plan window (or U^dagger v when adjoint is set).
///
/// Breakpoints of piecewise schedules split the window into segments. A
/// segment with a constant Hamiltonian is propagated exactly; closed-form
/// schedules use the midpoint rule with dt-halving until successive results
/// differ by less than the tolerance.
Vector propagate(const HamiltonianSpec& h, const Vector& v, const PropagatorPlan& plan, bool adjoint = false,
                 EvolutionReport* report = nullptr);

PureState evolve_state(const HamiltonianSpec& h, const PureState& psi, const PropagatorPlan& plan,
                       EvolutionReport* report = nullptr);

/// exp(-i tau H(t_eval)) v with the Hamiltonian frozen at t_eval; tau < 0 runs backwards.
/// Auto uses the dense exponential for n <= 10.
Vector frozen_step(const HamiltonianSpec& h, double t_eval, double tau, const Vector& v,
                   Backend backend = Backend::Auto, const KrylovOptions& krylov = {});

/// Dense U(t_end, t_start); n <= 12.
Matrix propagator(const HamiltonianSpec& h, const PropagatorPlan& plan);

/// U^dagger(t) embed(O) U(t) over [plan.t_start, plan.t_start + t]; n <= 12.
DenseOperator heisenberg_operator(const HamiltonianSpec& h, const DenseOperator& o, double t,
                                  const PropagatorPlan& plan);

/// U^dagger(t) O U(t) v without forming matrices; n <= 20.
Vector heisenberg_apply(const HamiltonianSpec& h, const DenseOperator& o, double t, const Vector& v,
                        const PropagatorPlan& plan);

/// Indices into h.terms(); terms within a group must commute.
using TermGrouping = std::vector<std::vector<int>>;

/// Product-formula evolution over [0, t] with `steps` equal steps.
/// order 1: prod_g exp(-i H_g dt); order 2: symmetric (Strang) splitting.
PureState trotter_evolve(const HamiltonianSpec& h, const PureState& psi, double t, int steps, int order,
                         const TermGrouping& grouping = {});

/// Dense propagator of a time-independent Hamiltonian from one eigendecomposition.
class SpectralPropagator {
 public:
  explicit SpectralPropagator(const HamiltonianSpec& h);

  int num_qubits() const { return n_; }
  const RealVector& energies() const { return energies_; }
  Matrix unitary(double t) const;
  Vector apply(const Vector& v, double t) const;
  /// U^dagger(t) embed(O) U(t); exactly embed(O) at t = 0.
  Matrix heisenberg(const DenseOperator& o, double t) const;

 private:
  int n_;
  RealVector energies_;
  Matrix basis_;
};

}  // namespace lrlab
