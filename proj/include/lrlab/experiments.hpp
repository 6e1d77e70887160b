#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lrlab/bounds.hpp"
#include "lrlab/evolution.hpp"
#include "lrlab/hamiltonian.hpp"
#include "lrlab/lattice.hpp"
#include "lrlab/quantum.hpp"
#include "lrlab/random.hpp"

namespace lrlab {

/// Distances and times of a light-cone scan; both strictly increasing.
struct ScanGrid {
  std::vector<int> L;
  std::vector<double> t;

  void validate() const;
};

/// Rescales an observable to operator norm 1.
DenseOperator normalized_observable(const DenseOperator& op);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<double> residuals;
};

/// Least-squares line; needs at least two distinct x values.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

// ---------------------------------------------------------------- light cone

enum class LightconePath { Auto, Dense, MatrixFree };

struct LightconeOptions {
  PropagatorPlan plan;
  LightconePath path = LightconePath::Auto;
  PowerIterationOptions power;
  int threads = 1;
};

/// C(L, t) = ||[O_A(t), O_B]|| on a grid, rows indexed by L, columns by t.
struct LightconeTable {
  std::vector<int> L;
  std::vector<double> t;
  std::vector<int> site_b;  ///< vertex carrying O_B for each L
  Eigen::MatrixXd value;
  /// value minus a certified lower bound; zero on the dense path.
  Eigen::MatrixXd error;
  std::string path;
};

/// O_B is a single-qubit matrix placed on the lowest-index vertex at graph
/// distance L from the support of O_A. Both observables are normalized to
/// operator norm 1. The dense path handles n <= 10, the matrix-free path
/// (power iteration on the commutator built from heisenberg_apply) n <= 14.
LightconeTable lightcone_scan(const HamiltonianSpec& h, const DenseOperator& o_a, const Matrix& o_b,
                              const ScanGrid& grid, const LightconeOptions& options = {});

struct LightconeFit {
  double v_est = 0.0;
  double xi_est = 0.0;
  double theta = 0.0;
  std::vector<int> L;              ///< distances used (L >= min_L)
  std::vector<double> arrival;     ///< NaN where the threshold is never crossed
  std::vector<int> excluded;       ///< distances whose threshold was never crossed
  bool arrivals_monotone = true;   ///< arrivals nondecreasing in L
  double fit_time = 0.0;           ///< time column used for xi
  LineFit arrival_fit;             ///< t*(L) = slope L + intercept
  LineFit decay_fit;               ///< ln C(L, fit_time) = slope L + intercept
};

/// 0.1 * max C over the table.
double default_threshold(const LightconeTable& table);

/// Arrival t*(L): first grid time with C >= theta, linearly interpolated with
/// the preceding grid point. v_est = 1 / slope of t*(L); xi_est = -1 / slope
/// of ln C(L, t_max). Distances below min_L are ignored.
LightconeFit fit_lightcone(const LightconeTable& table, double theta, int min_L = 3);

// ---------------------------------------------------------------- truncation

struct TruncationRow {
  int l = 0;
  int outside = 0;  ///< |S|, vertices at distance >= l from supp(O_A)
  double error = 0.0;
};

/// ||O_A(t) - O_A^l(t)|| with O_A^l the Haar truncation over S; n <= 10.
std::vector<TruncationRow> truncation_scan(const HamiltonianSpec& h, const DenseOperator& o_a, double t,
                                           std::span<const int> ls, const PropagatorPlan& plan = {});

// ---------------------------------------------------------------- correlations

struct CorrelationPoint {
  double t = 0.0;
  double connected = 0.0;  ///< <AB> - <A><B>
  double ab = 0.0;
  double a = 0.0;
  double b = 0.0;
};

/// Evolves psi0 along the time grid (Schrodinger picture) and measures the
/// connected correlator of two Hermitian observables at each grid time.
std::vector<CorrelationPoint> correlation_spread(const HamiltonianSpec& h, const PureState& psi0,
                                                 const DenseOperator& o_a, const DenseOperator& o_b,
                                                 std::span<const double> times, const PropagatorPlan& plan = {});

// ---------------------------------------------------------------- Holevo

struct Ensemble {
  std::vector<double> probabilities;
  std::vector<DenseOperator> unitaries;

  void validate() const;
};

/// Uniform ensemble of all 4^|A| Pauli strings on the given qubits.
Ensemble pauli_ensemble(std::span<const int> region_a);

struct HolevoPoint {
  double t = 0.0;
  double c_chi = 0.0;     ///< bits
  double epsilon = 0.0;   ///< max_k ||sigma_B^k - sigma_B||_1, sigma_B without any operation
  double bound = 0.0;     ///< capacity_bound(epsilon, |B|, 2)
  bool satisfied = true;  ///< c_chi <= bound + 1e-10
};

std::vector<HolevoPoint> holevo_experiment(const HamiltonianSpec& h, const Ensemble& ensemble,
                                           const PureState& psi0, std::span<const int> region_b,
                                           std::span<const double> times, const PropagatorPlan& plan = {});

// ---------------------------------------------------------------- entropy growth

/// c* weighted instantaneous budget: c* sum_k |r_k(t)| w_k over terms crossing
/// the cut, with w_k = cut_weight(term, A) (<= 1 for product couplings).
double instantaneous_rate_budget(const HamiltonianSpec& h, std::span<const int> region_a, double t);

/// Integral of instantaneous_rate_budget over [t0, t1].
double integrated_rate_budget(const HamiltonianSpec& h, std::span<const int> region_a, double t0, double t1);

struct RateEstimate {
  double rate = 0.0;   ///< Richardson-extrapolated central difference, bits per unit time
  double error = 0.0;  ///< |extrapolated - central difference at step/2|
};

/// dS(rho_A)/dt at psi with H frozen at H(t): central differences with steps
/// fd_step and fd_step/2 combined by Richardson extrapolation.
RateEstimate entropy_rate(const HamiltonianSpec& h, const PureState& psi, std::span<const int> region_a, double t,
                          double fd_step, Backend backend = Backend::Auto);

struct EntropyPoint {
  double t = 0.0;
  double entropy = 0.0;
  double rate = 0.0;
  double rate_error = 0.0;
  double rate_bound = 0.0;  ///< instantaneous budget at t
  double budget = 0.0;      ///< integrated budget from the first grid time
  bool rate_checked = false;
  bool within = true;       ///< rate <= rate_bound + rate_slack (or integrated check at the first point)
};

struct EntropyOptions {
  PropagatorPlan plan;
  double rate_slack = 1e-3;
};

/// S(rho_A(t)) along the grid with a rate check at every point except the
/// first, where S(t) - S(t0) <= budget is checked instead.
std::vector<EntropyPoint> entropy_growth(const HamiltonianSpec& h, const PureState& psi0,
                                         std::span<const int> region_a, std::span<const double> times,
                                         const EntropyOptions& options = {});

// ---------------------------------------------------------------- TQO

struct TqoLevel {
  int l = 0;
  double eps_diag = 0.0;     ///< max over regions of ||rho1 - rho2||_1 / 2
  double eps_offdiag = 0.0;  ///< max over regions of ||X_S||_1
  double eps = 0.0;          ///< max of both
  /// Hermitian-restricted off-diagonal value; NaN unless requested.
  double eps_offdiag_hermitian = 0.0;
  std::size_t regions = 0;  ///< maximal regions evaluated
  std::vector<int> worst_region;
};

struct TqoReport {
  std::vector<TqoLevel> levels;
  int region_cap = 0;
  bool truncated = false;  ///< some maximal region exceeded the cap

  const TqoLevel& at(int l) const;
};

struct TqoOptions {
  int region_cap = 10;
  bool hermitian_scan = false;
  int threads = 1;
};

/// Regions at range l are vertex sets of graph diameter <= l - 1, so l = 1 is
/// single sites and l counts sites along a chain. Only maximal regions are
/// evaluated; both trace norms can only shrink under partial trace.
std::vector<std::vector<int>> tqo_regions(const SpinGraph& g, int l, int cap, bool* truncated = nullptr);

TqoReport tqo_accuracy(const PureState& psi1, const PureState& psi2, const SpinGraph& g, std::span<const int> ls,
                       const TqoOptions& options = {});

/// max over theta of ||(e^{i theta} X + e^{-i theta} X^dagger) / 2||_1.
double hermitian_offdiag_value(const Matrix& x);

// ---------------------------------------------------------------- protocols

/// Hamiltonian protocol applied over [0, duration].
struct Protocol {
  std::string name;
  HamiltonianSpec hamiltonian;
  double duration = 0.0;
};

/// Layers of Haar-random two-qubit gates on random matchings of the graph
/// edges; each gate U is run as the pulse K = i log U for one time unit.
Protocol random_two_local_circuit(std::shared_ptr<const SpinGraph> graph, int depth, Rng& rng);

/// Product pair (|0...0>, X on the dual loop of the last row |0...0>).
std::pair<PureState, PureState> toric_product_pair(const ToricLayout& layout);

/// Hadamard and CNOT pulses that map the product pair onto the toric ground
/// pair; depth grows with the number of stars.
Protocol toric_preparation_protocol(std::shared_ptr<const ToricLayout> layout);

/// Chain protocol taking |+...+> to the GHZ state: Hadamard pulses on qubits
/// 1..n-1, then CNOT pulses along the chain. All amplitudes scale with g_scale
/// and all durations with 1 / g_scale.
Protocol ghz_protocol(int n, double g_scale = 1.0);

struct LowerBoundReport {
  int l_f = 0;
  int l_i = 0;
  double duration = 0.0;
  double eps_initial = 0.0;  ///< at l_i = max(1, l_f / 2), before the protocol
  double eps_final = 0.0;    ///< at l_f, after the protocol
  /// tqo_epsilon_propagation(eps_final, l_f, k, duration, d) when constants are given.
  std::optional<double> shape;
  TqoReport initial;
  TqoReport final_report;
};

LowerBoundReport circuit_lower_bound_demo(const PureState& psi1, const PureState& psi2, const Protocol& protocol,
                                          const SpinGraph& region_graph, int l_f, const PropagatorPlan& plan = {},
                                          std::optional<LRConstants> constants = std::nullopt, int dimension = 2,
                                          const TqoOptions& tqo = {});

struct GhzRow {
  int n = 0;
  double crossing_time = 0.0;  ///< NaN when flagged
  bool flagged = false;        ///< threshold not reached within the protocol
};

struct GhzReport {
  double theta_c = 0.0;
  double g_scale = 1.0;
  std::vector<GhzRow> rows;
  std::optional<LineFit> fit;  ///< crossing time vs n over unflagged rows
};

/// |<Z_0 Z_{n-1}>_c| along the GHZ protocol, sampled every sample_dt / g_scale.
GhzReport ghz_protocol_check(std::span<const int> ns, double theta_c, double g_scale = 1.0,
                             double sample_dt = 0.05, const PropagatorPlan& plan = {});

}  // namespace lrlab
