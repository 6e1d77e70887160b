#include "lrlab/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include <openssl/evp.h>
#include <unistd.h>
#include <spdlog/spdlog.h>

#include "lrlab/bounds.hpp"
#include "lrlab/errors.hpp"
#include "lrlab/experiments.hpp"

namespace lrlab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int parse_threads(const std::string& s) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || v < 1 || v > 256) throw DomainError("thread count must be an integer in 1..256: '" + s + "'");
  return v;
}

PropagatorPlan make_plan(const PlanConfig& pc) {
  PropagatorPlan p;
  p.dt = pc.dt;
  p.tolerance = pc.tolerance;
  p.method = pc.method == "trotter1"   ? StepMethod::Trotter1
             : pc.method == "trotter2" ? StepMethod::Trotter2
                                       : StepMethod::ExactStep;
  return p;
}

std::vector<int> ints(const json& params, const char* key, std::vector<int> fallback) {
  if (!params.contains(key)) return fallback;
  return params.at(key).get<std::vector<int>>();
}

int experiment_limit(const std::string& e) {
  if (e == "lightcone") return 14;
  if (e == "truncation") return 10;
  if (e == "tqo") return ToricCode::kMaxQubits;
  if (e == "circuit_lower_bound") return kDenseQubitLimit;
  if (e == "ghz") return kDenseQubitLimit;
  return kMatrixFreeQubitLimit;
}

PureState named_state(const std::string& name, int n, std::uint64_t seed) {
  if (name == "plus") return PureState::all_plus(n);
  if (name == "ghz") return PureState::ghz(n);
  if (name == "random-product") {
    Rng rng(seed);
    return random_product_state(n, rng);
  }
  return PureState::basis(n, 0);
}

/// sqrt(x*)|00> - i sqrt(1-x*)|11> on (a, b), |0> elsewhere.
PureState schmidt_optimal_state(int n, int a, int b) {
  const double x = cstar().x_star;
  Vector v = Vector::Zero(dim_of(n));
  const std::uint64_t both = (std::uint64_t{1} << (n - 1 - a)) | (std::uint64_t{1} << (n - 1 - b));
  v(0) = std::sqrt(x);
  v(static_cast<Index>(both)) = cplx(0.0, -std::sqrt(1.0 - x));
  return PureState::normalized(n, std::move(v));
}

ExperimentOutput run_lightcone(const RunConfig& c, int threads) {
  const HamiltonianSpec h = build_model(c);
  ScanGrid grid{c.grid.L, c.grid.t};
  LightconeOptions opts;
  opts.plan = make_plan(c.plan);
  opts.threads = threads;
  const std::string path = c.params.value("path", "auto");
  opts.path = path == "dense" ? LightconePath::Dense
              : path == "matrix-free" ? LightconePath::MatrixFree
                                      : LightconePath::Auto;
  opts.power.seed = c.seed + 1;
  const LightconeTable t = lightcone_scan(h, site_operator(pauli::from_name(c.observables.a), c.observables.site_a),
                                          pauli::from_name(c.observables.b), grid, opts);
  ResultTable table("lightcone", {"L", "t"});
  for (std::size_t i = 0; i < t.L.size(); ++i)
    for (std::size_t j = 0; j < t.t.size(); ++j)
      table.add("commutator_norm", {double(t.L[i]), t.t[j]}, t.value(Index(i), Index(j)), t.error(Index(i), Index(j)));
  if (c.bounds) {
    const LRConstants k(c.bounds->c, c.bounds->v, c.bounds->xi);
    for (int L : t.L)
      for (double tt : t.t) table.add("lr_bound", {double(L), tt}, lr_bound(k, 1, L, tt));
  }
  const double theta = c.params.contains("theta") ? c.params.at("theta").get<double>() : default_threshold(t);
  try {
    const LightconeFit fit = fit_lightcone(t, theta, c.params.value("min_L", 3));
    for (std::size_t i = 0; i < fit.L.size(); ++i) table.add("arrival_time", {double(fit.L[i]), kNaN}, fit.arrival[i]);
    table.add("theta", {kNaN, kNaN}, fit.theta);
    table.add("v_est", {kNaN, kNaN}, fit.v_est);
    table.add("xi_est", {kNaN, fit.fit_time}, fit.xi_est);
    table.add("arrival_fit_r2", {kNaN, kNaN}, fit.arrival_fit.r_squared);
    table.add("decay_fit_r2", {kNaN, fit.fit_time}, fit.decay_fit.r_squared);
    table.add("arrivals_monotone", {kNaN, kNaN}, fit.arrivals_monotone ? 1.0 : 0.0);
  } catch (const DomainError& e) {
    spdlog::warn("light-cone fit skipped: {}", e.what());
    table.add("fit_failed", {kNaN, kNaN}, 1.0);
  }
  PlotSpec plot{"Commutator norm vs distance", "L", "t", {"commutator_norm"}, true, "distance L (edges)",
                "||[O_A(t), O_B]||", 8};
  return {std::move(table), plot};
}

ExperimentOutput run_truncation(const RunConfig& c) {
  const HamiltonianSpec h = build_model(c);
  const DenseOperator oa = site_operator(pauli::from_name(c.observables.a), c.observables.site_a);
  ResultTable table("truncation", {"t", "l"});
  for (double t : c.grid.t) {
    for (const auto& row : truncation_scan(h, oa, t, c.grid.l, make_plan(c.plan))) {
      table.add("truncation_error", {t, double(row.l)}, row.error);
      table.add("outside_size", {t, double(row.l)}, row.outside);
      if (c.bounds)
        table.add("truncation_bound", {t, double(row.l)},
                  truncation_bound(LRConstants(c.bounds->c, c.bounds->v, c.bounds->xi), oa.num_qubits(), row.l, t));
    }
  }
  PlotSpec plot{"Truncation error vs cut radius", "l", "t", {"truncation_error"}, true, "l (edges)",
                "||O_A(t) - O_A^l(t)||", 8};
  return {std::move(table), plot};
}

ExperimentOutput run_correlation(const RunConfig& c) {
  const HamiltonianSpec h = build_model(c);
  const int n = h.num_qubits();
  const int sb = c.observables.site_b.value_or(n - 1);
  const PureState psi = named_state(c.params.value("initial", "plus"), n, c.seed);
  const auto pts = correlation_spread(h, psi, site_operator(pauli::from_name(c.observables.a), c.observables.site_a),
                                      site_operator(pauli::from_name(c.observables.b), sb), c.grid.t,
                                      make_plan(c.plan));
  ResultTable table("correlation", {"t"});
  for (const auto& p : pts) {
    table.add("connected", {p.t}, p.connected);
    table.add("ab", {p.t}, p.ab);
    table.add("a", {p.t}, p.a);
    table.add("b", {p.t}, p.b);
  }
  PlotSpec plot{"Connected correlation", "t", "", {"connected"}, false, "t", "<O_A O_B>_c", 8};
  return {std::move(table), plot};
}

ExperimentOutput run_holevo(const RunConfig& c) {
  const HamiltonianSpec h = build_model(c);
  const int n = h.num_qubits();
  const auto a = ints(c.params, "region_a", {0, 1});
  const auto b = ints(c.params, "region_b", {n - 2, n - 1});
  const PureState psi = named_state(c.params.value("initial", "zero"), n, c.seed);
  const auto pts = holevo_experiment(h, pauli_ensemble(a), psi, b, c.grid.t, make_plan(c.plan));
  ResultTable table("holevo", {"t"});
  for (const auto& p : pts) {
    table.add("c_chi", {p.t}, p.c_chi);
    table.add("epsilon", {p.t}, p.epsilon);
    table.add("capacity_bound", {p.t}, p.bound);
    table.add("satisfied", {p.t}, p.satisfied ? 1.0 : 0.0);
  }
  PlotSpec plot{"Holevo capacity and bound", "t", "", {"c_chi", "capacity_bound"}, false, "t", "bits", 8};
  return {std::move(table), plot};
}

ExperimentOutput run_entropy(const RunConfig& c) {
  const HamiltonianSpec h = build_model(c);
  const int n = h.num_qubits();
  std::vector<int> half;
  for (int q = 0; q < n / 2; ++q) half.push_back(q);
  if (c.model.name == "product") half = {c.observables.site_a};
  const auto a = ints(c.params, "region_a", half);
  const std::string init = c.params.value("initial", "zero");
  const PureState psi = init == "schmidt-optimal"
                            ? schmidt_optimal_state(n, c.observables.site_a, c.observables.site_b.value_or(n - 1))
                            : named_state(init, n, c.seed);
  EntropyOptions opts;
  opts.plan = make_plan(c.plan);
  opts.rate_slack = c.params.value("rate_slack", 1e-3);
  const auto pts = entropy_growth(h, psi, a, c.grid.t, opts);
  ResultTable table("entropy", {"t"});
  for (const auto& p : pts) {
    table.add("entropy", {p.t}, p.entropy);
    if (p.rate_checked) table.add("rate", {p.t}, p.rate, p.rate_error);
    table.add("rate_bound", {p.t}, p.rate_bound);
    table.add("budget", {p.t}, p.budget + pts.front().entropy);
    table.add("within", {p.t}, p.within ? 1.0 : 0.0);
  }
  PlotSpec plot{"Entanglement entropy and budget", "t", "", {"entropy", "budget"}, false, "t", "bits", 8};
  return {std::move(table), plot};
}

std::pair<PureState, PureState> tqo_pair(const RunConfig& c, std::shared_ptr<const SpinGraph>& graph) {
  const std::string pair = c.params.value("pair", "toric");
  if (pair == "toric") {
    const ToricCode code(build_toric_code_layout(c.model.lattice.nx, c.model.lattice.ny));
    graph = std::make_shared<const SpinGraph>(code.layout().qubits);
    return {code.ground_state(0), code.ground_state(1)};
  }
  graph = build_graph(c.model.lattice);
  const int n = graph->size();
  if (pair == "ghz") return {PureState::ghz(n, 1.0), PureState::ghz(n, -1.0)};
  Rng rng(c.seed);
  const PureState psi1 = random_product_state(n, rng);
  // swap the local state of one qubit with its orthogonal complement
  const DensityMatrix rho = partial_trace(psi1, std::vector<int>{c.observables.site_a});
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
  const Vector up = es.eigenvectors().col(1);
  const Vector down = es.eigenvectors().col(0);
  const Matrix flip = down * up.adjoint() + up * down.adjoint();
  return {psi1, PureState::normalized(n, apply_local(psi1, site_operator(flip, c.observables.site_a)))};
}

ExperimentOutput run_tqo(const RunConfig& c, int threads) {
  std::shared_ptr<const SpinGraph> graph;
  const auto [p1, p2] = tqo_pair(c, graph);
  TqoOptions opts;
  opts.region_cap = c.params.value("region_cap", 10);
  opts.hermitian_scan = c.params.value("hermitian_scan", false);
  opts.threads = threads;
  const TqoReport r = tqo_accuracy(p1, p2, *graph, c.grid.l, opts);
  ResultTable table("tqo", {"l"});
  for (const auto& lv : r.levels) {
    const double l = lv.l;
    table.add("eps_diag", {l}, lv.eps_diag);
    table.add("eps_offdiag", {l}, lv.eps_offdiag);
    table.add("eps", {l}, lv.eps);
    if (opts.hermitian_scan) table.add("eps_offdiag_hermitian", {l}, lv.eps_offdiag_hermitian);
    table.add("regions", {l}, double(lv.regions));
  }
  table.add("region_cap", {kNaN}, r.region_cap);
  table.add("cap_truncated", {kNaN}, r.truncated ? 1.0 : 0.0);
  PlotSpec plot{"TQO accuracy vs range", "l", "", {"eps", "eps_diag", "eps_offdiag"}, false, "l", "epsilon", 8};
  return {std::move(table), plot};
}

ExperimentOutput run_circuit_lower_bound(const RunConfig& c) {
  auto layout = std::make_shared<const ToricLayout>(build_toric_code_layout(c.model.lattice.nx, c.model.lattice.ny));
  std::shared_ptr<const SpinGraph> graph(layout, &layout->qubits);
  const auto [p1, p2] = toric_product_pair(*layout);
  const int lf = c.params.value("l_f", 1);
  const int samples = c.params.value("samples", 3);
  std::optional<LRConstants> k;
  if (c.bounds) k = LRConstants(c.bounds->c, c.bounds->v, c.bounds->xi);
  const PropagatorPlan plan = make_plan(c.plan);
  ResultTable table("circuit_lower_bound", {"depth", "sample", "l"});
  for (int depth : ints(c.params, "depths", {1, 2})) {
    for (int s = 0; s < samples; ++s) {
      Rng rng(c.seed + 1000ULL * static_cast<std::uint64_t>(depth) + static_cast<std::uint64_t>(s));
      const Protocol proto = random_two_local_circuit(graph, depth, rng);
      const LowerBoundReport r = circuit_lower_bound_demo(p1, p2, proto, *graph, lf, plan, k);
      table.add("random_eps_initial", {double(depth), double(s), double(r.l_i)}, r.eps_initial);
      table.add("random_eps_final", {double(depth), double(s), double(lf)}, r.eps_final);
      if (r.shape) table.add("random_shape", {double(depth), double(s), double(lf)}, *r.shape);
    }
  }
  const Protocol prep = toric_preparation_protocol(layout);
  const LowerBoundReport r = circuit_lower_bound_demo(p1, p2, prep, *graph, lf, plan, k);
  table.add("preparation_eps_initial", {kNaN, kNaN, double(r.l_i)}, r.eps_initial);
  table.add("preparation_eps_final", {kNaN, kNaN, double(lf)}, r.eps_final);
  table.add("preparation_duration", {kNaN, kNaN, kNaN}, prep.duration);
  if (r.shape) table.add("preparation_shape", {kNaN, kNaN, double(lf)}, *r.shape);
  PlotSpec plot{"TQO accuracy after random circuits", "depth", "", {"random_eps_final"}, false, "circuit depth",
                "epsilon(l_f)", 8};
  return {std::move(table), plot};
}

ExperimentOutput run_ghz(const RunConfig& c) {
  const GhzReport r = ghz_protocol_check(c.grid.n, c.params.value("theta_c", 0.5), c.params.value("g_scale", 1.0),
                                         c.params.value("sample_dt", 0.05), make_plan(c.plan));
  ResultTable table("ghz", {"n"});
  for (const auto& row : r.rows) {
    table.add("crossing_time", {double(row.n)}, row.crossing_time);
    table.add("flagged", {double(row.n)}, row.flagged ? 1.0 : 0.0);
  }
  if (r.fit) {
    table.add("fit_slope", {kNaN}, r.fit->slope);
    table.add("fit_intercept", {kNaN}, r.fit->intercept);
    table.add("fit_r2", {kNaN}, r.fit->r_squared);
  }
  PlotSpec plot{"GHZ preparation time", "n", "", {"crossing_time"}, false, "n", "crossing time", 8};
  return {std::move(table), plot};
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + p.string() + " for writing");
  out << content;
  out.close();
  if (!out) throw std::runtime_error("failed writing " + p.string());
}

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

RunOverrides overrides_from_env() {
  RunOverrides o;
  if (const char* d = std::getenv("LRLAB_OUTPUT_DIR"); d && *d) o.output_dir = d;
  if (const char* t = std::getenv("LRLAB_THREADS"); t && *t) o.threads = parse_threads(t);
  return o;
}

void check_capability(const RunConfig& c) {
  const int limit = experiment_limit(c.experiment);
  if (c.experiment == "ghz") {
    for (int n : c.grid.n)
      if (n > limit) throw CapabilityError("ghz protocol size", "qubits", n, limit);
    return;
  }
  const int n = c.model.lattice.num_qubits();
  if (n > limit) throw CapabilityError(c.experiment + " system size", "qubits", n, limit);
}

std::shared_ptr<const SpinGraph> build_graph(const LatticeConfig& l) {
  if (l.type == "chain") return std::make_shared<const SpinGraph>(build_chain(l.n, l.periodic));
  if (l.type == "torus2d") return std::make_shared<const SpinGraph>(build_torus_2d(l.nx, l.ny));
  return std::make_shared<const SpinGraph>(build_toric_code_layout(l.nx, l.ny).qubits);
}

HamiltonianSpec build_model(const RunConfig& c) {
  const ModelConfig& m = c.model;
  if (m.name == "toric") return ToricCode(build_toric_code_layout(m.lattice.nx, m.lattice.ny)).hamiltonian();
  auto graph = build_graph(m.lattice);
  if (m.name == "heisenberg") return build_heisenberg(graph, m.J);
  if (m.name == "product") {
    const int n = graph->size();
    std::vector<LocalTerm> terms;
    const int sb = c.observables.site_b.value_or(n - 1);
    terms.push_back(build_product_coupling(site_operator(pauli::from_name(c.observables.a), c.observables.site_a),
                                           site_operator(pauli::from_name(c.observables.b), sb),
                                           Schedule::constant(m.J)));
    if (m.h != 0.0)
      for (int q = 0; q < n; ++q)
        terms.emplace_back(site_operator(-m.h * pauli::X(), q), Schedule::constant(1.0), TermKind::Site, "field");
    return HamiltonianSpec(graph, std::move(terms));
  }
  return build_tfim(graph, m.J, m.h);
}

ExperimentOutput compute_experiment(const RunConfig& c, int threads) {
  check_capability(c);
  const std::string& e = c.experiment;
  if (e == "lightcone") return run_lightcone(c, threads);
  if (e == "truncation") return run_truncation(c);
  if (e == "correlation") return run_correlation(c);
  if (e == "holevo") return run_holevo(c);
  if (e == "entropy") return run_entropy(c);
  if (e == "tqo") return run_tqo(c, threads);
  if (e == "circuit_lower_bound") return run_circuit_lower_bound(c);
  if (e == "ghz") return run_ghz(c);
  throw DomainError("unknown experiment '" + e + "'");
}

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

RunResult run(const RunConfig& config, const RunOverrides& overrides) {
  const fs::path dir = overrides.output_dir.value_or(config.output_dir);
  const int threads = overrides.threads.value_or(config.threads);
  const auto start = std::chrono::steady_clock::now();
  const std::string started = utc_now();
  check_capability(config);

  const ExperimentOutput out = compute_experiment(config, threads);
  const std::string csv = out.table.to_csv();
  // plots are rendered from the CSV text, never from simulation state
  const std::string svg = render_svg(ResultTable::from_csv(csv), out.plot);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  RunResult result;
  result.csv = dir / (config.experiment + ".csv");
  result.svg = dir / (config.experiment + ".svg");
  result.manifest = dir / (config.experiment + ".manifest.json");
  result.csv_sha256 = sha256_hex(csv);
  result.wall_seconds = wall;

  json manifest = {
      {"format", "lrlab-manifest v1"},
      {"experiment", config.experiment},
      {"seed", config.seed},
      {"threads", threads},
      {"started_utc", started},
      {"wall_time_seconds", wall},
      {"config", config.document},
      {"files",
       {{"csv", {{"name", result.csv.filename().string()}, {"sha256", result.csv_sha256},
                 {"rows", out.table.rows().size()}}},
        {"svg", {{"name", result.svg.filename().string()}, {"sha256", sha256_hex(svg)}}}}},
      {"versions",
       {{"lrlab", kVersion},
        {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                      std::to_string(EIGEN_MINOR_VERSION)},
        {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                              std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                              std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
        {"spdlog", std::to_string(SPDLOG_VER_MAJOR) + "." + std::to_string(SPDLOG_VER_MINOR) + "." +
                       std::to_string(SPDLOG_VER_PATCH)},
        {"compiler", __VERSION__}}},
  };

  fs::create_directories(dir);
  const std::string tag = ".tmp-" + std::to_string(static_cast<long>(::getpid()));
  const std::vector<std::pair<fs::path, std::string>> files = {
      {result.csv, csv}, {result.svg, svg}, {result.manifest, manifest.dump(2) + "\n"}};
  std::vector<fs::path> temps;
  try {
    for (const auto& [final_path, content] : files) {
      fs::path tmp = final_path;
      tmp += tag;
      temps.push_back(tmp);
      write_file(tmp, content);
    }
    for (std::size_t i = 0; i < files.size(); ++i) fs::rename(temps[i], files[i].first);
  } catch (...) {
    std::error_code ec;
    for (const auto& t : temps) fs::remove(t, ec);
    throw;
  }
  return result;
}

// ---------------------------------------------------------------- calculator

namespace {

struct Formula {
  std::vector<std::string> args;
  std::function<CalcResult(const std::map<std::string, double>&)> eval;
};

const std::map<std::string, Formula>& formulas() {
  static const std::map<std::string, Formula> f = {
      {"lr_bound",
       {{"c", "v", "xi", "n_min", "L", "t"},
        [](const auto& a) {
          return CalcResult{lr_bound({a.at("c"), a.at("v"), a.at("xi")}, int(a.at("n_min")), a.at("L"), a.at("t")),
                            "(dimensionless)", ""};
        }}},
      {"truncation_bound",
       {{"c", "v", "xi", "size_a", "l", "t"},
        [](const auto& a) {
          return CalcResult{
              truncation_bound({a.at("c"), a.at("v"), a.at("xi")}, int(a.at("size_a")), a.at("l"), a.at("t")),
              "(dimensionless)", ""};
        }}},
      {"optimal_cut",
       {{"chi", "xi", "v", "t", "L"},
        [](const auto& a) {
          return CalcResult{optimal_cut(a.at("chi"), a.at("xi"), a.at("v"), a.at("t"), a.at("L")), "edges", ""};
        }}},
      {"correlation_spread_bound",
       {{"c_bar", "chi", "xi", "v", "size_a", "size_b", "L", "t"},
        [](const auto& a) {
          const SpreadLength chi(CorrelationDecay(1.0, a.at("chi")), LRConstants(1.0, a.at("v"), a.at("xi")));
          return CalcResult{correlation_spread_bound(a.at("c_bar"), chi, int(a.at("size_a")), int(a.at("size_b")),
                                                     a.at("L"), a.at("t")),
                            "(dimensionless)", "chi' = " + format_number(chi.value()) + " edges"};
        }}},
      {"fannes_bound",
       {{"delta", "nB", "m"},
        [](const auto& a) {
          const FannesValue v = fannes_bound(a.at("delta"), int(a.at("nB")), int(a.at("m")));
          return CalcResult{v.bits, "bits", v.valid ? "" : "warning: delta > 1/e, outside the validity window"};
        }}},
      {"capacity_bound",
       {{"eps", "nB", "m"},
        [](const auto& a) {
          return CalcResult{capacity_bound(a.at("eps"), int(a.at("nB")), int(a.at("m"))), "bits", ""};
        }}},
      {"cstar",
       {{},
        [](const auto&) {
          const CStar c = cstar();
          return CalcResult{c.value, "bits per unit time", "x* = " + format_number(c.x_star)};
        }}},
      {"entropy_budget",
       {{"g", "P", "t"},
        [](const auto& a) {
          return CalcResult{entropy_budget(a.at("g"), int(a.at("P")), a.at("t")), "bits", ""};
        }}},
      {"entropy_rate_bound", {{"r"}, nullptr}},
      {"tqo_epsilon_propagation",
       {{"eps_f", "l_f", "v", "xi", "t", "d"},
        [](const auto& a) {
          return CalcResult{tqo_epsilon_propagation(a.at("eps_f"), a.at("l_f"), LRConstants(1.0, a.at("v"), a.at("xi")),
                                                    a.at("t"), int(a.at("d"))),
                            "(dimensionless)", "shape only: the O(1) constant is set to 1"};
        }}},
  };
  return f;
}

std::string canonical_key(std::string k) {
  static const std::map<std::string, std::string> aliases = {
      {"ε", "eps"}, {"epsilon", "eps"}, {"χ", "chi"}, {"ξ", "xi"}, {"δ", "delta"}, {"nb", "nB"}, {"p", "P"}};
  const auto it = aliases.find(k);
  return it == aliases.end() ? k : it->second;
}

double parse_value(const std::string& key, const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw DomainError("argument " + key + ": not a number: '" + s + "'");
  return v;
}

}  // namespace

const std::vector<std::string>& calc_formulas() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [k, f] : formulas()) v.push_back(k);
    return v;
  }();
  return names;
}

CalcResult calc(const std::string& formula, const std::vector<std::string>& args) {
  const auto it = formulas().find(formula);
  if (it == formulas().end()) {
    std::string list;
    for (const auto& n : calc_formulas()) list += (list.empty() ? "" : ", ") + n;
    throw DomainError("unknown formula '" + formula + "'; available: " + list);
  }
  const Formula& f = it->second;
  std::string expected;
  for (const auto& a : f.args) expected += " " + a + "=...";
  std::map<std::string, std::string> raw;
  for (const auto& a : args) {
    const auto eq = a.find('=');
    if (eq == std::string::npos || eq == 0) throw DomainError("expected key=value, got '" + a + "'");
    const std::string key = canonical_key(a.substr(0, eq));
    if (std::find(f.args.begin(), f.args.end(), key) == f.args.end())
      throw DomainError("unknown argument '" + key + "' for " + formula + "; expected:" + expected);
    raw[key] = a.substr(eq + 1);
  }
  for (const auto& a : f.args)
    if (!raw.count(a)) throw DomainError("missing argument '" + a + "' for " + formula + "; expected:" + expected);
  if (formula == "entropy_rate_bound") {
    std::vector<double> rs;
    std::stringstream ss(raw.at("r"));
    std::string item;
    while (std::getline(ss, item, ',')) rs.push_back(parse_value("r", item));
    return {entropy_rate_bound(rs), "bits per unit time", ""};
  }
  std::map<std::string, double> values;
  for (const auto& [k, v] : raw) values[k] = parse_value(k, v);
  return f.eval(values);
}

}  // namespace lrlab
