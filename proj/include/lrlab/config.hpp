#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace lrlab {

struct LatticeConfig {
  std::string type = "chain";  ///< chain, torus2d, toric
  int n = 8;
  bool periodic = false;
  int nx = 2;
  int ny = 2;

  int num_qubits() const;
};

struct ModelConfig {
  std::string name = "tfim";  ///< tfim, heisenberg, toric, product
  double J = 1.0;
  double h = 1.0;
  LatticeConfig lattice;
};

struct PlanConfig {
  double dt = 0.01;
  double tolerance = 1e-8;
  std::string method = "exact";  ///< exact, trotter1, trotter2
};

struct GridConfig {
  std::vector<int> L;
  std::vector<double> t;
  std::vector<int> l;
  std::vector<int> n;
};

struct ObservablesConfig {
  std::string a = "Z";
  std::string b = "Z";
  int site_a = 0;
  std::optional<int> site_b;
};

struct BoundsConfig {
  double c = 1.0;
  double v = 1.0;
  double xi = 1.0;
};

/// Validated run description. `params` holds the experiment-specific block
/// with defaults filled in; `document` is the parsed input, echoed into the
/// manifest.
struct RunConfig {
  std::string experiment;
  std::uint64_t seed = 0;
  std::string output_dir = "results";
  int threads = 1;
  ModelConfig model;
  PlanConfig plan;
  GridConfig grid;
  ObservablesConfig observables;
  std::optional<BoundsConfig> bounds;
  nlohmann::json params = nlohmann::json::object();
  nlohmann::json document;
};

struct ConfigIssue {
  std::string path;  ///< JSON-pointer-like key path, e.g. /plan/dt
  std::string message;
  int line = 0;      ///< for syntax errors
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues);
  const std::vector<ConfigIssue>& issues() const { return issues_; }

 private:
  std::vector<ConfigIssue> issues_;
};

/// Known experiment names.
const std::vector<std::string>& experiment_names();

/// Parses and validates a JSON config (comments allowed). Throws ConfigError
/// listing every problem found.
RunConfig parse_config(const std::string& text);

}  // namespace lrlab
