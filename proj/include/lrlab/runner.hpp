#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lrlab/config.hpp"
#include "lrlab/hamiltonian.hpp"
#include "lrlab/plot.hpp"
#include "lrlab/table.hpp"

namespace lrlab {

inline constexpr const char* kVersion = "0.3.0";

/// Command-line or environment overrides (LRLAB_OUTPUT_DIR, LRLAB_THREADS).
struct RunOverrides {
  std::optional<std::string> output_dir;
  std::optional<int> threads;
};

/// Reads LRLAB_OUTPUT_DIR and LRLAB_THREADS; malformed thread counts throw DomainError.
RunOverrides overrides_from_env();

/// Throws CapabilityError if the requested sizes exceed the experiment's code path.
void check_capability(const RunConfig& config);

std::shared_ptr<const SpinGraph> build_graph(const LatticeConfig& lattice);
HamiltonianSpec build_model(const RunConfig& config);

struct ExperimentOutput {
  ResultTable table;
  PlotSpec plot;
};

/// Runs the experiment in memory; touches no files.
ExperimentOutput compute_experiment(const RunConfig& config, int threads);

struct RunResult {
  std::filesystem::path csv;
  std::filesystem::path svg;
  std::filesystem::path manifest;
  std::string csv_sha256;
  double wall_seconds = 0.0;
};

/// Computes, then writes <experiment>.csv, <experiment>.svg and
/// <experiment>.manifest.json into the output directory. Files appear via
/// rename only after all content exists, so a failed run leaves nothing behind.
RunResult run(const RunConfig& config, const RunOverrides& overrides = {});

struct CalcResult {
  double value = 0.0;
  std::string unit;
  std::string note;
};

const std::vector<std::string>& calc_formulas();

/// Evaluates a bound formula from key=value arguments.
CalcResult calc(const std::string& formula, const std::vector<std::string>& args);

std::string sha256_hex(std::string_view data);

}  // namespace lrlab
