#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "lrlab/config.hpp"
#include "lrlab/errors.hpp"
#include "lrlab/runner.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// exit codes: 0 ok, 1 usage, 2 invalid config, 3 capability, 4 numerical failure, 5 other
int report(const std::exception& e, int code) {
  std::cerr << "error: " << e.what() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lrlab: Lieb-Robinson bound laboratory for small spin lattices"};
  app.require_subcommand(1);
  app.set_version_flag("--version", lrlab::kVersion);

  std::string config_path;
  std::string output_dir;
  int threads = 0;
  bool quiet = false;
  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("config", config_path, "JSON config file")->required();
  run->add_option("-o,--output-dir", output_dir, "Override the output directory (also LRLAB_OUTPUT_DIR)");
  run->add_option("-j,--threads", threads, "Override the worker count (also LRLAB_THREADS)")
      ->check(CLI::Range(1, 256));
  run->add_flag("-q,--quiet", quiet, "Only print errors");

  auto* validate = app.add_subcommand("validate", "Check a config file without running it");
  validate->add_option("config", config_path, "JSON config file")->required();

  std::string formula;
  std::vector<std::string> args;
  auto* calc = app.add_subcommand("calc", "Evaluate a bound formula");
  calc->add_option("formula", formula, "Formula name (calc list shows all)")->required();
  calc->add_option("args", args, "Arguments as key=value");

  CLI11_PARSE(app, argc, argv);
  if (quiet) spdlog::set_level(spdlog::level::err);

  try {
    if (*calc) {
      if (formula == "list") {
        for (const auto& f : lrlab::calc_formulas()) std::cout << f << '\n';
        return 0;
      }
      const lrlab::CalcResult r = lrlab::calc(formula, args);
      std::cout << formula << " = " << lrlab::format_number(r.value) << ' ' << r.unit << '\n';
      if (!r.note.empty()) std::cout << r.note << '\n';
      return 0;
    }
    const lrlab::RunConfig cfg = lrlab::parse_config(read_file(config_path));
    if (*validate) {
      std::cout << config_path << ": ok (" << cfg.experiment << ")\n";
      return 0;
    }
    lrlab::RunOverrides ov = lrlab::overrides_from_env();
    if (!output_dir.empty()) ov.output_dir = output_dir;
    if (threads > 0) ov.threads = threads;
    lrlab::check_capability(cfg);
    spdlog::info("running {} (seed {})", cfg.experiment, cfg.seed);
    const lrlab::RunResult r = lrlab::run(cfg, ov);
    spdlog::info("wrote {} ({:.2f} s)", r.csv.string(), r.wall_seconds);
    if (!quiet) std::cout << r.csv.string() << '\n' << r.svg.string() << '\n' << r.manifest.string() << '\n';
    return 0;
  } catch (const lrlab::ConfigError& e) {
    return report(e, 2);
  } catch (const lrlab::CapabilityError& e) {
    return report(e, 3);
  } catch (const lrlab::ConvergenceError& e) {
    return report(e, 4);
  } catch (const lrlab::DomainError& e) {
    return report(e, *calc ? 1 : 5);
  } catch (const std::exception& e) {
    return report(e, 5);
  }
}
