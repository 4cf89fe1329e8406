#include "nelsonlab/cli/app.hpp"

#include <chrono>
#include <cstdio>
#include <ostream>

#include "CLI11.hpp"

#include "nelsonlab/cli/config.hpp"
#include "nelsonlab/cli/experiments.hpp"
#include "nelsonlab/cli/report.hpp"
#include "nelsonlab/errors.hpp"
#include "nelsonlab/parallel.hpp"

namespace nelsonlab::cli {

namespace {

struct Flags {
  std::string config;
  std::string experiment;
  std::string out;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  bool list = false;
  bool validate = false;
};

std::string line_for(const Check& c) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6e %s %.6e", c.lhs, relation_symbol(c.relation), c.rhs);
  return std::string(c.pass() ? "PASS " : "FAIL ") + c.name + " [" + c.parameters + "] " + buf;
}

int execute(const Flags& f, const CLI::App& app, bool validate_only, std::ostream& out) {
  if (app.count("--experiment") && !known_experiment(f.experiment))
    throw ConfigError("field 'experiment': unknown experiment '" + f.experiment + "'", 0, "experiment");
  const std::optional<std::string> override =
      app.count("--experiment") ? std::optional<std::string>(f.experiment) : std::nullopt;
  ExperimentConfig cfg;
  if (app.count("--config"))
    cfg = load_config(f.config, override);
  else if (override)
    cfg = default_config(*override);
  else
    throw ConfigError("no experiment selected: pass --experiment NAME or --config PATH", 0, "experiment");
  if (app.count("--seed")) cfg.seed = f.seed;
  if (app.count("--threads")) cfg.threads = f.threads;
  if (app.count("--out")) cfg.output = f.out;
  check_guards(cfg);

  if (validate_only) {
    out << render(cfg);
    return kExitOk;
  }

  set_thread_count(cfg.threads);
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentResult r = run_experiment(cfg);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const std::filesystem::path dir = cfg.output.empty() ? std::filesystem::path("nelsonlab-results") / cfg.experiment
                                                       : std::filesystem::path(cfg.output);
  write_outputs(dir, cfg, r, seconds);
  for (const Check& c : r.checks) out << line_for(c) << "\n";
  int failed = 0;
  for (const Check& c : r.checks) failed += c.pass() ? 0 : 1;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", seconds);
  out << cfg.experiment << ": " << (r.pass() ? "PASS" : "FAIL") << " (" << r.checks.size() - failed << "/"
      << r.checks.size() << " checks, " << buf << " s) -> " << dir.string() << "\n";
  return r.pass() ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Runs named numerical experiments and writes results.csv, summary.json and plot.gp.", "nelsonlab"};
  Flags f;
  app.add_option("--config", f.config, "Experiment config (key = value with [model], [sweep], [tolerances])");
  app.add_option("--experiment", f.experiment, "Experiment name; overrides the config");
  app.add_option("--seed", f.seed, "Random seed");
  app.add_option("--threads", f.threads, "Worker threads (0 = all cores)");
  app.add_option("--out", f.out, "Output directory");
  app.add_flag("--list", f.list, "Print the experiment names and exit");
  app.add_flag("--validate", f.validate, "Check the config and guards, print the effective config, do not run");
  CLI::App* run = app.add_subcommand("run", "Run an experiment (default)");
  CLI::App* validate = app.add_subcommand("validate", "Same as --validate");
  run->fallthrough();
  validate->fallthrough();
  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (f.list) {
    for (const auto& name : experiment_names()) out << name << "\n";
    return kExitOk;
  }
  try {
    return execute(f, app, f.validate || validate->parsed(), out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const GuardError& e) {
    err << e.what() << "\n";
    return kExitGuard;
  } catch (const ResolutionError& e) {
    err << "guard 'nyquist' violated: " << e.what() << "\n";
    return kExitGuard;
  } catch (const SizeError& e) {
    err << "guard 'dense-size' violated: " << e.what() << "\n";
    return kExitGuard;
  } catch (const DimensionError& e) {
    err << "guard 'dimension' violated: " << e.what() << "\n";
    return kExitGuard;
  } catch (const SpecError& e) {
    err << "invalid model: " << e.what() << "\n";
    return kExitConfig;
  } catch (const PreconditionError& e) {
    err << "invalid parameters: " << e.what() << "\n";
    return kExitConfig;
  } catch (const EllipticityError& e) {
    err << "invalid parameters: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
}

}  // namespace nelsonlab::cli
