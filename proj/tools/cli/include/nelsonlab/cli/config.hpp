#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nelsonlab/errors.hpp"

namespace nelsonlab::cli {

// Malformed config text or flags. Maps to exit code 2.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line, std::string field)
      : Error(what), line_(line), field_(std::move(field)) {}
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

// A resolved value outside a guard range (Nyquist, dense size). Exit code 3.
class GuardError : public Error {
 public:
  GuardError(const std::string& what, std::string guard) : Error(what), guard_(std::move(guard)) {}
  const std::string& guard() const { return guard_; }

 private:
  std::string guard_;
};

const std::vector<std::string>& experiment_names();
bool known_experiment(const std::string& name);

struct ModelConfig {
  int d = 1;
  int points = 8;
  double box = 6.283185307179586;
  double amplitude = 0.3;
  double mass = 1.0;
  int n_max = 2;
  // 0 selects every lattice mode.
  int modes = 8;
  double lambda = 2.0;
  double nyquist_factor = 1.0;
  double coupling = 1.0;
  // Single-mode boson energy for the Fock-level identities.
  double mode_energy = 1.3;
  // Shift added to H₀ before inversion in the IBC operators.
  double shift = 0.0;
};

struct SweepConfig {
  std::vector<double> lambdas;
  std::vector<int> points;
  std::vector<int> n_max;
  std::vector<double> p;
  int samples = 20;
  int instances = 100;
  int parametrix_points = 64;
  int parametrix_iterations = 3;
};

struct ExperimentConfig {
  std::string experiment;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::string output;
  ModelConfig model;
  SweepConfig sweep;
  // Tolerances, thresholds and fit windows by name; the key set is fixed per
  // experiment and unknown keys are rejected.
  std::map<std::string, double> tolerances;
};

// Defaults for one experiment (ConfigError for unknown names).
ExperimentConfig default_config(const std::string& experiment);

// Flat key = value text. Top-level keys (experiment, seed, threads, output)
// precede the [model], [sweep] and [tolerances] sections; '#' and ';' start
// comments; lists are comma separated. `experiment_override` selects the
// defaults when the text names no experiment.
ExperimentConfig parse_config(const std::string& text, const std::string& source,
                              const std::optional<std::string>& experiment_override = std::nullopt);
ExperimentConfig load_config(const std::string& path,
                             const std::optional<std::string>& experiment_override = std::nullopt);

// Dimension caps and the Nyquist guard for every lattice the experiment builds.
void check_guards(const ExperimentConfig& cfg);

// Canonical text of the effective configuration; parse_config(render(c)) == c.
std::string render(const ExperimentConfig& cfg);

// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& bytes);

}  // namespace nelsonlab::cli
