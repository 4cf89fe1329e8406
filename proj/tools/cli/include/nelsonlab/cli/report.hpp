#pragma once

#include <filesystem>
#include <string>

#include "nelsonlab/cli/config.hpp"
#include "nelsonlab/cli/experiments.hpp"

namespace nelsonlab::cli {

// Header experiment,check,parameters,lhs,rhs,relation,status; numbers in %.12e.
std::string results_csv(const ExperimentResult& r);

// Hash over the effective config with threads and output cleared.
std::uint64_t config_hash(const ExperimentConfig& cfg);

std::string summary_json(const ExperimentConfig& cfg, const ExperimentResult& r, double wall_clock_seconds);

// gnuplot script over results.csv in the same directory.
std::string plot_script(const ExperimentResult& r);

// Writes results.csv, summary.json and plot.gp into dir (created if missing).
void write_outputs(const std::filesystem::path& dir, const ExperimentConfig& cfg,
                   const ExperimentResult& r, double wall_clock_seconds);

}  // namespace nelsonlab::cli
