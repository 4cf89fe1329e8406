#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nelsonlab/cli/config.hpp"

namespace nelsonlab::cli {

// Ordered k=v list rendered as "k=v;k=v". Values never contain ',' so the
// string can sit in a CSV field unquoted.
class Params {
 public:
  Params& set(const std::string& key, double value);
  Params& set(const std::string& key, int value) { return set(key, static_cast<double>(value)); }
  Params& set(const std::string& key, const std::string& value);
  Params& set(const std::string& key, const std::vector<double>& values);
  std::string str() const;

 private:
  std::vector<std::pair<std::string, std::string>> items_;
};

enum class Relation { le, lt, ge, gt };
const char* relation_symbol(Relation r);

// One measurement: lhs relation rhs. NaN on either side fails.
struct Check {
  std::string name;
  std::string parameters;
  double lhs;
  double rhs;
  Relation relation;

  bool pass() const;
};

struct ExperimentResult {
  std::string experiment;
  std::vector<Check> checks;

  bool pass() const;
};

// Runs one experiment; results are ordered by parameter, independent of the
// thread count. Library errors propagate.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

}  // namespace nelsonlab::cli
