#include "nelsonlab/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>

#include "nelsonlab/fock.hpp"
#include "nelsonlab/nelson.hpp"

namespace nelsonlab::cli {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Cap for dense L×L operator experiments and for the structured domain route.
constexpr int kMaxDensePoints = 256;
constexpr int kMaxStructuredPoints = 64;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

// Value errors carry only the message; the caller adds line and field.
struct ValueError {
  std::string message;
};

double to_double(const std::string& s) {
  double v = 0.0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size() || !std::isfinite(v))
    throw ValueError{"expected a finite number, got '" + s + "'"};
  return v;
}

template <class T>
T to_integer(const std::string& s) {
  T v{};
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw ValueError{"expected an integer, got '" + s + "'"};
  return v;
}

template <class T, class F>
std::vector<T> to_list(const std::string& s, F conv) {
  std::vector<T> out;
  if (trim(s).empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(conv(trim(item)));
  return out;
}

std::vector<double> to_doubles(const std::string& s) { return to_list<double>(s, to_double); }
std::vector<int> to_ints(const std::string& s) { return to_list<int>(s, to_integer<int>); }

template <class T>
std::string join(const std::vector<T>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    if constexpr (std::is_same_v<T, double>)
      out += fmt(v[i]);
    else
      out += std::to_string(v[i]);
  }
  return out;
}

struct Field {
  std::string key;
  std::function<void(ExperimentConfig&, const std::string&)> parse;
  std::function<std::string(const ExperimentConfig&)> render;
};

#define NL_DOUBLE(sec, name)                                                                  \
  Field {                                                                                     \
    #name, [](ExperimentConfig& c, const std::string& v) { c.sec.name = to_double(v); },     \
        [](const ExperimentConfig& c) { return fmt(c.sec.name); }                            \
  }
#define NL_INT(sec, name)                                                                     \
  Field {                                                                                     \
    #name, [](ExperimentConfig& c, const std::string& v) { c.sec.name = to_integer<int>(v); }, \
        [](const ExperimentConfig& c) { return std::to_string(c.sec.name); }                 \
  }

const std::vector<Field>& model_fields() {
  static const std::vector<Field> f{
      NL_INT(model, d),          NL_INT(model, points),           NL_DOUBLE(model, box),
      NL_DOUBLE(model, amplitude), NL_DOUBLE(model, mass),        NL_INT(model, n_max),
      NL_INT(model, modes),      NL_DOUBLE(model, lambda),        NL_DOUBLE(model, nyquist_factor),
      NL_DOUBLE(model, coupling), NL_DOUBLE(model, mode_energy),  NL_DOUBLE(model, shift),
  };
  return f;
}

const std::vector<Field>& sweep_fields() {
  static const std::vector<Field> f{
      {"lambdas", [](ExperimentConfig& c, const std::string& v) { c.sweep.lambdas = to_doubles(v); },
       [](const ExperimentConfig& c) { return join(c.sweep.lambdas); }},
      {"points", [](ExperimentConfig& c, const std::string& v) { c.sweep.points = to_ints(v); },
       [](const ExperimentConfig& c) { return join(c.sweep.points); }},
      {"n_max", [](ExperimentConfig& c, const std::string& v) { c.sweep.n_max = to_ints(v); },
       [](const ExperimentConfig& c) { return join(c.sweep.n_max); }},
      {"p", [](ExperimentConfig& c, const std::string& v) { c.sweep.p = to_doubles(v); },
       [](const ExperimentConfig& c) { return join(c.sweep.p); }},
      NL_INT(sweep, samples),
      NL_INT(sweep, instances),
      NL_INT(sweep, parametrix_points),
      NL_INT(sweep, parametrix_iterations),
  };
  return f;
}

#undef NL_DOUBLE
#undef NL_INT

const Field* find_field(const std::vector<Field>& fields, const std::string& key) {
  for (const auto& f : fields)
    if (f.key == key) return &f;
  return nullptr;
}

[[noreturn]] void invalid(const std::string& field, const std::string& msg) {
  throw ConfigError("field '" + field + "': " + msg, 0, field);
}

[[noreturn]] void guard(const std::string& name, const std::string& msg) {
  throw GuardError("guard '" + name + "' violated: " + msg, name);
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{
      "weyl-identities", "psido-calculus",    "renorm-convergence",    "gross-transform",
      "ibc-identity",    "domain-regularity", "appendix-inequalities", "vacuum-energy",
  };
  return names;
}

bool known_experiment(const std::string& name) {
  const auto& n = experiment_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

ExperimentConfig default_config(const std::string& experiment) {
  if (!known_experiment(experiment))
    throw ConfigError("unknown experiment '" + experiment + "'", 0, "experiment");
  ExperimentConfig c;
  c.experiment = experiment;
  ModelConfig& m = c.model;
  SweepConfig& s = c.sweep;
  auto& t = c.tolerances;
  m.box = kTwoPi;
  if (experiment == "weyl-identities") {
    m.modes = 1;
    m.n_max = 40;
    m.coupling = 0.3;
    m.mode_energy = 1.3;
    s.n_max = {10, 20, 40};
    s.samples = 20;
    t = {{"residual", 1e-7}, {"commutator", 1e-12}};
  } else if (experiment == "psido-calculus") {
    m.points = 32;
    m.amplitude = 0.3;
    s.samples = 20;
    s.instances = 100;
    s.parametrix_points = 64;
    s.parametrix_iterations = 3;
    t = {{"identity", 1e-10},
         {"lost", 1e-12},
         {"parametrix_reduction", 10.0},
         {"multiplier", 1e-12},
         {"bound_slack", 1e-12}};
  } else if (experiment == "renorm-convergence") {
    m.points = 16;
    s.lambdas = {1.0, 2.0, 4.0, 8.0};
    t = {{"decrease_factor", 1.0}};
  } else if (experiment == "gross-transform") {
    m.coupling = 0.3;
    m.lambda = 2.0;
    s.points = {8, 16};
    t = {{"refinement_drop", 1.5}};
  } else if (experiment == "ibc-identity") {
    s.lambdas = {1.0, 2.0, 4.0};
    t = {{"relative", 1e-10}, {"spectrum", 1e-9}};
  } else if (experiment == "domain-regularity") {
    m.modes = 0;
    s.points = {8, 16, 32};
    s.lambdas = {2.0, 4.0, 8.0};
    s.p = {0.0, 0.2, 0.4, 0.5};
    t = {{"growth_factor", 2.0}, {"bounded_growth", 1.1}};
  } else if (experiment == "appendix-inequalities") {
    m.points = 128;
    s.instances = 1000;
    s.samples = 100000;
    t = {{"resolution_factor", 2.0},
         {"scaling", 0.15},
         {"lemma_slack", 0.1},
         {"corollary_ratio", 0.01}};
  } else if (experiment == "vacuum-energy") {
    m.amplitude = 0.0;
    m.lambda = 4.0;
    s.lambdas = {4.0, 8.0, 16.0, 32.0, 64.0};
    t = {{"r2", 0.99}, {"variation", 0.1}, {"lattice", 1e-12}};
  }
  return c;
}

ExperimentConfig parse_config(const std::string& text, const std::string& source,
                              const std::optional<std::string>& experiment_override) {
  struct Line {
    int number;
    std::string section;
    std::string key;
    std::string value;
  };
  auto where = [&](int line) { return source + ":" + std::to_string(line) + ": "; };
  std::vector<Line> lines;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    const std::string line = trim(raw.substr(0, raw.find_first_of("#;")));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where(number) + "malformed section header", number, line);
      section = trim(line.substr(1, line.size() - 2));
      if (section != "model" && section != "sweep" && section != "tolerances")
        throw ConfigError(where(number) + "unknown section [" + section + "]", number, section);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(where(number) + "expected 'key = value'", number, line);
    lines.push_back({number, section, trim(line.substr(0, eq)), trim(line.substr(eq + 1))});
  }

  std::optional<std::string> named;
  for (const auto& l : lines)
    if (l.section.empty() && l.key == "experiment") {
      if (!known_experiment(l.value))
        throw ConfigError(where(l.number) + "field 'experiment': unknown experiment '" + l.value + "'",
                          l.number, "experiment");
      named = l.value;
    }
  const std::optional<std::string> chosen = experiment_override ? experiment_override : named;
  if (!chosen) throw ConfigError(source + ": no experiment named", 0, "experiment");
  ExperimentConfig c = default_config(*chosen);

  std::set<std::string> seen;
  for (const auto& l : lines) {
    const std::string field = l.section.empty() ? l.key : l.section + "." + l.key;
    if (!seen.insert(field).second)
      throw ConfigError(where(l.number) + "duplicate key '" + field + "'", l.number, field);
    try {
      if (l.section.empty()) {
        if (l.key == "experiment") {
        } else if (l.key == "seed") {
          c.seed = to_integer<std::uint64_t>(l.value);
        } else if (l.key == "threads") {
          c.threads = to_integer<unsigned>(l.value);
        } else if (l.key == "output") {
          c.output = l.value;
        } else {
          throw ConfigError(where(l.number) + "unknown key '" + field + "'", l.number, field);
        }
      } else if (l.section == "tolerances") {
        auto it = c.tolerances.find(l.key);
        if (it == c.tolerances.end())
          throw ConfigError(where(l.number) + "unknown key '" + field + "' for experiment " + c.experiment,
                            l.number, field);
        it->second = to_double(l.value);
      } else {
        const Field* f = find_field(l.section == "model" ? model_fields() : sweep_fields(), l.key);
        if (!f) throw ConfigError(where(l.number) + "unknown key '" + field + "'", l.number, field);
        f->parse(c, l.value);
      }
    } catch (const ValueError& e) {
      throw ConfigError(where(l.number) + "field '" + field + "': " + e.message, l.number, field);
    }
  }
  return c;
}

ExperimentConfig load_config(const std::string& path, const std::optional<std::string>& experiment_override) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot read config", 0, "config");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path, experiment_override);
}

void check_guards(const ExperimentConfig& c) {
  const ModelConfig& m = c.model;
  const SweepConfig& s = c.sweep;
  const std::string& e = c.experiment;

  // Invariants first (exit 2), then guard ranges (exit 3).
  if (m.points < 2) invalid("model.points", "must be at least 2");
  if (!(m.box > 0.0)) invalid("model.box", "must be positive");
  if (!(m.mass > 0.0)) invalid("model.mass", "must be positive");
  if (m.n_max < 1) invalid("model.n_max", "must be at least 1");
  if (m.modes < 0) invalid("model.modes", "must be nonnegative");
  if (!(std::abs(m.amplitude) < 1.0)) invalid("model.amplitude", "|amplitude| < 1 keeps the metric elliptic");
  if (!(m.nyquist_factor > 0.0)) invalid("model.nyquist_factor", "must be positive");
  if (!(m.mode_energy > 0.0)) invalid("model.mode_energy", "must be positive");
  if (m.shift < 0.0) invalid("model.shift", "must be nonnegative");
  if (m.lambda < 0.0) invalid("model.lambda", "must be nonnegative");
  for (double l : s.lambdas)
    if (l < 0.0) invalid("sweep.lambdas", "cutoffs must be nonnegative");
  for (int L : s.points)
    if (L < 2) invalid("sweep.points", "lattice sizes must be at least 2");
  for (int n : s.n_max)
    if (n < 1) invalid("sweep.n_max", "truncations must be at least 1");
  for (double p : s.p)
    if (p < 0.0 || p >= 1.0) invalid("sweep.p", "powers must lie in [0, 1)");
  if (s.samples < 1) invalid("sweep.samples", "must be at least 1");
  if (s.instances < 1) invalid("sweep.instances", "must be at least 1");
  if (s.parametrix_points < 2) invalid("sweep.parametrix_points", "must be at least 2");
  if (s.parametrix_iterations < 0) invalid("sweep.parametrix_iterations", "must be nonnegative");
  for (const auto& [k, v] : c.tolerances)
    if (!(v > 0.0)) invalid("tolerances." + k, "must be positive");

  auto need = [&](bool ok, const std::string& field, const std::string& msg) {
    if (!ok) invalid(field, msg);
  };
  if (e == "weyl-identities") need(!s.n_max.empty(), "sweep.n_max", "needs at least one truncation");
  if (e == "renorm-convergence") need(s.lambdas.size() >= 3, "sweep.lambdas", "needs at least three cutoffs");
  if (e == "ibc-identity") need(!s.lambdas.empty(), "sweep.lambdas", "needs at least one cutoff");
  if (e == "gross-transform") need(s.points.size() >= 2, "sweep.points", "needs at least two lattice sizes");
  if (e == "vacuum-energy") {
    need(s.lambdas.size() >= 3, "sweep.lambdas", "needs at least three cutoffs");
    for (double l : s.lambdas) need(l > 0.0, "sweep.lambdas", "cutoffs must be positive");
  }
  if (e == "domain-regularity") {
    need(s.points.size() >= 2, "sweep.points", "needs at least two lattice sizes");
    need(s.points.size() == s.lambdas.size(), "sweep.lambdas", "must pair one cutoff with each lattice size");
    need(s.p.size() >= 2, "sweep.p", "needs at least two powers");
  }

  if (m.d != 1) guard("dimension", "lattice experiments run in d = 1 (model.d = " + std::to_string(m.d) + ")");

  auto nyquist = [&](int L, double lambda) {
    const double limit = m.nyquist_factor * Grid(1, L, m.box).nyquist();
    if (lambda > limit)
      guard("nyquist", "lambda " + fmt(lambda) + " exceeds " + fmt(m.nyquist_factor) + "*pi*L/box = " +
                           fmt(limit) + " at L = " + std::to_string(L));
  };
  auto modes_fit = [&](int L) {
    if (m.modes > L)
      guard("modes", "model.modes = " + std::to_string(m.modes) + " exceeds the " + std::to_string(L) +
                         " lattice modes");
  };
  auto dense = [&](int L) {
    const int M = m.modes == 0 ? L : m.modes;
    const std::size_t dim = FockBasis::expected_dim(M, m.n_max) * static_cast<std::size_t>(L);
    if (dim > kMaxTensorDim)
      guard("dense-size", "tensor dimension " + std::to_string(dim) + " exceeds " + std::to_string(kMaxTensorDim));
  };

  if (e == "weyl-identities") {
    const int M = std::max(m.modes, 1);
    for (int n : s.n_max)
      if (FockBasis::expected_dim(M, n) > kMaxTensorDim)
        guard("dense-size", "Fock dimension at n_max = " + std::to_string(n) + " exceeds " +
                                std::to_string(kMaxTensorDim));
  } else if (e == "psido-calculus") {
    if (m.points > kMaxDensePoints || s.parametrix_points > kMaxDensePoints)
      guard("dense-size", "symbol lattices are capped at " + std::to_string(kMaxDensePoints) + " points");
  } else if (e == "renorm-convergence" || e == "ibc-identity") {
    modes_fit(m.points);
    dense(m.points);
    for (double l : s.lambdas) nyquist(m.points, l);
  } else if (e == "gross-transform") {
    for (int L : s.points) {
      modes_fit(L);
      dense(L);
      nyquist(L, m.lambda);
    }
  } else if (e == "domain-regularity") {
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      if (s.points[i] > kMaxStructuredPoints)
        guard("structured-size", "lattice sizes are capped at " + std::to_string(kMaxStructuredPoints));
      modes_fit(s.points[i]);
      nyquist(s.points[i], s.lambdas[i]);
    }
  } else if (e == "vacuum-energy") {
    modes_fit(m.points);
    dense(m.points);
    nyquist(m.points, m.lambda);
  } else if (e == "appendix-inequalities") {
    if (m.points > (1 << 16)) guard("dense-size", "Hardy-Littlewood lattices are capped at 65536 points");
  }
}

std::string render(const ExperimentConfig& c) {
  std::ostringstream o;
  auto line = [&](const std::string& key, const std::string& value) {
    o << key << " =" << (value.empty() ? "" : " ") << value << "\n";
  };
  line("experiment", c.experiment);
  line("seed", std::to_string(c.seed));
  line("threads", std::to_string(c.threads));
  line("output", c.output);
  o << "\n[model]\n";
  for (const auto& f : model_fields()) line(f.key, f.render(c));
  o << "\n[sweep]\n";
  for (const auto& f : sweep_fields()) line(f.key, f.render(c));
  o << "\n[tolerances]\n";
  for (const auto& [k, v] : c.tolerances) line(k, fmt(v));
  return o.str();
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace nelsonlab::cli
