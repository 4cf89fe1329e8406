#include "nelsonlab/cli/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "nelsonlab/parallel.hpp"

namespace nelsonlab::cli {

namespace {

std::string sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

std::string hex(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
  if (!out) throw Error("cannot write " + p.string());
}

}  // namespace

std::string results_csv(const ExperimentResult& r) {
  std::ostringstream o;
  o << "experiment,check,parameters,lhs,rhs,relation,status\n";
  for (const Check& c : r.checks)
    o << r.experiment << ',' << c.name << ',' << c.parameters << ',' << sci(c.lhs) << ',' << sci(c.rhs) << ','
      << relation_symbol(c.relation) << ',' << (c.pass() ? "PASS" : "FAIL") << '\n';
  return o.str();
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  ExperimentConfig c = cfg;
  c.threads = 0;
  c.output.clear();
  return fnv1a(render(c));
}

std::string summary_json(const ExperimentConfig& cfg, const ExperimentResult& r, double wall_clock_seconds) {
  nlohmann::ordered_json j;
  j["experiment"] = r.experiment;
  j["seed"] = cfg.seed;
  j["config_hash"] = hex(config_hash(cfg));
  j["wall_clock_seconds"] = wall_clock_seconds;
  j["threads"] = thread_count();
  j["status"] = r.pass() ? "PASS" : "FAIL";
  auto checks = nlohmann::ordered_json::array();
  for (const Check& c : r.checks) {
    nlohmann::ordered_json e;
    e["check"] = c.name;
    e["parameters"] = c.parameters;
    e["lhs"] = c.lhs;
    e["rhs"] = c.rhs;
    e["relation"] = relation_symbol(c.relation);
    e["status"] = c.pass() ? "PASS" : "FAIL";
    checks.push_back(std::move(e));
  }
  j["checks"] = std::move(checks);
  nlohmann::ordered_json tol = nlohmann::ordered_json::object();
  for (const auto& [k, v] : cfg.tolerances) tol[k] = v;
  j["tolerances"] = std::move(tol);
  return j.dump(2) + "\n";
}

std::string plot_script(const ExperimentResult& r) {
  std::ostringstream o;
  o << "# Measured (lhs) against bound (rhs) for every row of results.csv.\n"
    << "# Usage: gnuplot plot.gp  (writes results.svg)\n"
    << "set datafile separator \",\"\n"
    << "set terminal svg size 1200,700 dynamic\n"
    << "set output \"results.svg\"\n"
    << "set title \"" << r.experiment << "\" noenhanced\n"
    << "set logscale y\n"
    << "set format y \"%.0e\"\n"
    << "set xtics rotate by -60 font \",8\" noenhanced\n"
    << "set key top left\n"
    << "set grid ytics\n"
    << "plot \"results.csv\" skip 1 using 0:(abs($4)):xtic(2) with points pt 7 title \"lhs\", \\\n"
    << "     \"\" skip 1 using 0:(abs($5)) with points pt 6 title \"rhs\"\n";
  return o.str();
}

void write_outputs(const std::filesystem::path& dir, const ExperimentConfig& cfg, const ExperimentResult& r,
                   double wall_clock_seconds) {
  std::filesystem::create_directories(dir);
  write_file(dir / "results.csv", results_csv(r));
  write_file(dir / "summary.json", summary_json(cfg, r, wall_clock_seconds));
  write_file(dir / "plot.gp", plot_script(r));
}

}  // namespace nelsonlab::cli
