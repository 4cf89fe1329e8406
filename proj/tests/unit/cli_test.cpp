#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nelsonlab/cli/app.hpp"
#include "nelsonlab/cli/config.hpp"
#include "nelsonlab/cli/experiments.hpp"
#include "nelsonlab/cli/report.hpp"

using namespace nelsonlab::cli;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "nelsonlab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::path(::testing::TempDir()) / ("nelsonlab_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path write_config(const std::string& name, const std::string& text) {
  const fs::path p = scratch(name) / "test.conf";
  std::ofstream(p) << text;
  return p;
}

template <class E>
E expect_throw(const std::function<void()>& f) {
  try {
    f();
  } catch (const E& e) {
    return e;
  }
  ADD_FAILURE() << "expected exception";
  throw std::logic_error("unreachable");
}

int system_exit_code(const std::string& command) {
  const int status = std::system((command + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Config, DefaultsRoundTripForEveryExperiment) {
  ASSERT_EQ(experiment_names().size(), 8u);
  for (const auto& name : experiment_names()) {
    const ExperimentConfig c = default_config(name);
    const std::string text = render(c);
    EXPECT_EQ(render(parse_config(text, "rt")), text) << name;
    EXPECT_NO_THROW(check_guards(c)) << name;
  }
}

TEST(Config, UnknownKeyNamesKeyAndLine) {
  const auto e = expect_throw<ConfigError>(
      [] { parse_config("experiment = ibc-identity\n# comment\n[model]\nfoo = 1\n", "t.conf"); });
  EXPECT_EQ(e.line(), 4);
  EXPECT_EQ(e.field(), "model.foo");
  EXPECT_NE(std::string(e.what()).find("t.conf:4"), std::string::npos);
  EXPECT_NE(std::string(e.what()).find("model.foo"), std::string::npos);
  const auto top = expect_throw<ConfigError>([] { parse_config("experiment = ibc-identity\nspeed = 3\n", "t"); });
  EXPECT_EQ(top.field(), "speed");
  // Tolerance keys are fixed per experiment.
  const auto tol = expect_throw<ConfigError>(
      [] { parse_config("experiment = ibc-identity\n[tolerances]\nresidual = 1e-7\n", "t"); });
  EXPECT_EQ(tol.field(), "tolerances.residual");
  EXPECT_EQ(tol.line(), 3);
}

TEST(Config, MalformedValuesAndStructure) {
  const auto bad = expect_throw<ConfigError>(
      [] { parse_config("experiment = ibc-identity\n[model]\npoints = eight\n", "t"); });
  EXPECT_EQ(bad.line(), 3);
  EXPECT_EQ(bad.field(), "model.points");
  const auto list = expect_throw<ConfigError>(
      [] { parse_config("experiment = ibc-identity\n[sweep]\nlambdas = 1, two, 4\n", "t"); });
  EXPECT_EQ(list.field(), "sweep.lambdas");
  EXPECT_EQ(expect_throw<ConfigError>([] { parse_config("experiment = ibc-identity\n[modle]\n", "t"); }).line(), 2);
  EXPECT_EQ(expect_throw<ConfigError>([] { parse_config("experiment = ibc-identity\nseed\n", "t"); }).line(), 2);
  EXPECT_EQ(
      expect_throw<ConfigError>([] { parse_config("experiment = ibc-identity\nseed = 1\nseed = 2\n", "t"); }).line(),
      3);
  EXPECT_EQ(expect_throw<ConfigError>([] { parse_config("experiment = nope\n", "t"); }).field(), "experiment");
  EXPECT_THROW(parse_config("seed = 1\n", "t"), ConfigError);
  EXPECT_THROW(parse_config("experiment = ibc-identity\n[model]\nbox = inf\n", "t"), ConfigError);
}

TEST(Config, ValuesOverrideDefaultsAndExperimentOverride) {
  const ExperimentConfig c = parse_config(
      "experiment = ibc-identity ; trailing comment\nseed = 12345678901234\n[model]\nshift = 0.5\n[sweep]\n"
      "lambdas = 1, 2\n[tolerances]\nrelative = 1e-9\n",
      "t");
  EXPECT_EQ(c.seed, 12345678901234ull);
  EXPECT_EQ(c.model.shift, 0.5);
  EXPECT_EQ(c.sweep.lambdas, (std::vector<double>{1.0, 2.0}));
  EXPECT_EQ(c.tolerances.at("relative"), 1e-9);
  EXPECT_EQ(c.tolerances.at("spectrum"), 1e-9);
  EXPECT_EQ(parse_config("[model]\npoints = 16\n", "t", std::string("renorm-convergence")).experiment,
            "renorm-convergence");
}

TEST(Guards, NyquistDenseSizeModesAndDimension) {
  ExperimentConfig c = default_config("ibc-identity");
  c.sweep.lambdas = {1.0, 2.0, 4.5};
  EXPECT_EQ(expect_throw<GuardError>([&] { check_guards(c); }).guard(), "nyquist");
  c.model.nyquist_factor = 1.2;
  EXPECT_NO_THROW(check_guards(c));

  c = default_config("ibc-identity");
  c.model.n_max = 3;
  c.model.modes = 8;
  EXPECT_NO_THROW(check_guards(c));
  c.model.modes = 16;
  c.model.points = 16;
  EXPECT_EQ(expect_throw<GuardError>([&] { check_guards(c); }).guard(), "dense-size");

  c = default_config("renorm-convergence");
  c.model.modes = 17;
  EXPECT_EQ(expect_throw<GuardError>([&] { check_guards(c); }).guard(), "modes");

  c = default_config("gross-transform");
  c.model.d = 3;
  EXPECT_EQ(expect_throw<GuardError>([&] { check_guards(c); }).guard(), "dimension");

  c = default_config("domain-regularity");
  c.sweep.lambdas = {2.0, 4.0, 16.5};
  EXPECT_EQ(expect_throw<GuardError>([&] { check_guards(c); }).guard(), "nyquist");
  c.sweep.lambdas = {2.0, 4.0};
  EXPECT_THROW(check_guards(c), ConfigError);
}

TEST(Guards, InvariantsAreConfigErrors) {
  ExperimentConfig c = default_config("ibc-identity");
  c.model.box = -1.0;
  EXPECT_EQ(expect_throw<ConfigError>([&] { check_guards(c); }).field(), "model.box");
  c = default_config("ibc-identity");
  c.model.amplitude = 1.0;
  EXPECT_THROW(check_guards(c), ConfigError);
  c = default_config("domain-regularity");
  c.sweep.p = {0.0, 1.0};
  EXPECT_EQ(expect_throw<ConfigError>([&] { check_guards(c); }).field(), "sweep.p");
  c = default_config("ibc-identity");
  c.tolerances["relative"] = 0.0;
  EXPECT_THROW(check_guards(c), ConfigError);
}

TEST(Report, HashIsFnv1aAndIgnoresThreadsAndOutput) {
  EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cull);
  ExperimentConfig a = default_config("weyl-identities");
  ExperimentConfig b = a;
  b.threads = 7;
  b.output = "elsewhere";
  EXPECT_EQ(config_hash(a), config_hash(b));
  b.seed = 2;
  EXPECT_NE(config_hash(a), config_hash(b));
}

TEST(Report, CheckRelationsAndCsvShape) {
  EXPECT_TRUE((Check{"c", "", 1.0, 2.0, Relation::le}).pass());
  EXPECT_TRUE((Check{"c", "", 2.0, 2.0, Relation::le}).pass());
  EXPECT_FALSE((Check{"c", "", 2.0, 2.0, Relation::lt}).pass());
  EXPECT_FALSE((Check{"c", "", std::nan(""), 2.0, Relation::le}).pass());
  EXPECT_FALSE((Check{"c", "", 1.0, std::nan(""), Relation::ge}).pass());
  EXPECT_FALSE(ExperimentResult{}.pass());
  ExperimentResult r{"demo", {{"x.y", Params().set("a", 1.5).set("l", std::vector<double>{1, 2}).str(), 0.25, 1.0,
                               Relation::le}}};
  EXPECT_EQ(results_csv(r),
            "experiment,check,parameters,lhs,rhs,relation,status\n"
            "demo,x.y,a=1.5;l=1|2,2.500000000000e-01,1.000000000000e+00,<=,PASS\n");
  EXPECT_NE(plot_script(r).find("results.csv"), std::string::npos);
}

TEST(App, ListHelpAndErrors) {
  const Outcome list = invoke({"--list"});
  EXPECT_EQ(list.code, 0);
  std::istringstream names(list.out);
  std::string line;
  int count = 0;
  while (std::getline(names, line)) EXPECT_EQ(line, experiment_names()[static_cast<std::size_t>(count++)]);
  EXPECT_EQ(count, 8);
  EXPECT_EQ(invoke({"run", "--list"}).code, 0);
  EXPECT_EQ(invoke({"--help"}).code, 0);
  EXPECT_EQ(invoke({"--bogus"}).code, kExitConfig);
  EXPECT_EQ(invoke({"--seed", "x", "--experiment", "ibc-identity"}).code, kExitConfig);
  EXPECT_EQ(invoke({"validate"}).code, kExitConfig);
  EXPECT_EQ(invoke({"validate", "--experiment", "nope"}).code, kExitConfig);
  EXPECT_EQ(invoke({"validate", "--config", "/nonexistent/x.conf"}).code, kExitConfig);
}

TEST(App, ValidatePrintsEffectiveConfigWithFlagOverrides) {
  const fs::path p = write_config("validate", "experiment = ibc-identity\nseed = 3\n");
  const Outcome v = invoke({"validate", "--config", p.string(), "--seed", "9", "--threads", "2"});
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find("seed = 9\n"), std::string::npos);
  EXPECT_NE(v.out.find("threads = 2\n"), std::string::npos);
  EXPECT_EQ(v.out, render(parse_config(v.out, "echo")));
  EXPECT_EQ(invoke({"--validate", "--experiment", "vacuum-energy"}).code, 0);

  const fs::path unknown = write_config("unknown", "experiment = ibc-identity\n[model]\nmodez = 4\n");
  const Outcome u = invoke({"validate", "--config", unknown.string()});
  EXPECT_EQ(u.code, kExitConfig);
  EXPECT_NE(u.err.find("model.modez"), std::string::npos);
  EXPECT_NE(u.err.find(":3:"), std::string::npos);

  const fs::path nyq = write_config("nyquist", "experiment = ibc-identity\n[sweep]\nlambdas = 1, 2, 8\n");
  const Outcome n = invoke({"validate", "--config", nyq.string()});
  EXPECT_EQ(n.code, kExitGuard);
  EXPECT_NE(n.err.find("nyquist"), std::string::npos);
}

TEST(App, RunIsDeterministicForAFixedSeed) {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  ASSERT_EQ(invoke({"run", "--experiment", "weyl-identities", "--seed", "7", "--out", a.string()}).code, 0);
  ASSERT_EQ(invoke({"run", "--experiment", "weyl-identities", "--seed", "7", "--threads", "3", "--out", b.string()})
                .code,
            0);
  const std::string csv = slurp(a / "results.csv");
  EXPECT_FALSE(csv.empty());
  EXPECT_EQ(csv, slurp(b / "results.csv"));
  EXPECT_NE(csv.find("seed=7"), std::string::npos);
  EXPECT_TRUE(fs::exists(a / "summary.json"));
  EXPECT_TRUE(fs::exists(a / "plot.gp"));
}

TEST(App, IbcIdentityPassesOnDefaults) {
  const fs::path dir = scratch("ibc");
  const Outcome r = invoke({"run", "--experiment", "ibc-identity", "--out", dir.string()});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  std::istringstream csv(slurp(dir / "results.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "experiment,check,parameters,lhs,rhs,relation,status");
  int identities = 0;
  while (std::getline(csv, line)) {
    std::vector<std::string> cols;
    std::stringstream ls(line);
    std::string col;
    while (std::getline(ls, col, ',')) cols.push_back(col);
    ASSERT_EQ(cols.size(), 7u) << line;
    EXPECT_EQ(cols[6], "PASS");
    if (cols[1] == "factorization.relative") {
      ++identities;
      EXPECT_LE(std::stod(cols[3]), 1e-10);
      EXPECT_NE(cols[2].find("points=8"), std::string::npos);
    }
  }
  EXPECT_EQ(identities, 3);
  const std::string summary = slurp(dir / "summary.json");
  EXPECT_NE(summary.find("\"status\": \"PASS\""), std::string::npos);
  EXPECT_NE(summary.find("\"config_hash\""), std::string::npos);
}

TEST(Binary, ExitCodes) {
  const std::string bin = NELSONLAB_CLI_PATH;
  const fs::path dir = scratch("binary");
  EXPECT_EQ(system_exit_code(bin + " --list"), 0);
  EXPECT_EQ(system_exit_code(bin + " run --experiment vacuum-energy --out " + dir.string()), 0);
  const fs::path unknown = write_config("binary_unknown", "experiment = ibc-identity\nfoo = 1\n");
  EXPECT_EQ(system_exit_code(bin + " validate --config " + unknown.string()), 2);
  const fs::path nyq = write_config("binary_nyq", "experiment = renorm-convergence\n[sweep]\nlambdas = 1, 2, 4, 16\n");
  EXPECT_EQ(system_exit_code(bin + " run --config " + nyq.string()), 3);
}
