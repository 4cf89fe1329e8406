#include "nelsonlab/inequalities.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "nelsonlab/errors.hpp"
#include "nelsonlab/nelson.hpp"

using namespace nelsonlab;

namespace {

constexpr double kPi = std::numbers::pi;

// Composite Simpson on [a, b] with n (even) panels.
template <class F>
double simpson(F f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

LatticeFunction random_nonnegative(const Grid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vec v(static_cast<Eigen::Index>(g.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = u(rng) < 0.3 ? 0.0 : u(rng);
  return LatticeFunction(g, v);
}

double centered_distance(const Grid& g, std::size_t i) {
  return std::abs(g.centered(g.coords(i)[0]) * g.spacing());
}

}  // namespace

TEST(RadialProfile, RejectsBadShells) {
  EXPECT_THROW(RadialProfile(1, {1.0, 1.0}, {1.0, 0.5}), DomainError);
  EXPECT_THROW(RadialProfile(1, {1.0, 2.0}, {1.0, -0.5}), DomainError);
  EXPECT_THROW(RadialProfile(3, {1.0}, {1.0, 2.0}), DimensionError);
}

TEST(RadialProfile, ShellVolumesAndEvaluation) {
  const RadialProfile p(3, {1.0, 2.0}, {3.0, 1.0});
  EXPECT_NEAR(p.shell_volume(0), 4.0 * kPi / 3.0, 1e-14);
  EXPECT_NEAR(p.shell_volume(1), 4.0 * kPi / 3.0 * 7.0, 1e-13);
  EXPECT_EQ(p(0.5), 3.0);
  EXPECT_EQ(p(1.0), 3.0);
  EXPECT_EQ(p(1.5), 1.0);
  EXPECT_EQ(p(2.5), 0.0);
  EXPECT_NEAR(p.level_set_measure(2.0), 4.0 * kPi / 3.0, 1e-14);
  EXPECT_NEAR(unit_ball_volume(1), 2.0, 1e-15);
}

TEST(Rearrange, NonIncreasingProfileIsFixed) {
  const RadialProfile p(3, {0.5, 1.0, 2.0, 4.0}, {4.0, 4.0, 1.0, 0.0});
  const RadialProfile q = rearrange(p);
  EXPECT_EQ(q.radii(), p.radii());
  EXPECT_EQ(q.values(), p.values());
}

TEST(Rearrange, ProfileShellsKeepTheirVolumes) {
  const RadialProfile p(3, {1.0, 2.0, 3.0}, {0.0, 2.0, 1.0});
  const RadialProfile q = rearrange(p);
  EXPECT_TRUE(q.non_increasing());
  EXPECT_EQ(q.values(), (std::vector<double>{2.0, 1.0, 0.0}));
  EXPECT_NEAR(q.shell_volume(0), p.shell_volume(1), 1e-12);
  EXPECT_NEAR(q.shell_volume(1), p.shell_volume(2), 1e-12);
  EXPECT_NEAR(q.radii().back(), 3.0, 1e-14);
}

TEST(Rearrange, EquimeasurableAndIdempotent) {
  std::mt19937_64 rng(11);
  for (int d : {1, 3}) {
    const Grid g(d, d == 1 ? 128 : 8, 2.0 * kPi);
    const LatticeFunction f = random_nonnegative(g, rng);
    const RadialProfile s = rearrange(f);
    EXPECT_TRUE(s.non_increasing());

    std::vector<double> raw(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) raw[i] = f.values(static_cast<Eigen::Index>(i)).real();
    std::vector<double> sorted = s.values();
    std::sort(raw.begin(), raw.end());
    std::sort(sorted.begin(), sorted.end());
    EXPECT_EQ(raw, sorted);

    for (double t : {0.0, 0.1, 0.25, 0.5, 0.9}) {
      const double count = static_cast<double>(std::count_if(raw.begin(), raw.end(), [&](double v) { return v > t; }));
      EXPECT_NEAR(s.level_set_measure(t), count * g.cell_volume(), 1e-12 * g.size() * g.cell_volume());
    }

    const RadialProfile twice = rearrange(s);
    EXPECT_EQ(twice.radii(), s.radii());
    EXPECT_EQ(twice.values(), s.values());
  }
}

TEST(Rearrange, OrderPreserving) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Grid g(1, 128, 2.0 * kPi);
  for (int trial = 0; trial < 20; ++trial) {
    const LatticeFunction f = random_nonnegative(g, rng);
    Vec gv = f.values;
    for (Eigen::Index i = 0; i < gv.size(); ++i) gv(i) += u(rng) < 0.5 ? 0.0 : u(rng);
    const RadialProfile fs = rearrange(f);
    const RadialProfile gs = rearrange(LatticeFunction(g, gv));
    ASSERT_EQ(fs.radii(), gs.radii());
    for (std::size_t k = 0; k < fs.size(); ++k) EXPECT_LE(fs.values()[k], gs.values()[k]);
  }
}

TEST(Rearrange, RejectsNegativeAndComplexInput) {
  const Grid g(1, 8, 2.0 * kPi);
  Vec v = Vec::Ones(8);
  v(3) = -1e-3;
  EXPECT_THROW(rearrange(LatticeFunction(g, v)), DomainError);
  v(3) = cplx(1.0, 0.5);
  EXPECT_THROW(rearrange(LatticeFunction(g, v)), DomainError);
}

TEST(Rearrange, TranslatedSymmetricDecreasingReturnsToOrigin) {
  const Grid g(1, 128, 16.0);
  const LatticeFunction bump = LatticeFunction::from(g, [&](const Point& x) {
    const double r = x[0] >= 8.0 ? 16.0 - x[0] : x[0];
    return cplx(std::exp(-r * r), 0.0);
  });
  const LatticeFunction shifted = translate(bump, 37);
  const RadialProfile a = rearrange(bump);
  const RadialProfile b = rearrange(shifted);
  EXPECT_EQ(a.values(), b.values());
  const LatticeFunction back = b.sample(g);
  for (std::size_t i = 0; i < g.size(); ++i)
    EXPECT_EQ(back.values(static_cast<Eigen::Index>(i)), bump.values(static_cast<Eigen::Index>(i)))
        << "at distance " << centered_distance(g, i);
}

TEST(Rearrange, PowerLawMatchesClosedForm) {
  const RearrangementExample d1 = power_law_rearrangement(1, 1024, 1.5, 1.0, 32.0);
  EXPECT_GT(d1.shells_checked, 500);
  EXPECT_LE(d1.worst_ratio, 2.0);
  const RearrangementExample d3 = power_law_rearrangement(3, 800, 1.5, 1.0, 20.0);
  EXPECT_GT(d3.shells_checked, 500);
  EXPECT_LE(d3.worst_ratio, 2.0);
  // Finer resolution keeps the error at the grid scale.
  EXPECT_LE(power_law_rearrangement(1, 4096, 1.5, 1.0, 32.0).worst_ratio, 2.0);
  EXPECT_LE(power_law_rearrangement(3, 3200, 1.5, 1.0, 20.0).worst_ratio, 2.0);
}

TEST(IntegrateProduct, MergesShells) {
  const RadialProfile a(1, {1.0, 3.0}, {2.0, 1.0});
  const RadialProfile b(1, {2.0, 4.0}, {5.0, 3.0});
  // Shells (0,1]: 2·5, (1,2]: 1·5, (2,3]: 1·3, each of length 2.
  EXPECT_NEAR(integrate_product(a, b), 2.0 * (10.0 + 5.0 + 3.0), 1e-13);
}

TEST(HardyLittlewood, ConstantAndSquareCasesAreEqualities) {
  std::mt19937_64 rng(13);
  const Grid g(1, 128, 2.0 * kPi);
  const LatticeFunction f = random_nonnegative(g, rng);
  const HardyLittlewood c = hardy_littlewood_check(f, LatticeFunction(g, Vec::Constant(128, 0.7)));
  EXPECT_NEAR(c.lhs, c.rhs, 1e-12 * c.rhs);
  const HardyLittlewood sq = hardy_littlewood_check(f, f);
  EXPECT_NEAR(sq.lhs, sq.rhs, 1e-12 * sq.rhs);
}

TEST(HardyLittlewood, DisjointSupportsStillPairUp) {
  const Grid g(1, 16, 16.0);
  Vec f = Vec::Zero(16);
  Vec h = Vec::Zero(16);
  f(2) = 1.0;
  h(9) = 3.0;
  const HardyLittlewood r = hardy_littlewood_check(LatticeFunction(g, f), LatticeFunction(g, h));
  EXPECT_EQ(r.lhs, 0.0);
  EXPECT_NEAR(r.rhs, 3.0 * g.cell_volume(), 1e-14);
}

TEST(HardyLittlewood, FuzzHasNoViolations) {
  const FuzzReport rep = hardy_littlewood_fuzz(1000, 128, 2024);
  EXPECT_EQ(rep.samples, 1000);
  EXPECT_EQ(rep.violations, 0);
  EXPECT_GE(rep.worst_margin, -1e-12);
}

TEST(HardyLittlewood, RejectsNegativeInput) {
  const Grid g(1, 8, 2.0 * kPi);
  Vec v = Vec::Ones(8);
  v(0) = -1.0;
  EXPECT_THROW(hardy_littlewood_check(LatticeFunction(g, v), LatticeFunction(g, Vec::Ones(8))), DomainError);
}

TEST(Peetre, TrivialCases) {
  const Point x{0.3, -2.0, 5.0};
  for (double t : {-3.0, -0.5, 1.0, 4.0}) EXPECT_NEAR(peetre_margin(x, x, t), std::abs(t) * std::log(2.0), 1e-14);
  EXPECT_EQ(peetre_margin(x, {1.0, 1.0, 1.0}, 0.0), 0.0);
}

TEST(Peetre, MarginMatchesDirectPowers) {
  const Point x{1.0, 2.0, -0.5};
  const Point y{-0.7, 0.4, 3.0};
  auto jap = [](const Point& p) { return std::sqrt(1.0 + p[0] * p[0] + p[1] * p[1] + p[2] * p[2]); };
  const Point diff{x[0] - y[0], x[1] - y[1], x[2] - y[2]};
  for (double t : {-2.5, 1.5}) {
    const double rhs = std::pow(2.0, std::abs(t)) * std::pow(jap(y), t) * std::pow(jap(diff), std::abs(t));
    EXPECT_NEAR(peetre_margin(x, y, t), std::log(rhs / std::pow(jap(x), t)), 1e-13);
  }
}

TEST(Peetre, FuzzHasNoViolations) {
  const FuzzReport rep = peetre_check(100000, 3, 4.0, 99);
  EXPECT_EQ(rep.samples, 100000);
  EXPECT_EQ(rep.violations, 0);
  EXPECT_GE(rep.worst_margin, -1e-12);
  EXPECT_EQ(peetre_check(20000, 1, 4.0, 5).violations, 0);
}

TEST(SingularIntegral, GaussianNewtonPotential) {
  auto F = [](double a, double b) { return std::exp(-a * a) / b; };
  for (double X : {0.0, 0.5, 2.0, 5.0}) {
    const double exact = X == 0.0 ? 2.0 * kPi : std::pow(kPi, 1.5) * std::erf(X) / X;
    EXPECT_NEAR(singular_integral(3, F, X, 0.0), exact, 1e-8 * exact) << "X = " << X;
  }
}

TEST(SingularIntegral, CutMatchesShellTheorem) {
  auto F = [](double a, double b) { return std::exp(-a * a) / b; };
  for (double X : {0.5, 2.0}) {
    for (double cut : {0.3, 1.0, 2.5}) {
      // Average of 1/|Ξ−ξ| over the sphere |ξ| = r is 1/max(r, |Ξ|); Simpson is split
      // at the kink r = |Ξ|.
      auto shell = [&](double r) { return r * r * std::exp(-r * r) / std::max(r, X); };
      const double mid = std::max(cut, X);
      const double oracle =
          4.0 * kPi * ((mid > cut ? simpson(shell, cut, mid, 4000) : 0.0) + simpson(shell, mid, 12.0, 24000));
      EXPECT_NEAR(singular_integral(3, F, X, cut), oracle, 1e-9) << X << " " << cut;
    }
  }
}

TEST(SingularIntegral, OneDimensionalInverseSquareRoot) {
  auto F = [](double a, double b) { return std::exp(-a * a) / std::sqrt(b); };
  for (double X : {0.0, 1.3}) {
    // ξ = Ξ ± s² removes the singularity: 2∫ e^{−(Ξ±s²)²} ds.
    const double oracle = 2.0 * simpson([&](double s) {
      return std::exp(-std::pow(X + s * s, 2)) + std::exp(-std::pow(X - s * s, 2));
    }, 0.0, 4.0, 8000);
    EXPECT_NEAR(singular_integral(1, F, X, 0.0), oracle, 1e-9);
  }
}

TEST(IntegralEstimate, ScalingExampleIsExact) {
  IntegralEstimateParams p;
  p.nu = 0.0;
  p.sigma = 0.0;
  p.alpha = 4.0;
  p.gamma = 1.0;
  p.d = 3;
  for (double omega : {1.0, 2.0, 4.0, 8.0}) {
    p.omega = omega;
    const IntegralEstimateReport r = integral_estimate_check(p);
    // 4π ∫ r² (2r + Ω)^{−4} dr = π / (6Ω).
    EXPECT_NEAR(r.integral, kPi / (6.0 * omega), 1e-10);
    EXPECT_NEAR(r.constant, 4.0 * kPi / 3.0, 1e-10);
    EXPECT_NEAR(r.scaling_exponent, -1.0, 1e-15);
    EXPECT_NEAR(r.measured_exponent, -1.0, 1e-8);
    EXPECT_NEAR(r.scaling_ratio, 1.0, 0.15);
    EXPECT_LE(r.integral, r.bound);
  }
}

TEST(IntegralEstimate, BoundHoldsAcrossParameters) {
  struct Case {
    double nu, sigma, alpha, gamma;
    int d;
    double xi;
  };
  for (const Case& c : {Case{1.0, 0.5, 2.0, 2.0, 3, 2.0}, Case{0.0, 1.0, 1.5, 2.0, 3, 1.0},
                        Case{2.0, 0.0, 1.0, 2.0, 3, 3.0}, Case{0.3, 0.2, 1.0, 2.0, 1, 1.5}}) {
    for (double lambda : {0.0, 1.0, 4.0}) {
      for (double omega : {0.5, 4.0, 32.0}) {
        IntegralEstimateParams p;
        p.nu = c.nu;
        p.sigma = c.sigma;
        p.alpha = c.alpha;
        p.gamma = c.gamma;
        p.d = c.d;
        p.xi = c.xi;
        p.lambda = lambda;
        p.omega = omega;
        const IntegralEstimateReport r = integral_estimate_check(p);
        EXPECT_GT(r.integral, 0.0);
        EXPECT_LE(r.integral, r.bound) << c.nu << " " << c.sigma << " Λ " << lambda << " Ω " << omega;
      }
    }
  }
}

TEST(IntegralEstimate, AsymptoticScalingAwayFromTheOrigin) {
  IntegralEstimateParams p;
  p.nu = 1.0;
  p.sigma = 0.5;
  p.alpha = 2.0;
  p.gamma = 2.0;
  p.d = 3;
  p.xi = 2.0;
  p.omega = 64.0;
  EXPECT_NEAR(integral_estimate_check(p).scaling_ratio, 1.0, 0.15);
  IntegralEstimateParams q;
  q.nu = 0.3;
  q.sigma = 0.2;
  q.alpha = 1.0;
  q.gamma = 2.0;
  q.d = 1;
  q.xi = 1.5;
  q.omega = 16.0;
  EXPECT_NEAR(integral_estimate_check(q).scaling_ratio, 1.0, 0.15);
}

TEST(IntegralEstimate, CutoffSuppresses) {
  IntegralEstimateParams p;
  p.nu = 1.0;
  p.sigma = 0.5;
  p.alpha = 2.0;
  p.gamma = 2.0;
  p.xi = 2.0;
  p.omega = 3.0;
  const double base = integral_estimate_check(p).integral;
  double prev = base;
  for (double lambda : {0.5, 1.0, 2.0, 4.0, 8.0}) {
    p.lambda = lambda;
    const double v = integral_estimate_check(p).integral;
    EXPECT_LE(v, prev);
    prev = v;
  }
}

TEST(IntegralEstimate, RejectsExponentWindow) {
  IntegralEstimateParams p;
  p.nu = 2.0;
  p.sigma = 1.0;
  EXPECT_THROW(integral_estimate_check(p), PreconditionError);
  p.nu = 0.0;
  p.sigma = 0.0;
  p.alpha = 0.5;
  p.gamma = 1.0;
  EXPECT_THROW(integral_estimate_check(p), PreconditionError);
  p.alpha = 4.0;
  p.omega = 0.0;
  EXPECT_THROW(integral_estimate_check(p), PreconditionError);
}

TEST(IntegralEstimate, CorollaryPrefactorDecreases) {
  IntegralEstimateParams p;
  p.nu = 1.0;
  p.sigma = 0.5;
  p.alpha = 2.0;
  p.gamma = 2.0;
  p.xi = 2.0;
  p.omega = 4.0;
  const std::vector<double> f = corollary_prefactors(p, {1.0, 4.0, 16.0, 64.0});
  for (std::size_t i = 1; i < f.size(); ++i) EXPECT_LT(f[i], f[i - 1]);
  EXPECT_LT(f.back(), 0.01 * f.front());
  // ζ₀ ≡ 1 reproduces the sharp Λ = 0 integral.
  p.lambda = 0.0;
  EXPECT_NEAR(smooth_cutoff_integral(p), integral_estimate_check(p).integral, 1e-9);
}

TEST(LinearFit, RecoversALine) {
  const LinearFit f = linear_fit({1.0, 2.0, 4.0}, {1.0, -1.0, -5.0});
  EXPECT_NEAR(f.slope, -2.0, 1e-14);
  EXPECT_NEAR(f.intercept, 3.0, 1e-14);
  EXPECT_NEAR(f.r2, 1.0, 1e-14);
  EXPECT_THROW(linear_fit({1.0}, {2.0}), PreconditionError);
}

TEST(LemmaEstimate, IntegralMatchesAngularOracle) {
  const double nu = 2.0;
  const double X = 8.0;
  // Angular average of 1/(|Ξ−ξ|²+1) over |ξ| = r is ln((A+B)/(A−B))/(2B).
  auto radial = [&](double u) {
    const double r = std::exp(u);
    const double A = X * X + r * r + 1.0;
    const double B = 2.0 * X * r;
    return 4.0 * kPi * std::pow(r, 3.0 - nu) * std::log((A + B) / (A - B)) / (2.0 * B);
  };
  const double oracle = simpson(radial, -30.0, 25.0, 200000);
  const LemmaTable t = lemma_estimate_check(nu, {X, 16.0}, 0.0);
  EXPECT_NEAR(t.rows[0].integral, oracle, 1e-7 * oracle);
}

TEST(LemmaEstimate, SlopeAndPrefactor) {
  const std::vector<double> xis{4.0, 8.0, 16.0, 32.0, 64.0};
  const LemmaTable t0 = lemma_estimate_check(2.0, xis, 0.0);
  for (const LemmaRow& r : t0.rows) EXPECT_TRUE(std::isfinite(r.integral) && r.integral > 0.0);
  EXPECT_LE(t0.fit.slope, -0.9);
  EXPECT_TRUE(t0.pass);
  const LemmaTable t1 = lemma_estimate_check(2.0, xis, 1.0);
  EXPECT_TRUE(t1.pass);
  const LemmaTable t4 = lemma_estimate_check(2.0, xis, 4.0);
  EXPECT_LT(t1.prefactor, t0.prefactor);
  EXPECT_LT(t4.prefactor, t1.prefactor);
  EXPECT_THROW(lemma_estimate_check(3.0, xis, 0.0), PreconditionError);
  EXPECT_THROW(lemma_estimate_check(1.0, xis, 0.0), PreconditionError);
}

TEST(LemmaEstimate, ToleranceHalvingIsStable) {
  const double tol = 1e-6;
  const double a = lemma_estimate_check(2.0, {8.0, 16.0}, 1.0, 0.05, 0.1, tol).rows[0].integral;
  const double b = lemma_estimate_check(2.0, {8.0, 16.0}, 1.0, 0.05, 0.1, tol / 2).rows[0].integral;
  EXPECT_LT(std::abs(a - b), tol * std::abs(a));
}

TEST(DiagonalDemo, UnsubtractedGrowsLogarithmicallySubtractedSettles) {
  const std::vector<double> lambdas{4.0, 8.0, 16.0, 32.0, 64.0};
  const DiagonalTable t = diagonal_divergence_demo(1.0, 1.0, 1.0, 0.0, lambdas);
  EXPECT_GE(t.log_fit.r2, 0.99);
  EXPECT_LT(t.log_fit.slope, 0.0);
  EXPECT_LT(t.subtracted_variation, 0.10);
  const double s16 = t.rows[2].subtracted;
  const double s64 = t.rows[4].subtracted;
  EXPECT_LT(std::abs(s64 - s16), 0.10 * std::abs(s16));
  for (const DiagonalRow& r : t.rows) {
    // Subtraction only adds E_Λ, computed by the separate symbol evaluator.
    EXPECT_NEAR(r.subtracted, r.unsubtracted + r.vacuum_energy, 1e-9);
    EXPECT_NEAR(r.vacuum_energy, vacuum_energy_symbol(3, 1.0, 1.0, r.lambda), 1e-12);
  }
}

TEST(DiagonalDemo, TrivialKernelCancels) {
  const DiagonalTable t = diagonal_divergence_demo(1.0, 1.0, 0.0, 0.0, {4.0, 64.0});
  for (const DiagonalRow& r : t.rows) {
    EXPECT_EQ(r.subtracted, 0.0);
    EXPECT_NEAR(r.unsubtracted, -r.vacuum_energy, 1e-9 * r.vacuum_energy);
  }
}

TEST(DiagonalDemo, ToleranceHalvingIsStable) {
  const double tol = 1e-6;
  const DiagonalTable a = diagonal_divergence_demo(1.0, 1.0, 1.0, 0.0, {8.0, 32.0}, tol);
  const DiagonalTable b = diagonal_divergence_demo(1.0, 1.0, 1.0, 0.0, {8.0, 32.0}, tol / 2);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_LT(std::abs(a.rows[i].unsubtracted - b.rows[i].unsubtracted), tol * std::abs(a.rows[i].unsubtracted));
    EXPECT_LT(std::abs(a.rows[i].subtracted - b.rows[i].subtracted), tol * std::abs(a.rows[i].unsubtracted));
  }
}
