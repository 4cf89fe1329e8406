#include "nelsonlab/grid.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nelsonlab/errors.hpp"
#include "test_util.hpp"

using namespace nelsonlab;
using nelsonlab::test::random_vec;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TEST(Grid, RejectsBadShapes) {
  EXPECT_THROW(Grid(4, 8, 1.0), DimensionError);
  EXPECT_THROW(Grid(1, 12, 1.0), DimensionError);
  EXPECT_THROW(Grid(1, 8, 0.0), DomainError);
}

TEST(Grid, MomentaInNaturalOrder) {
  Grid g(1, 8, kTwoPi);
  EXPECT_DOUBLE_EQ(g.momentum(3)[0], 3.0);
  EXPECT_DOUBLE_EQ(g.momentum(4)[0], -4.0);
  EXPECT_DOUBLE_EQ(g.momentum(7)[0], -1.0);
  EXPECT_DOUBLE_EQ(g.nyquist(), 4.0);
}

TEST(Grid, IndexRoundTrip) {
  Grid g(3, 4, 2.0);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(g.index(g.coords(i)), i);
  EXPECT_EQ(g.translate(g.index({1, 2, 3}), g.index({3, 3, 3})), g.index({0, 1, 2}));
  EXPECT_EQ(g.negate(g.index({1, 0, 3})), g.index({3, 0, 1}));
}

TEST(Grid, SnapTiesTowardMinusInfinity) {
  Grid g(1, 8, 8.0);
  EXPECT_EQ(g.snap({2.5, 0, 0}), 2u);
  EXPECT_EQ(g.snap({2.51, 0, 0}), 3u);
  EXPECT_EQ(g.snap({-0.5, 0, 0}), 7u);
}

TEST(Dft, ConstantMapsToZeroMomentum) {
  Grid g(2, 8, 3.0);
  auto one = LatticeFunction::from(g, [](const Point&) { return cplx(1.0); });
  auto h = dft(one);
  const double expected = std::pow(kTwoPi, -1.0) * 9.0;
  EXPECT_NEAR(std::abs(h.values(0) - expected), 0.0, 1e-12);
  EXPECT_LT(h.values.tail(h.values.size() - 1).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Dft, PlaneWaveMapsToDelta) {
  Grid g(1, 16, 5.0);
  const std::size_t k = 13;
  const double xi = g.momentum(k)[0];
  auto w = LatticeFunction::from(g, [&](const Point& x) { return std::polar(1.0, xi * x[0]); });
  auto h = dft(w);
  for (std::size_t q = 0; q < g.size(); ++q) {
    const double mag = std::abs(h.values(static_cast<Eigen::Index>(q)));
    if (q == k)
      EXPECT_NEAR(mag, std::pow(kTwoPi, -0.5) * 5.0, 1e-12);
    else
      EXPECT_LT(mag, 1e-12);
  }
}

TEST(Dft, UnitaryAndInvertibleOnRandomVectors) {
  std::mt19937_64 rng(11);
  for (int d = 1; d <= 3; ++d) {
    Grid g(d, d == 3 ? 8 : 16, 1.7);
    for (int trial = 0; trial < 100; ++trial) {
      LatticeFunction u(g, random_vec(rng, static_cast<Eigen::Index>(g.size())));
      auto h = dft(u);
      EXPECT_NEAR(h.norm(), u.norm(), 1e-12 * u.norm());
      EXPECT_LT((idft(h).values - u.values).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(Dft, RejectsWrongRepresentation) {
  Grid g(1, 8, 1.0);
  auto u = LatticeFunction::zeros(g, Space::momentum);
  EXPECT_THROW(dft(u), DomainError);
  EXPECT_THROW(LatticeFunction(g, Vec::Zero(7)), DimensionError);
}

TEST(LatticeFunction, InnerProductConjugateSymmetric) {
  std::mt19937_64 rng(3);
  Grid g(2, 8, 2.0);
  LatticeFunction u(g, random_vec(rng, 64)), v(g, random_vec(rng, 64));
  EXPECT_NEAR(std::abs(u.inner(v) - std::conj(v.inner(u))), 0.0, 1e-13);
}

TEST(Sobolev, ZeroAndL2Cases) {
  std::mt19937_64 rng(5);
  Grid g(1, 32, kTwoPi);
  EXPECT_EQ(sobolev_norm(LatticeFunction::zeros(g), 1.5), 0.0);
  LatticeFunction u(g, random_vec(rng, 32));
  EXPECT_NEAR(sobolev_norm(u, 0.0), u.norm(), 1e-12 * u.norm());
}

TEST(Sobolev, TranslationInvariant) {
  std::mt19937_64 rng(6);
  Grid g(2, 8, 3.0);
  LatticeFunction u(g, random_vec(rng, 64));
  for (double s : {-2.0, -0.5, 0.0, 1.0, 2.5}) {
    const double n0 = sobolev_norm(u, s);
    EXPECT_NEAR(sobolev_norm(translate(u, g.index({3, 5, 0})), s), n0, 1e-12 * n0);
  }
}

TEST(Cutoff, MassAndFourierSide) {
  Grid g(1, 64, kTwoPi);
  auto rho = cutoff_function(g, 2.0, 0);
  EXPECT_NEAR(rho.values.sum().real() * g.cell_volume(), 1.0, 1e-8);
  EXPECT_GE(rho.values.real().minCoeff(), 0.0);
  auto h = dft(rho);
  EXPECT_NEAR(h.values(0).real() * std::sqrt(kTwoPi), 1.0, 1e-12);
  const std::size_t X = 9;
  auto hx = dft(cutoff_function(g, 2.0, X));
  const double x = g.position(X)[0];
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double xi = g.momentum(k)[0];
    const cplx expected = std::pow(kTwoPi, -0.5) * profile_hat(xi * xi / 4.0) * std::polar(1.0, -xi * x);
    EXPECT_NEAR(std::abs(hx.values(static_cast<Eigen::Index>(k)) - expected), 0.0, 1e-12);
  }
}

TEST(Cutoff, TranslationCovariant) {
  Grid g(2, 16, 4.0);
  const std::size_t X = g.index({5, 11, 0});
  auto a = cutoff_function(g, 3.0, X);
  auto b = translate(cutoff_function(g, 3.0, 0), X);
  EXPECT_LT((a.values - b.values).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Cutoff, ZeroScaleIsDelta) {
  Grid g(1, 16, 2.0);
  auto a = cutoff_function(g, 0.0, 3);
  EXPECT_LT((a.values - delta_function(g, 3).values).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Cutoff, NyquistGuardNamesScales) {
  Grid g(1, 8, kTwoPi);
  EXPECT_NO_THROW(cutoff_function(g, 4.0, 0));
  try {
    cutoff_function(g, 4.5, 0);
    FAIL() << "expected a resolution error";
  } catch (const ResolutionError& e) {
    EXPECT_NE(std::string(e.what()).find("nyquist"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("4.5"), std::string::npos);
  }
  CutoffOptions strict;
  strict.nyquist_factor = 0.25;
  EXPECT_THROW(cutoff_function(g, 2.0, 0, strict), ResolutionError);
}

TEST(Cutoff, InfraredFactorRemovesLowModes) {
  Grid g(1, 32, kTwoPi);
  CutoffOptions opt;
  opt.sigma = 1.5;
  auto h = dft(cutoff_function(g, 4.0, 0, opt));
  EXPECT_LT(std::abs(h.values(0)), 1e-14);
  EXPECT_LT(std::abs(h.values(1)), 1e-14);
  EXPECT_NEAR(infrared_chi(2.25, 1.5), 0.5, 1e-15);
  EXPECT_EQ(infrared_chi(0.0, 0.0), 1.0);
}

TEST(Cutoff, DistanceToDeltaDecreasesInLambda) {
  Grid g(1, 64, kTwoPi);
  const std::size_t X = 17;
  double prev = 1e300;
  for (double lam : {1.0, 2.0, 4.0, 8.0}) {
    const double d = sobolev_norm(cutoff_function(g, lam, X) - delta_function(g, X), -2.0);
    EXPECT_LT(d, prev);
    prev = d;
  }
}

TEST(Delta, ReproducingAndFlatSpectrum) {
  std::mt19937_64 rng(8);
  Grid g(2, 8, 1.3);
  LatticeFunction u(g, random_vec(rng, 64));
  const std::size_t X = 21;
  EXPECT_NEAR(std::abs(delta_function(g, X).inner(u) - u.values(21)), 0.0, 1e-12);
  auto h = dft(delta_function(g, 0));
  EXPECT_LT(h.values.cwiseAbs().maxCoeff() - h.values.cwiseAbs().minCoeff(), 1e-12);
}

TEST(Delta, NegativeSobolevNormGridIndependent) {
  std::vector<double> vals;
  for (int L : {32, 64, 128}) {
    Grid g(1, L, kTwoPi);
    vals.push_back(sobolev_norm(delta_function(g, 0), -2.0));
  }
  EXPECT_LT(std::abs(vals[1] / vals[0] - 1.0), 0.1);
  EXPECT_LT(std::abs(vals[2] / vals[1] - 1.0), 0.1);
}

TEST(SpectralDerivative, ActsOnPlaneWaves) {
  Grid g(2, 8, kTwoPi);
  const Mat d1 = spectral_derivative(g, 1);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto xi = g.momentum(k);
    auto w = LatticeFunction::from(g, [&](const Point& x) {
      return std::polar(1.0, xi[0] * x[0] + xi[1] * x[1]);
    });
    EXPECT_LT((d1 * w.values - xi[1] * w.values).cwiseAbs().maxCoeff(), 1e-12);
  }
  const Mat dflip = spectral_derivative(Grid(1, 8, kTwoPi), 0, true);
  const Mat d = spectral_derivative(Grid(1, 8, kTwoPi), 0);
  Vec alt(8);
  for (int k = 0; k < 8; ++k) alt(k) = (k % 2 == 0) ? 1.0 : -1.0;
  EXPECT_LT(((dflip - d) * alt - 8.0 * alt).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(hermiticity_defect(d), 1e-13);
}
