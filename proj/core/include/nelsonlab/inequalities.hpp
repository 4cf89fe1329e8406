#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "nelsonlab/grid.hpp"

namespace nelsonlab {

// Nonnegative radial step function on ℝ^d: values[i] on the shell
// radii[i-1] < |x| ≤ radii[i] (radii[-1] = 0), zero beyond radii.back().
class RadialProfile {
 public:
  RadialProfile(int d, std::vector<double> radii, std::vector<double> values);

  int dim() const { return d_; }
  const std::vector<double>& radii() const { return radii_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return radii_.size(); }

  double operator()(double r) const;
  // Volume of shell i.
  double shell_volume(std::size_t i) const;
  // |{f > t}|.
  double level_set_measure(double t) const;
  double integral() const;
  bool non_increasing() const;
  // f(|x|) at every lattice point, |x| the periodic distance to the origin.
  LatticeFunction sample(const Grid& g) const;

 private:
  int d_;
  std::vector<double> radii_;
  std::vector<double> values_;
};

double unit_ball_volume(int d);

// Symmetric decreasing rearrangement: values sorted downward against the
// accumulated cell (shell) volumes. A profile that is already non-increasing is
// returned unchanged, so rearrange is idempotent bit for bit.
RadialProfile rearrange(const LatticeFunction& f);
RadialProfile rearrange(const RadialProfile& f);

struct RearrangementExample {
  int shells_checked;
  // max over checked shells of |f*_k − F(r_k)| / (|F'(r_k)| Δ_k), F(r) =
  // (r^d + Λ^d)^{−p/d}, r_k the shell midpoint and Δ_k the local grid resolution.
  double worst_ratio;
};
// Rearranges f_Λ(x) = (1 − χ_Λ(x))|x|^{−p}: d = 1 on a lattice of n points over
// [−extent, extent), d = 3 as a radial profile of n shells on [0, extent].
// Shells whose value lies below extent^{−p} feel the truncation and are skipped.
RearrangementExample power_law_rearrangement(int d, int n, double p, double lambda, double extent);

// ∫ a b for two radial profiles of the same dimension.
double integrate_product(const RadialProfile& a, const RadialProfile& b);

struct HardyLittlewood {
  double lhs;
  double rhs;
};
// ∫ f g and ∫ f* g*.
HardyLittlewood hardy_littlewood_check(const LatticeFunction& f, const LatticeFunction& g);

struct FuzzReport {
  int samples;
  int violations;
  // Smallest rhs − lhs seen (log scale for Peetre).
  double worst_margin;
};
// Random nonnegative pairs on the d = 1 lattice with L points; violation when
// lhs > rhs + 1e-12.
FuzzReport hardy_littlewood_fuzz(int pairs, int L, std::uint64_t seed);

// ln(2^{|t|}⟨y⟩^t⟨x−y⟩^{|t|}) − ln⟨x⟩^t.
double peetre_margin(const Point& x, const Point& y, double t);
// x, y ∈ ℝ^d over many scales, t uniform in [−t_max, t_max].
FuzzReport peetre_check(int samples, int d, double t_max, std::uint64_t seed);

// ∫_{ℝ^d} F(|ξ|, |Ξ − ξ|) dξ over |ξ| > cut for d ∈ {1, 3}. In d = 3 the ball
// |Ξ − ξ| ≤ |Ξ|/2 is integrated in polar coordinates around Ξ and the rest in
// polar coordinates around 0. tol is relative.
double singular_integral(int d, const std::function<double(double, double)>& F, double xi_norm,
                         double cut, double tol = 1e-8);

struct IntegralEstimateParams {
  double nu = 0.0;
  double sigma = 0.0;
  double alpha = 4.0;
  double gamma = 1.0;
  int d = 3;
  double lambda = 0.0;
  double omega = 1.0;
  double xi = 0.0;
  double epsilon = 0.05;
  double tol = 1e-8;
};

struct IntegralEstimateReport {
  double integral;
  double bound;
  // ∫ |η|^{−σ−ν} (|η|^γ + 1)^{−α+ε(Λ)} dη.
  double constant;
  // −α + (d−ν−σ)/γ + ε(Λ).
  double bound_exponent;
  // −α + (d−ν−σ)/γ.
  double scaling_exponent;
  double integral_scaled;
  // ln(I(4Ω)/I(Ω)) / ln 4.
  double measured_exponent;
  // (I(4Ω)/I(Ω)) / 4^{scaling_exponent}.
  double scaling_ratio;
};

// ∫ |ξ|^{−ν}|Ξ−ξ|^{−σ}(1−χ_Λ)(|Ξ−ξ|^γ + |ξ| + Ω)^{−α} dξ against
// C Ω^{bound_exponent} Λ^{−ε(Λ)}. Throws PreconditionError outside the window
// d ∈ (ν+σ, ν+σ+αγ) or when Ω ≤ 0.
IntegralEstimateReport integral_estimate_check(const IntegralEstimateParams& p);
// Same integral with 1−χ_Λ replaced by ζ_Λ = 1 − ρ̂(ξ/Λ) (ζ₀ ≡ 1).
double smooth_cutoff_integral(const IntegralEstimateParams& p);
// f(Λ) = smooth_cutoff_integral / Ω^{bound_exponent} for each Λ.
std::vector<double> corollary_prefactors(IntegralEstimateParams p, const std::vector<double>& lambdas);

struct LinearFit {
  double slope;
  double intercept;
  double r2;
};
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

struct LemmaRow {
  double xi;
  double integral;
};
struct LemmaTable {
  std::vector<LemmaRow> rows;
  LinearFit fit;
  // max over the sweep of integral · |Ξ|^{ν−1−ε}.
  double prefactor;
  double slope_bound;
  bool pass;
};
// ∫_{ℝ³} |ζ_Λ(ξ)||ξ|^{−ν}/(|Ξ−ξ|²+1) dξ on the given |Ξ| values; pass when the
// log-log slope is ≤ −(ν−1−ε) + slack.
LemmaTable lemma_estimate_check(double nu, const std::vector<double>& xis, double lambda,
                                double epsilon = 0.05, double slack = 0.1, double tol = 1e-8);

struct DiagonalRow {
  double lambda;
  double unsubtracted;
  double vacuum_energy;
  double subtracted;
};
struct DiagonalTable {
  std::vector<DiagonalRow> rows;
  LinearFit log_fit;
  // (max − min) / max |subtracted| over the sweep.
  double subtracted_variation;
};
// Constant coefficients g ≡ c, μ ≡ mass in d = 3: the diagonal integral
// −½(2π)^{−3} ∫ |ρ̂(ξ/Λ)|² / (ω(ξ)(c|Ξ−ξ|² + ω(ξ) + Ω)) dξ and its vacuum-energy
// subtracted counterpart, with spectator energy Ω.
DiagonalTable diagonal_divergence_demo(double c, double mass, double xi, double omega,
                                       const std::vector<double>& lambdas, double tol = 1e-8);

}  // namespace nelsonlab
