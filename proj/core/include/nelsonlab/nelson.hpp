#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "nelsonlab/fock.hpp"
#include "nelsonlab/grid.hpp"
#include "nelsonlab/linalg.hpp"

namespace nelsonlab {

// Variable-coefficient Nelson model on a shared lattice for the particle
// coordinate X and the boson coordinate x.
struct ModelSpec {
  Grid grid;
  // g(x), a symmetric d×d matrix per lattice point.
  std::vector<RMat> metric;
  RVec mu;
  double mass_floor = 1.0;
  RVec potential;
  CutoffOptions cutoff;
  double lambda = 2.0;
  int n_max = 2;
  int modes = 8;

  // g = (1 + amplitude·sin(2πx₀/ℓ))·I, μ ≡ mass, W ≡ 0.
  static ModelSpec standard(const Grid& g, double amplitude, double mass, int n_max, int modes,
                            double lambda = 2.0);

  // Throws SpecError naming the first offending lattice point.
  void validate() const;
  // Extreme eigenvalues of g over the lattice.
  std::pair<double, double> metric_bounds() const;
};

// Largest full-tensor dimension assembled densely.
inline constexpr std::size_t kMaxTensorDim = 6000;

struct FreeModel {
  ModelSpec spec;
  Mat K0;
  Mat K;
  Mat h;
  Mat omega;
  Mat omega_half;
  Mat omega_mhalf;
  // Lowest `modes` eigenvectors of h; dΓ(ω) is diagonal in this basis.
  ModeMap mode_map;
  RVec omega_modes;
  FockBasis fock;
  OperatorMatrix dgamma;

  std::size_t points() const { return spec.grid.size(); }
  std::size_t tensor_dim() const { return fock.dim() * points(); }
};

// K₀ = ½(D g D + D̄ g D̄) summed over axes, D̄ the derivative with the opposite
// Nyquist sign.
Mat divergence_form(const Grid& g, const std::vector<RMat>& metric);

FreeModel assemble_free(const ModelSpec& spec);

// Full-tensor operators use the index fock_state · points + X.
OperatorMatrix free_hamiltonian(const FreeModel& m);
// A ⊗ 1 and 1 ⊗ B in the tensor ordering.
Mat particle_lift(const FreeModel& m, const Mat& a);
Mat fock_lift(const FreeModel& m, const Mat& b);
// Block diagonal over X with block(X) = f(X).
Mat block_diagonal(const FreeModel& m, const std::function<Mat(std::size_t)>& f);

// Mode coefficients of ω^{-1/2}ρ_{Λ,X}, one row per X (with the infrared factor
// when sigma > 0).
Mat form_factor_table(const FreeModel& m, double lambda, double sigma = 0.0);

// H_Λ = K ⊗ 1 + 1 ⊗ dΓ(ω) + Φ(ω^{-1/2}ρ_{Λ,X}), Φ block diagonal over X.
OperatorMatrix assemble_cutoff_hamiltonian(const FreeModel& m, double lambda);

struct RelativeBoundReport {
  double epsilon;
  double c_epsilon;
  // max over samples of ‖ΦΨ‖ / (ε‖H₀Ψ‖ + C_ε‖Ψ‖).
  double worst_ratio;
  int violations;
  int samples;
};
// ‖ΦΨ‖ ≤ ε‖H₀Ψ‖ + C_ε‖Ψ‖ with the constants built from sup_X ‖ω^{-1}ρ_X‖ and
// sup_X ‖ω^{-1/2}ρ_X‖.
RelativeBoundReport relative_bound_check(const FreeModel& m, double lambda, double epsilon,
                                         int samples, std::uint64_t seed);

enum class VacuumEvaluator { matrix, symbol };

// E_Λ(X) = ½ Σ_j conj φ_j(X) [(K + ω_j)^{-1} φ_j](X), φ_j(X) = ⟨e_j, ω^{-1/2}ρ_X⟩.
RVec vacuum_energy(const FreeModel& m, double lambda);
double vacuum_energy_at(const FreeModel& m, double lambda, std::size_t X);

enum class SymbolForm {
  // |ρ̂|² / (ω(ξ)(K(ξ) + ω(ξ))) with constant coefficients.
  exact,
  // |ρ̂|² (h₀ + 1)^{-1/2} / (K₀ + 1).
  leading
};
// ½(2π)^{-d} ∫ integrand dξ over ℝ^d for g ≡ c·I, μ ≡ mass, W ≡ 0, d ∈ {1, 3}.
double vacuum_energy_symbol(int d, double c, double mass, double lambda,
                            SymbolForm form = SymbolForm::exact, double tol = 1e-10);
// The same integrand summed over the lattice momenta of the first `modes`
// plane waves (constant coefficients); matches vacuum_energy for such models.
double vacuum_energy_lattice_sum(const Grid& g, double c, double mass, double lambda, int modes);

// Mode coefficients of B^σ_{Λ,X} = −(K + ω)^{-1} ω^{-1/2} ρ^σ_{Λ,X}, one row per X.
Mat gross_B_table(const FreeModel& m, double lambda, double sigma);
// B^σ_{Λ,X} as a lattice function of x.
LatticeFunction gross_B(const FreeModel& m, double lambda, double sigma, std::size_t X);

struct TransformedReport {
  double residual;
  double relative;
  // Same residual with both sides compressed to particle momenta |ξ| < ξ_N/2.
  double residual_inner;
  double weyl_dgamma;
  double weyl_field;
  double truncation_tolerance;
  int max_sector;
};
// Compares U H_Λ U* with H₀ + R_Λ + V_Λ, U = V(B_X) block diagonal over X, on
// sectors ≤ N_max − 2 (compressed).
TransformedReport transformed_hamiltonian_check(const FreeModel& m, double lambda, double sigma,
                                                double coupling = 1.0);
// Same with an explicit B table (rows X, mode coefficients).
TransformedReport transformed_hamiltonian_check(const FreeModel& m, double lambda,
                                                const Mat& b_table, double coupling = 1.0);

struct FormFactorSplit {
  LatticeFunction v;
  LatticeFunction u;
  LatticeFunction u_tilde;
};
// v = ω^{-1/2}ρ_X, u = (ξ·g(X)ξ + μ(X)²)^{-1/4} applied as a Fourier multiplier
// to ρ_X, ũ = v − u.
FormFactorSplit form_factor_split(const FreeModel& m, double lambda, std::size_t X);

struct RenormRow {
  double lambda;
  double lambda_next;
  double distance;
  double distance_unsubtracted;
};
struct RenormTable {
  std::vector<RenormRow> rows;
  std::vector<double> ground_subtracted;
  std::vector<double> ground_unsubtracted;
  std::vector<double> mean_vacuum_energy;
};
// D(Λ, Λ') = ‖(H_Λ + E_Λ + i)^{-1} − (H_Λ' + E_Λ' + i)^{-1}‖ for consecutive sweep
// points, with the unsubtracted distances alongside.
RenormTable renorm_convergence_experiment(const FreeModel& m, const std::vector<double>& lambdas);

// ‖(A + i)^{-1} − (B + i)^{-1}‖.
double resolvent_distance(const Mat& a, const Mat& b);

}  // namespace nelsonlab
