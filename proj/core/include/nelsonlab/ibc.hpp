#pragma once

#include <functional>
#include <vector>

#include "nelsonlab/linalg.hpp"
#include "nelsonlab/nelson.hpp"

namespace nelsonlab {

// Σ_k G^k for a nilpotent G; exact once G^k vanishes.
struct NeumannInverse {
  OperatorMatrix inverse;
  int terms;
  // Norm of the last term added (0 when the series terminated).
  double tail;
  // ‖G^k‖ for k = 1, 2, ... until G^k = 0.
  std::vector<double> power_norms;
};

struct IbcOperators {
  double lambda;
  // H₀ + shift is inverted on sectors ≥ 1; every identity carries the same shift.
  double shift;
  OperatorMatrix G;
  OperatorMatrix T;
  OperatorMatrix H_ibc;
  NeumannInverse one_minus_G_inverse;
};

// a*(v_{Λ,X}) block diagonal over X, v = ω^{-1/2}ρ/√2.
Mat creation_part(const FreeModel& m, double lambda);

// G_Λ = −(H₀ + shift)^{-1} a*(v_{Λ,X}), inverted sector by sector on sectors ≥ 1.
OperatorMatrix build_G(const FreeModel& m, double lambda, double shift = 0.0);

// ‖G‖ from sector n−1 to sector n for n = 1..N_max.
std::vector<double> sector_norms(const Mat& G, const FockBasis& b, std::size_t points);
// p in ‖G‖_{n−1→n} ≈ C n^{-p} by least squares on log-log data.
double fitted_decay_exponent(const std::vector<double>& norms);

NeumannInverse invert_one_minus_G(const OperatorMatrix& G);
// Second differences of log ‖G^k‖ are ≤ tol.
bool log_concave(const std::vector<double>& norms, double tol = 1e-12);

IbcOperators build_ibc(const FreeModel& m, double lambda, double shift = 0.0);

struct FactorizationReport {
  // ‖H_Λ + s − ((1−G)*(H₀+s)(1−G) + T)‖ on sectors ≤ N_max − 1.
  double residual;
  double relative;
  double residual_full;
  double shift;
};
// Throws ContractError when h0_shift differs from ops.shift.
FactorizationReport factorization_residual(const FreeModel& m, const IbcOperators& ops,
                                           const Mat& h_lambda, double h0_shift);
FactorizationReport factorization_identity_check(const FreeModel& m, double lambda, double shift = 0.0);

// (1−G)*(H₀+s)(1−G) + T + E_Λ(X) − s, equal to H_Λ + E_Λ(X).
OperatorMatrix ibc_hamiltonian(const FreeModel& m, double lambda, double shift = 0.0);

// ‖H₀^p (H₀+s)^{-1} a*(φ/√2)‖ per sector step n−1 → n, from the eigenbasis of K and
// the occupation basis, without forming the tensor. phi holds mode coefficients
// per X (rows).
std::vector<double> structured_sector_norms(const FreeModel& m, const Mat& phi, double p,
                                            double shift = 0.0);
// ‖H₀^p G_Λ‖, structured and dense.
double domain_norm(const FreeModel& m, double lambda, double p, double shift = 0.0);
double domain_norm_dense(const FreeModel& m, double lambda, double p, double shift = 0.0);
// ‖G_{Λ'} − G_Λ‖ (structured).
double G_difference_norm(const FreeModel& m, double lambda, double lambda_next, double shift = 0.0);

struct DomainRow {
  int points;
  double lambda;
  double p;
  double norm;
};
struct DomainTable {
  std::vector<DomainRow> rows;
  std::vector<double> ps;
  // growth[i][k]: norm at refinement k+1 over norm at k, for ps[i].
  std::vector<std::vector<double>> growth;
  // norm at the last refinement over norm at the first, for ps[i].
  std::vector<double> total_growth;
};
// Combined (Λ, L) refinement: make_spec(L) with the paired Λ.
DomainTable domain_regularity_experiment(const std::function<ModelSpec(int)>& make_spec,
                                         const std::vector<int>& points,
                                         const std::vector<double>& lambdas,
                                         const std::vector<double>& ps, double shift = 0.0);

}  // namespace nelsonlab
