#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "nelsonlab/grid.hpp"
#include "nelsonlab/linalg.hpp"

namespace nelsonlab {

using Occupation = std::vector<int>;

// Symmetric Fock space over M modes truncated at N_max bosons, in the
// occupation-number representation. States are sector ordered, vacuum first.
class FockBasis {
 public:
  FockBasis(int modes, int n_max);

  int modes() const { return M_; }
  int n_max() const { return N_; }
  std::size_t dim() const { return states_.size(); }
  const Occupation& state(std::size_t i) const { return states_[i]; }
  const std::vector<Occupation>& states() const { return states_; }
  int sector_of(std::size_t i) const { return sector_[i]; }
  // First index of sector n; sector_offset(N_max + 1) == dim().
  std::size_t sector_offset(int n) const { return offsets_.at(static_cast<std::size_t>(n)); }
  std::size_t sector_size(int n) const { return sector_offset(n + 1) - sector_offset(n); }
  // Number of states in sectors 0..n.
  std::size_t dim_up_to(int n) const { return sector_offset(std::min(n, N_) + 1); }
  std::size_t lookup(const Occupation& s) const;
  std::string label() const;

  static std::size_t expected_dim(int modes, int n_max);

  // Nonzero entries of a*_j: (to, from, sqrt(n_j + 1)).
  struct Ladder {
    std::size_t to;
    std::size_t from;
    int mode;
    double factor;
  };
  const std::vector<Ladder>& creation_table() const { return creation_; }

 private:
  int M_;
  int N_;
  std::vector<Occupation> states_;
  std::vector<int> sector_;
  std::vector<std::size_t> offsets_;
  std::map<Occupation, std::size_t> index_;
  std::vector<Ladder> creation_;
};

// Orthonormal one-particle basis underlying the Fock modes. Columns of `basis`
// are orthonormal for the weighted inner product Σ ū v · weight.
class ModeMap {
 public:
  ModeMap(Mat basis, double weight, std::string label);
  // M abstract modes with the Euclidean inner product.
  static ModeMap abstract(int modes);
  // The first `modes` lattice plane waves in order of increasing |ξ| (stable).
  static ModeMap plane_waves(const Grid& g, int modes);

  int modes() const { return static_cast<int>(basis_.cols()); }
  Eigen::Index points() const { return basis_.rows(); }
  const Mat& basis() const { return basis_; }
  double weight() const { return weight_; }
  const std::string& label() const { return label_; }

  struct Projection {
    Vec coeffs;
    // ‖f − Σ c_j e_j‖, reported and never dropped.
    double residual;
  };
  Projection project(const Vec& f) const;
  Projection project(const LatticeFunction& f) const { return project(f.values); }
  Vec expand(const Vec& coeffs) const { return basis_ * coeffs; }
  double orthonormality_defect() const;

 private:
  Mat basis_;
  double weight_;
  std::string label_;
};

// a*(f) and a(f) for f given by its mode coefficients. Creation from the top
// sector is projected out.
OperatorMatrix create(const FockBasis& b, const Vec& f);
OperatorMatrix annihilate(const FockBasis& b, const Vec& f);
// dΓ(h) for h an M×M matrix on the modes.
OperatorMatrix second_quantize(const FockBasis& b, const Mat& h);
OperatorMatrix number_operator(const FockBasis& b);
// Φ(f) = (a*(f) + a(f))/√2 and Π(f) = i(a*(f) − a(f))/√2.
OperatorMatrix field(const FockBasis& b, const Vec& f);
OperatorMatrix momentum(const FockBasis& b, const Vec& f);

struct WeylOperator {
  OperatorMatrix V;
  // Coherent-tail estimate of the truncation error of V(f) acting on the
  // vacuum: Poisson(‖f‖²/2) mass above N_max, floored at round-off.
  double truncation_tolerance;
};
// V(f) = e^{iΠ(f)} from the eigendecomposition of Π(f).
WeylOperator weyl(const FockBasis& b, const Vec& f);

double coherent_tail(double mean_occupation, int n_max);

enum class SectorNorm {
  // ‖P R P‖ with P the projection onto sectors ≤ n.
  compressed,
  // ‖R P‖.
  action
};
double sector_residual(const Mat& r, const FockBasis& b, int max_sector, SectorNorm kind);

struct GrossStaticOptions {
  int safe_offset = 10;
  SectorNorm norm = SectorNorm::compressed;
  // When >= 0, overrides safe_offset with an absolute sector bound.
  int max_sector = -1;
};
// Residual of V(f)(dΓ(ω) + Φ(ω^{-1/2}ρ))V(f)* − dΓ(ω) + ½‖ω^{-1}ρ‖² with
// f = −ω^{-3/2}ρ, on sectors ≤ N_max − safe_offset.
double gross_check_static(const FockBasis& b, const Mat& omega, const Vec& rho,
                          const GrossStaticOptions& opt = {});

struct AcNormReport {
  // Index 0: ‖a(f)Ψ‖ bound, 1: ‖a*(f)Ψ‖ bound, 2: ‖(N+1)^{-1/2} a(f)a(g)Ψ‖ bound.
  std::array<double, 3> lhs{};
  std::array<double, 3> rhs{};
  int violations = 0;
};
// h must satisfy h >= 1 on the modes.
AcNormReport verify_ac_norm_estimates(const FockBasis& b, const Mat& h, const Vec& f,
                                      const Vec& g, double alpha, const Vec& psi,
                                      double tol = 1e-10);

}  // namespace nelsonlab
