#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include "nelsonlab/linalg.hpp"

namespace nelsonlab {

using Point = std::array<double, 3>;
using LatticeIndex = std::array<int, 3>;

// Periodic lattice of L^d points on the torus [0, ℓ)^d with its dual momentum
// lattice. Flat indices are row-major with axis 0 slowest; momenta use the FFT
// natural order, so index k >= L/2 on an axis means frequency k - L.
class Grid {
 public:
  Grid(int d, int L, double box);

  int dim() const { return d_; }
  int points() const { return L_; }
  double box() const { return box_; }
  std::size_t size() const { return n_; }

  double spacing() const { return box_ / L_; }
  double momentum_step() const;
  double cell_volume() const;
  double dual_volume() const;
  // Largest |ξ| component resolved on an axis: πL/ℓ.
  double nyquist() const;

  int centered(int k) const { return k >= L_ / 2 ? k - L_ : k; }
  LatticeIndex coords(std::size_t idx) const;
  std::size_t index(const LatticeIndex& k) const;
  Point position(std::size_t idx) const;
  Point momentum(std::size_t idx) const;
  double momentum_norm2(std::size_t idx) const;
  // Nearest lattice point to an arbitrary position (ties toward −∞), wrapped.
  std::size_t snap(const Point& x) const;
  // Index of x_idx + x_shift on the torus.
  std::size_t translate(std::size_t idx, std::size_t shift) const;
  // Index of −x on the torus.
  std::size_t negate(std::size_t idx) const;

  bool operator==(const Grid& o) const {
    return d_ == o.d_ && L_ == o.L_ && box_ == o.box_;
  }
  bool operator!=(const Grid& o) const { return !(*this == o); }

 private:
  int d_;
  int L_;
  double box_;
  std::size_t n_;
};

enum class Space { position, momentum };

// Complex samples on a Grid, either in position or momentum representation.
struct LatticeFunction {
  Grid grid;
  Vec values;
  Space space = Space::position;

  LatticeFunction(Grid g, Vec v, Space s = Space::position);
  static LatticeFunction zeros(const Grid& g, Space s = Space::position);
  static LatticeFunction from(const Grid& g, const std::function<cplx(const Point&)>& f);

  double weight() const;
  cplx inner(const LatticeFunction& o) const;
  double norm() const;
  LatticeFunction operator+(const LatticeFunction& o) const;
  LatticeFunction operator-(const LatticeFunction& o) const;
  LatticeFunction operator*(cplx s) const;
};

// Unitary transform û(ξ) = (2π)^{-d/2} (ℓ/L)^d Σ_x e^{-iξ·x} u(x).
LatticeFunction dft(const LatticeFunction& u);
LatticeFunction idft(const LatticeFunction& u);

// Raw in-place multi-dimensional FFT of `howmany` contiguous blocks of the given
// shape; sign = -1 forward, +1 backward, unnormalized.
void fft_inplace(cplx* data, const std::vector<int>& shape, int howmany, int sign);

// (Σ_ξ ⟨ξ⟩^{2s} |û(ξ)|² (2π/ℓ)^d)^{1/2}.
double sobolev_norm(const LatticeFunction& u, double s);

// Gaussian profile in Fourier form, normalized so ρ̂(0) = 1.
double profile_hat(double xi_norm2_over_lambda2);

struct CutoffOptions {
  // Guard: Λ ≤ nyquist_factor · πL/ℓ.
  double nyquist_factor = 1.0;
  // Infrared scale σ: ρ̂ is multiplied by χ(|ξ|), zero below σ and one above 2σ.
  double sigma = 0.0;
};

void check_nyquist(const Grid& g, double lambda, double nyquist_factor);

// Cosine-ramp infrared factor; χ ≡ 1 when σ = 0.
double infrared_chi(double xi_norm, double sigma);

// ρ_{Λ,X}: the lattice function with Fourier data ρ̂(ξ/Λ) e^{-iξ·X}. Λ = 0 yields δ_X.
LatticeFunction cutoff_function(const Grid& g, double lambda, std::size_t X,
                                const CutoffOptions& opt = {});

// Indicator of X divided by the cell volume.
LatticeFunction delta_function(const Grid& g, std::size_t X);

// Spectral derivative along `axis` (multiplication by ξ_axis, i.e. D = -i∂).
// With flip_nyquist the Nyquist frequency carries +πL/ℓ instead of −πL/ℓ.
Mat spectral_derivative(const Grid& g, int axis, bool flip_nyquist = false);

// Translation by a lattice vector: (T u)(x) = u(x − shift).
LatticeFunction translate(const LatticeFunction& u, std::size_t shift);

}  // namespace nelsonlab
