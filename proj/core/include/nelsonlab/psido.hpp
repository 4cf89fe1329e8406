#pragma once

#include <functional>
#include <memory>
#include <random>
#include <vector>

#include "nelsonlab/grid.hpp"
#include "nelsonlab/linalg.hpp"

namespace nelsonlab {

// Weight M(x, ξ) > 0 controlling symbol growth.
class OrderFunction {
 public:
  // ⟨ξ⟩^m.
  static OrderFunction japanese(double m);
  // ⟨ξ⟩² + Ω with Ω > 0, the particle-plus-boson weight.
  static OrderFunction nelson(double omega);
  // Tabulated positive values, rows x, columns ξ.
  static OrderFunction tabulated(RMat values);

  double operator()(const Grid& g, std::size_t x, std::size_t q) const;
  std::string describe() const;
  // Order in |ξ| for the power-law families.
  double power() const;

 private:
  enum class Kind { japanese, nelson, tabulated };
  Kind kind_ = Kind::japanese;
  double param_ = 0.0;
  std::shared_ptr<const RMat> table_;
};

// Complex function on the phase-space lattice; rows index x, columns index ξ
// (both flat grid indices, ξ in FFT natural order).
class Symbol {
 public:
  Symbol(Grid g, Mat values, OrderFunction order = OrderFunction::japanese(0.0));
  static Symbol from(const Grid& g, const std::function<cplx(const Point&, const Point&)>& f,
                     OrderFunction order = OrderFunction::japanese(0.0));
  static Symbol constant(const Grid& g, cplx c);

  const Grid& grid() const { return grid_; }
  const Mat& values() const { return values_; }
  const OrderFunction& order() const { return order_; }
  cplx operator()(std::size_t x, std::size_t q) const { return values_(x, q); }

  // min |a| / M over the lattice; positive means elliptic.
  double ellipticity() const;
  bool elliptic(double tol = 1e-12) const { return ellipticity() > tol; }
  // sup |∂_x^α ∂_ξ^β a| / M grouped by total order |α|+|β| = 0..4, with spectral
  // x-derivatives and centred ξ-differences. Computed once on first use.
  const std::array<double, 5>& seminorms() const;

  Symbol conj() const;
  Symbol with_order(OrderFunction o) const { return Symbol(grid_, values_, std::move(o)); }
  Symbol operator+(const Symbol& o) const;
  Symbol operator-(const Symbol& o) const;
  // Pointwise product.
  Symbol operator*(const Symbol& o) const;
  Symbol operator*(cplx s) const;

 private:
  Grid grid_;
  Mat values_;
  OrderFunction order_;
  struct Cache;
  std::shared_ptr<Cache> cache_;
};

struct KernelMatrix {
  Grid grid;
  // K(x, y); the operator acts as (Tu)(x) = Σ_y K(x,y) u(y) (ℓ/L)^d.
  Mat kernel;
  Mat as_operator() const { return kernel * grid.cell_volume(); }
};

// Op_t(a) as an L^d × L^d matrix acting on lattice values.
OperatorMatrix quantize(const Symbol& a, double t);

struct Dequantized {
  Symbol symbol;
  // ℓ² mass of kernel components that Op_t cannot represent (Weyl zeros).
  double lost;
};
// Inverse of quantize on its range.
Dequantized dequantize(const Grid& g, const Mat& op, double t);

struct ChangedSymbol {
  Symbol symbol;
  double lost;
};
// a_s with Op_s(a_s) = Op_t(a) whenever representable at s.
ChangedSymbol change_quantization_report(const Symbol& a, double t, double s);
Symbol change_quantization(const Symbol& a, double t, double s);

// a #_t b with Op_t(a #_t b) = Op_t(a) Op_t(b).
Symbol moyal(const Symbol& a, const Symbol& b, double t);

// Symbol of Op_t(a)* in the same quantization.
Symbol adjoint_symbol(const Symbol& a, double t);

struct ParametrixResult {
  Symbol b;
  // ‖Op_t(a)Op_t(b_k) − 1‖.
  double residual;
};
ParametrixResult parametrix(const Symbol& a, double t, int iterations);

// Smooth bump: 1 on [0,1], 0 on [2,∞).
double bump_chi(double r);

struct AsymptoticTerm {
  Symbol symbol;
  double order;
};
// Σ_j (1 − χ(ε_j |ξ|)) a_j.
Symbol asymptotic_resum(const Grid& g, const std::vector<AsymptoticTerm>& terms,
                        const std::vector<double>& eps);

// Least-squares slope of log sup_{x, |ξ| in shell} |a| against log |ξ| over dyadic
// shells [r, 2r) with r from r_min up to r_max.
double shell_order(const Symbol& a, double r_min, double r_max);

struct FunctionalCalculusRow {
  int points;
  double s;
  // ‖⟨D⟩^{s−(mp−1)} (f(a^w) − f(a)^w) ⟨D⟩^{−s}‖.
  double norm;
};
struct FunctionalCalculusReport {
  std::vector<FunctionalCalculusRow> rows;
  // max over s of norm(largest L)/norm(smallest L).
  double growth;
  // Relative deviation of ⟨e_ξ, f(a^w) e_ξ⟩ from the x-average of f(a(·, ξ)).
  double symbol_deviation;
  bool pass;
};
// a is built per grid; m the symbol order, p the order of f.
FunctionalCalculusReport functional_calculus_check(
    const std::function<Symbol(const Grid&)>& make_symbol, const std::function<double(double)>& f,
    double m, double p, const std::vector<int>& points, double box, double growth_tolerance = 2.0);

// f(Op_½(a)) − Op_½(f∘a) on a single grid.
Mat functional_calculus_difference(const Symbol& a, const std::function<double(double)>& f);
// Fourier multiplier ⟨D⟩^s.
Mat bessel_potential(const Grid& g, double s);

double schur_bound(const KernelMatrix& k);
double cotlar_stein_bound(const std::vector<Mat>& blocks);

// Random symbol whose double Fourier transform is supported where both the x
// frequency and the kernel offset lie in the inner half of the lattice.
Symbol random_band_limited_symbol(const Grid& g, std::mt19937_64& rng, bool real_valued);

}  // namespace nelsonlab
