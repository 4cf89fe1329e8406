#include "nelsonlab/psido.hpp"

#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <numbers>

#include "nelsonlab/errors.hpp"

namespace nelsonlab {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<int> shape_of(const Grid& g) { return std::vector<int>(g.dim(), g.points()); }

void fft_columns(Mat& m, const Grid& g, int sign) {
  fft_inplace(m.data(), shape_of(g), static_cast<int>(m.cols()), sign);
}

double japanese2(const Grid& g, std::size_t q) { return 1.0 + g.momentum_norm2(q); }

}  // namespace

OrderFunction OrderFunction::japanese(double m) {
  OrderFunction o;
  o.kind_ = Kind::japanese;
  o.param_ = m;
  return o;
}

OrderFunction OrderFunction::nelson(double omega) {
  if (!(omega > 0.0)) throw DomainError("order function needs Omega > 0");
  OrderFunction o;
  o.kind_ = Kind::nelson;
  o.param_ = omega;
  return o;
}

OrderFunction OrderFunction::tabulated(RMat values) {
  if (values.size() == 0 || !(values.minCoeff() > 0.0))
    throw DomainError("tabulated order function must be strictly positive");
  OrderFunction o;
  o.kind_ = Kind::tabulated;
  o.table_ = std::make_shared<const RMat>(std::move(values));
  return o;
}

double OrderFunction::operator()(const Grid& g, std::size_t x, std::size_t q) const {
  switch (kind_) {
    case Kind::japanese:
      return std::pow(japanese2(g, q), 0.5 * param_);
    case Kind::nelson:
      return japanese2(g, q) + param_;
    case Kind::tabulated:
      return (*table_)(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(q));
  }
  return 1.0;
}

std::string OrderFunction::describe() const {
  switch (kind_) {
    case Kind::japanese:
      return "<xi>^" + format_double(param_);
    case Kind::nelson:
      return "<xi>^2+" + format_double(param_);
    case Kind::tabulated:
      return "tabulated";
  }
  return "";
}

double OrderFunction::power() const {
  switch (kind_) {
    case Kind::japanese:
      return param_;
    case Kind::nelson:
      return 2.0;
    case Kind::tabulated:
      break;
  }
  throw DomainError("tabulated order functions have no power");
}

struct Symbol::Cache {
  std::once_flag flag;
  std::array<double, 5> seminorms{};
};

Symbol::Symbol(Grid g, Mat values, OrderFunction order)
    : grid_(std::move(g)), values_(std::move(values)), order_(std::move(order)),
      cache_(std::make_shared<Cache>()) {
  const auto n = static_cast<Eigen::Index>(grid_.size());
  if (values_.rows() != n || values_.cols() != n)
    throw DimensionError("symbol table does not match the phase-space lattice");
  if (!values_.allFinite()) throw DomainError("symbol values must be finite");
}

Symbol Symbol::from(const Grid& g, const std::function<cplx(const Point&, const Point&)>& f,
                    OrderFunction order) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Mat v(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Point x = g.position(static_cast<std::size_t>(k));
    for (Eigen::Index q = 0; q < n; ++q) v(k, q) = f(x, g.momentum(static_cast<std::size_t>(q)));
  }
  return Symbol(g, std::move(v), std::move(order));
}

Symbol Symbol::constant(const Grid& g, cplx c) {
  const auto n = static_cast<Eigen::Index>(g.size());
  return Symbol(g, Mat::Constant(n, n, c));
}

double Symbol::ellipticity() const {
  double m = std::numeric_limits<double>::infinity();
  for (Eigen::Index q = 0; q < values_.cols(); ++q)
    for (Eigen::Index k = 0; k < values_.rows(); ++k)
      m = std::min(m, std::abs(values_(k, q)) /
                          order_(grid_, static_cast<std::size_t>(k), static_cast<std::size_t>(q)));
  return m;
}

namespace {

// ∂_{x_axis} applied to every ξ column (periodic, spectral).
Mat dx(const Grid& g, const Mat& a, int axis) {
  Mat m = a;
  fft_columns(m, g, -1);
  for (Eigen::Index p = 0; p < m.rows(); ++p) {
    const double eta = g.momentum(static_cast<std::size_t>(p))[axis];
    m.row(p) *= cplx(0.0, eta) / static_cast<double>(g.size());
  }
  fft_columns(m, g, +1);
  return m;
}

// Centred difference in ξ_axis, one-sided at the lattice edge.
Mat dxi(const Grid& g, const Mat& a, int axis) {
  Mat out(a.rows(), a.cols());
  const int half = g.points() / 2;
  for (Eigen::Index q = 0; q < a.cols(); ++q) {
    auto c = g.coords(static_cast<std::size_t>(q));
    const int m = g.centered(c[axis]);
    auto cp = c, cm = c;
    const bool has_p = m + 1 <= half - 1, has_m = m - 1 >= -half;
    cp[axis] = m + 1;
    cm[axis] = m - 1;
    const auto qp = has_p ? static_cast<Eigen::Index>(g.index(cp)) : q;
    const auto qm = has_m ? static_cast<Eigen::Index>(g.index(cm)) : q;
    const double span = g.momentum_step() * ((has_p ? 1 : 0) + (has_m ? 1 : 0));
    out.col(q) = (a.col(qp) - a.col(qm)) / span;
  }
  return out;
}

}  // namespace

const std::array<double, 5>& Symbol::seminorms() const {
  std::call_once(cache_->flag, [this] {
    RMat weight(values_.rows(), values_.cols());
    for (Eigen::Index q = 0; q < values_.cols(); ++q)
      for (Eigen::Index k = 0; k < values_.rows(); ++k)
        weight(k, q) = order_(grid_, static_cast<std::size_t>(k), static_cast<std::size_t>(q));
    auto& out = cache_->seminorms;
    out.fill(0.0);
    for (int ax = 0; ax < grid_.dim(); ++ax) {
      for (int bx = 0; bx < grid_.dim(); ++bx) {
        Mat xder = values_;
        for (int alpha = 0; alpha <= 4; ++alpha) {
          Mat cur = xder;
          for (int beta = 0; alpha + beta <= 4; ++beta) {
            const double s = (cur.cwiseAbs().array() / weight.array()).maxCoeff();
            out[static_cast<std::size_t>(alpha + beta)] =
                std::max(out[static_cast<std::size_t>(alpha + beta)], s);
            if (alpha + beta < 4) cur = dxi(grid_, cur, bx);
          }
          if (alpha < 4) xder = dx(grid_, xder, ax);
        }
      }
    }
  });
  return cache_->seminorms;
}

Symbol Symbol::conj() const { return Symbol(grid_, values_.conjugate(), order_); }

namespace {
void require_same_grid(const Symbol& a, const Symbol& b) {
  if (a.grid() != b.grid()) throw DimensionError("symbols live on different grids");
}
}  // namespace

Symbol Symbol::operator+(const Symbol& o) const {
  require_same_grid(*this, o);
  return Symbol(grid_, values_ + o.values_, order_);
}

Symbol Symbol::operator-(const Symbol& o) const {
  require_same_grid(*this, o);
  return Symbol(grid_, values_ - o.values_, order_);
}

Symbol Symbol::operator*(const Symbol& o) const {
  require_same_grid(*this, o);
  return Symbol(grid_, values_.cwiseProduct(o.values_), order_);
}

Symbol Symbol::operator*(cplx s) const { return Symbol(grid_, values_ * s, order_); }

namespace {

void check_t(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("quantization parameter t must lie in [0, 1]");
}

// m_t(p, d) as a table with rows d (kernel offset) and columns p (x frequency):
// the product over axes of e^{2πi t p d / L}, replaced by its cosine when p or d
// sits at −L/2 so that both signs of the ambiguous lattice point are averaged.
Mat multiplier(const Grid& g, double t) {
  const int L = g.points();
  Mat axis_factor(L, L);  // (d, p) per axis
  for (int d = 0; d < L; ++d) {
    for (int p = 0; p < L; ++p) {
      const int dc = g.centered(d), pc = g.centered(p);
      const double ph = 2.0 * kPi * t * pc * dc / L;
      if (dc == -L / 2 || pc == -L / 2)
        axis_factor(d, p) = std::cos(ph);
      else
        axis_factor(d, p) = std::polar(1.0, ph);
    }
  }
  const auto n = static_cast<Eigen::Index>(g.size());
  Mat m(n, n);
  for (Eigen::Index d = 0; d < n; ++d) {
    const auto dcs = g.coords(static_cast<std::size_t>(d));
    for (Eigen::Index p = 0; p < n; ++p) {
      const auto pcs = g.coords(static_cast<std::size_t>(p));
      cplx f = 1.0;
      for (int a = 0; a < g.dim(); ++a) f *= axis_factor(dcs[a], pcs[a]);
      m(d, p) = f;
    }
  }
  return m;
}

// Symbol table a(x, ξ) → Bt(d, p) = (1/N²) Σ_{k,q} a(x_k, ξ_q) e^{-iη_p x_k} e^{iξ_q d}.
Mat to_offset(const Grid& g, const Mat& a) {
  const double n = static_cast<double>(g.size());
  Mat A = a;
  fft_columns(A, g, -1);
  Mat bt = A.transpose();
  fft_columns(bt, g, +1);
  bt /= n * n;
  return bt;
}

Mat from_offset(const Grid& g, const Mat& bt) {
  Mat at = bt;
  fft_columns(at, g, -1);
  Mat a = at.transpose();
  fft_columns(a, g, +1);
  return a;
}

// Kernel K(x_j + d, x_j) = Σ_p C(d, p) e^{iη_p x_j}.
Mat kernel_from_offset(const Grid& g, const Mat& ct) {
  Mat c = ct.transpose();
  fft_columns(c, g, +1);  // c(j, d)
  const auto n = static_cast<Eigen::Index>(g.size());
  Mat k(n, n);
  for (Eigen::Index d = 0; d < n; ++d)
    for (Eigen::Index j = 0; j < n; ++j)
      k(static_cast<Eigen::Index>(
            g.translate(static_cast<std::size_t>(j), static_cast<std::size_t>(d))),
        j) = c(j, d);
  return k;
}

Mat offset_from_kernel(const Grid& g, const Mat& k) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Mat c(n, n);
  for (Eigen::Index d = 0; d < n; ++d)
    for (Eigen::Index j = 0; j < n; ++j)
      c(j, d) = k(static_cast<Eigen::Index>(
                      g.translate(static_cast<std::size_t>(j), static_cast<std::size_t>(d))),
                  j);
  fft_columns(c, g, -1);
  c /= static_cast<double>(n);
  return c.transpose();
}

constexpr double kZeroMultiplier = 1e-12;

std::string op_label(const Grid& g) {
  return "lattice(d=" + std::to_string(g.dim()) + ",L=" + std::to_string(g.points()) + ")";
}

}  // namespace

OperatorMatrix quantize(const Symbol& a, double t) {
  check_t(t);
  const Grid& g = a.grid();
  Mat bt = to_offset(g, a.values());
  bt = bt.cwiseProduct(multiplier(g, t));
  return OperatorMatrix(kernel_from_offset(g, bt), op_label(g));
}

Dequantized dequantize(const Grid& g, const Mat& op, double t) {
  check_t(t);
  const auto n = static_cast<Eigen::Index>(g.size());
  if (op.rows() != n || op.cols() != n) throw DimensionError("operator does not match the grid");
  Mat bt = offset_from_kernel(g, op);
  const Mat m = multiplier(g, t);
  double lost = 0.0;
  for (Eigen::Index p = 0; p < n; ++p)
    for (Eigen::Index d = 0; d < n; ++d) {
      if (std::abs(m(d, p)) < kZeroMultiplier) {
        lost += std::norm(bt(d, p));
        bt(d, p) = 0.0;
      } else {
        bt(d, p) /= m(d, p);
      }
    }
  return {Symbol(g, from_offset(g, bt)), std::sqrt(lost)};
}

ChangedSymbol change_quantization_report(const Symbol& a, double t, double s) {
  check_t(t);
  check_t(s);
  const Grid& g = a.grid();
  if (t == s) return {a, 0.0};
  Mat bt = to_offset(g, a.values());
  const Mat mt = multiplier(g, t), ms = multiplier(g, s);
  double lost = 0.0;
  const auto n = static_cast<Eigen::Index>(g.size());
  for (Eigen::Index p = 0; p < n; ++p)
    for (Eigen::Index d = 0; d < n; ++d) {
      if (std::abs(ms(d, p)) < kZeroMultiplier) {
        lost += std::norm(bt(d, p) * mt(d, p));
        bt(d, p) = 0.0;
      } else {
        bt(d, p) *= mt(d, p) / ms(d, p);
      }
    }
  return {Symbol(g, from_offset(g, bt), a.order()), std::sqrt(lost)};
}

Symbol change_quantization(const Symbol& a, double t, double s) {
  return change_quantization_report(a, t, s).symbol;
}

namespace {

// e^{i x_k · ξ_q} on the lattice.
Mat plane_wave_table(const Grid& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Mat e(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto kc = g.coords(static_cast<std::size_t>(k));
    for (Eigen::Index q = 0; q < n; ++q) {
      const auto qc = g.coords(static_cast<std::size_t>(q));
      long ph = 0;
      for (int a = 0; a < g.dim(); ++a) ph += static_cast<long>(kc[a]) * g.centered(qc[a]);
      e(k, q) = std::polar(1.0, 2.0 * kPi * static_cast<double>(ph % g.points()) / g.points());
    }
  }
  return e;
}

// Standard-quantization product: c(x,ξ) = e^{-ixξ} Σ_y K_a(x,y) b(y,ξ) e^{iyξ}.
Symbol moyal_standard(const Symbol& a, const Symbol& b) {
  const Grid& g = a.grid();
  const Mat e = plane_wave_table(g);
  const Mat ka = quantize(a, 1.0).entries();
  Mat c = ka * b.values().cwiseProduct(e);
  c = c.cwiseProduct(e.conjugate());
  return Symbol(g, std::move(c), a.order());
}

}  // namespace

Symbol moyal(const Symbol& a, const Symbol& b, double t) {
  check_t(t);
  require_same_grid(a, b);
  if (t == 1.0) return moyal_standard(a, b);
  const Symbol a1 = change_quantization(a, t, 1.0);
  const Symbol b1 = change_quantization(b, t, 1.0);
  return change_quantization(moyal_standard(a1, b1), 1.0, t).with_order(a.order());
}

Symbol adjoint_symbol(const Symbol& a, double t) {
  check_t(t);
  // Op_t(a)* = Op_{1−t}(ā); re-express in quantization t.
  return change_quantization(a.conj(), 1.0 - t, t);
}

ParametrixResult parametrix(const Symbol& a, double t, int iterations) {
  check_t(t);
  if (iterations < 0) throw DomainError("parametrix iterations must be nonnegative");
  const double ell = a.ellipticity();
  if (!(ell > 1e-12))
    throw EllipticityError("symbol is not elliptic: min |a|/M = " + format_double(ell), ell);
  const Grid& g = a.grid();
  const auto n = static_cast<Eigen::Index>(g.size());
  const Symbol one = Symbol::constant(g, 1.0);
  const Symbol b0(g, a.values().cwiseInverse());
  const Symbol r = one - moyal(a, b0, t);
  Symbol series = one;
  Symbol term = one;
  for (int k = 0; k < iterations; ++k) {
    term = moyal(term, r, t);
    series = series + term;
  }
  Symbol b = moyal(b0, series, t);
  const Mat res = quantize(a, t).entries() * quantize(b, t).entries() - Mat::Identity(n, n);
  return {std::move(b), spectral_norm(res)};
}

double bump_chi(double r) {
  r = std::abs(r);
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  const double s = r - 1.0;
  const double u = std::exp(-1.0 / (1.0 - s));
  const double v = std::exp(-1.0 / s);
  return u / (u + v);
}

Symbol asymptotic_resum(const Grid& g, const std::vector<AsymptoticTerm>& terms,
                        const std::vector<double>& eps) {
  const auto n = static_cast<Eigen::Index>(g.size());
  if (terms.size() != eps.size())
    throw PreconditionError("one cutoff scale is needed per asymptotic term");
  for (std::size_t j = 1; j < terms.size(); ++j)
    if (!(terms[j].order < terms[j - 1].order))
      throw PreconditionError("asymptotic orders must be strictly decreasing");
  Mat sum = Mat::Zero(n, n);
  for (std::size_t j = 0; j < terms.size(); ++j) {
    if (terms[j].symbol.grid() != g) throw DimensionError("asymptotic term on a different grid");
    for (Eigen::Index q = 0; q < n; ++q) {
      const double xi = std::sqrt(g.momentum_norm2(static_cast<std::size_t>(q)));
      sum.col(q) += (1.0 - bump_chi(eps[j] * xi)) * terms[j].symbol.values().col(q);
    }
  }
  return Symbol(g, std::move(sum),
                terms.empty() ? OrderFunction::japanese(0.0)
                              : OrderFunction::japanese(terms.front().order));
}

double shell_order(const Symbol& a, double r_min, double r_max) {
  const Grid& g = a.grid();
  std::vector<double> lx, ly;
  for (double r = r_min; 2.0 * r <= r_max * (1.0 + 1e-12); r *= 2.0) {
    double sup = 0.0;
    bool any = false;
    for (std::size_t q = 0; q < g.size(); ++q) {
      const double xi = std::sqrt(g.momentum_norm2(q));
      if (xi < r || xi >= 2.0 * r) continue;
      any = true;
      sup = std::max(sup, a.values().col(static_cast<Eigen::Index>(q)).cwiseAbs().maxCoeff());
    }
    if (!any || sup <= 0.0) continue;
    lx.push_back(std::log(r * std::sqrt(2.0)));
    ly.push_back(std::log(sup));
  }
  if (lx.size() < 2) throw PreconditionError("shell fit needs at least two populated shells");
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / lx.size();
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / ly.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return sxy / sxx;
}

Mat bessel_potential(const Grid& g, double s) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Mat f = Mat::Identity(n, n);
  fft_columns(f, g, -1);
  for (Eigen::Index q = 0; q < n; ++q)
    f.row(q) *= std::pow(japanese2(g, static_cast<std::size_t>(q)), 0.5 * s) / static_cast<double>(n);
  fft_columns(f, g, +1);
  return f;
}

Mat functional_calculus_difference(const Symbol& a, const std::function<double(double)>& f) {
  const Mat aw = quantize(a, 0.5).entries();
  const double defect = hermiticity_defect(aw);
  if (defect > 1e-10 * std::max(1.0, aw.cwiseAbs().maxCoeff()))
    throw DomainError("symbol reality: Weyl quantization is not hermitian (defect " +
                      format_double(defect) + ")");
  const Mat fa = hermitian_function(0.5 * (aw + aw.adjoint()), f);
  Mat fs(a.values().rows(), a.values().cols());
  for (Eigen::Index q = 0; q < fs.cols(); ++q)
    for (Eigen::Index k = 0; k < fs.rows(); ++k) fs(k, q) = f(a.values()(k, q).real());
  return fa - quantize(Symbol(a.grid(), std::move(fs)), 0.5).entries();
}

FunctionalCalculusReport functional_calculus_check(
    const std::function<Symbol(const Grid&)>& make_symbol, const std::function<double(double)>& f,
    double m, double p, const std::vector<int>& points, double box, double growth_tolerance) {
  if (points.empty()) throw PreconditionError("functional calculus check needs grid sizes");
  FunctionalCalculusReport rep;
  const double shift = m * p - 1.0;
  const std::array<double, 3> ss{-1.0, 0.0, 1.0};
  std::vector<std::array<double, 3>> norms;
  for (int L : points) {
    const Grid g(1, L, box);
    const Symbol a = make_symbol(g);
    const Mat diff = functional_calculus_difference(a, f);
    std::array<double, 3> row{};
    for (std::size_t i = 0; i < ss.size(); ++i) {
      row[i] = spectral_norm(bessel_potential(g, ss[i] - shift) * diff * bessel_potential(g, -ss[i]));
      rep.rows.push_back({L, ss[i], row[i]});
    }
    norms.push_back(row);
    if (L == points.back()) {
      const Mat aw = quantize(a, 0.5).entries();
      const Mat fa = hermitian_function(0.5 * (aw + aw.adjoint()), f);
      double dev = 0.0;
      for (std::size_t q = 0; q < g.size(); ++q) {
        Vec w(static_cast<Eigen::Index>(g.size()));
        double avg = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) {
          const double ph = g.momentum(q)[0] * g.position(k)[0];
          w(static_cast<Eigen::Index>(k)) = std::polar(1.0 / std::sqrt(static_cast<double>(g.size())), ph);
          avg += f(a.values()(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(q)).real());
        }
        avg /= static_cast<double>(g.size());
        const double diag = w.dot(fa * w).real();
        dev = std::max(dev, std::abs(diag - avg) / std::max(std::abs(avg), 1e-300));
      }
      rep.symbol_deviation = dev;
    }
  }
  rep.growth = 0.0;
  for (std::size_t i = 0; i < ss.size(); ++i) {
    const double first = norms.front()[i], last = norms.back()[i];
    // Differences below the floor are round-off of an exact identity.
    constexpr double floor = 1e-9;
    const double ratio = last <= floor ? std::min(1.0, last / std::max(first, floor))
                                       : last / std::max(first, floor);
    rep.growth = std::max(rep.growth, ratio);
  }
  rep.pass = rep.growth <= growth_tolerance;
  return rep;
}

double schur_bound(const KernelMatrix& k) {
  const RMat a = k.kernel.cwiseAbs() * k.grid.cell_volume();
  if (a.size() == 0) return 0.0;
  return std::max(a.rowwise().sum().maxCoeff(), a.colwise().sum().maxCoeff());
}

double cotlar_stein_bound(const std::vector<Mat>& blocks) {
  double rows = 0.0, cols = 0.0;
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    double sr = 0.0, sc = 0.0;
    for (std::size_t k = 0; k < blocks.size(); ++k) {
      if (blocks[j].rows() != blocks[k].rows() || blocks[j].cols() != blocks[k].cols())
        throw DimensionError("Cotlar-Stein blocks must share a shape");
      sr += std::sqrt(spectral_norm(blocks[j] * blocks[k].adjoint()));
      sc += std::sqrt(spectral_norm(blocks[j].adjoint() * blocks[k]));
    }
    rows = std::max(rows, sr);
    cols = std::max(cols, sc);
  }
  return std::max(rows, cols);
}

Symbol random_band_limited_symbol(const Grid& g, std::mt19937_64& rng, bool real_valued) {
  const auto n = static_cast<Eigen::Index>(g.size());
  std::normal_distribution<double> nd(0.0, 1.0);
  const int quarter = g.points() / 4;
  auto inner = [&](std::size_t idx) {
    const auto c = g.coords(idx);
    for (int a = 0; a < g.dim(); ++a)
      if (std::abs(g.centered(c[a])) >= quarter) return false;
    return true;
  };
  Mat bt = Mat::Zero(n, n);
  for (Eigen::Index d = 0; d < n; ++d) {
    if (!inner(static_cast<std::size_t>(d))) continue;
    for (Eigen::Index p = 0; p < n; ++p)
      if (inner(static_cast<std::size_t>(p))) bt(d, p) = cplx(nd(rng), nd(rng));
  }
  Mat a = from_offset(g, bt);
  a /= std::max(1.0, a.cwiseAbs().maxCoeff());
  if (real_valued) a = a.real().cast<cplx>();
  return Symbol(g, std::move(a));
}

}  // namespace nelsonlab
