#include "nelsonlab/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "nelsonlab/errors.hpp"
#include "nelsonlab/nelson.hpp"
#include "nelsonlab/parallel.hpp"

namespace nelsonlab {

namespace {

double shell_radius(double volume, int d) { return std::pow(volume / unit_ball_volume(d), 1.0 / d); }

RadialProfile from_sorted(int d, const std::vector<double>& values, const std::vector<double>& volumes) {
  std::vector<double> radii(values.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    acc += volumes[k];
    radii[k] = shell_radius(acc, d);
  }
  return RadialProfile(d, std::move(radii), values);
}

// Periodic distance of a lattice point to the origin.
double centered_norm(const Grid& g, std::size_t idx) {
  const LatticeIndex k = g.coords(idx);
  double s = 0.0;
  for (int a = 0; a < g.dim(); ++a) {
    const double x = g.centered(k[static_cast<std::size_t>(a)]) * g.spacing();
    s += x * x;
  }
  return std::sqrt(s);
}

std::vector<double> nonnegative_values(const LatticeFunction& f) {
  if (f.space != Space::position) throw DomainError("rearrangement needs position-space samples");
  std::vector<double> v(static_cast<std::size_t>(f.values.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    const cplx z = f.values(static_cast<Eigen::Index>(i));
    if (z.imag() != 0.0) throw DomainError("rearrangement needs a real function");
    if (!(z.real() >= 0.0)) throw DomainError("rearrangement needs f >= 0, found " + format_double(z.real()));
    v[i] = z.real();
  }
  return v;
}

// Quadrature on [a, b] (b may be +∞) with integrable endpoint singularities.
// Nodes that land so close to a singular endpoint that the integrand overflows
// contribute zero.
double integrate_1d(const std::function<double(double)>& f, double a, double b, double tol) {
  if (!(b > a)) return 0.0;
  thread_local boost::math::quadrature::tanh_sinh<double> ts;
  thread_local boost::math::quadrature::exp_sinh<double> es;
  auto safe = [&](double x) {
    const double v = f(x);
    return std::isfinite(v) ? v : 0.0;
  };
  if (std::isinf(b)) return es.integrate(safe, a, b, tol);
  return ts.integrate(safe, a, b, tol);
}

double integrate_pieces(const std::function<double(double)>& f, std::vector<double> cuts, double tol) {
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) s += integrate_1d(f, cuts[i], cuts[i + 1], tol);
  return s;
}

// Each piece is parametrized by the distance s to its singular end, so |ξ| and
// |Ξ − ξ| are exact near 0 and Ξ.
double singular_integral_1d(const std::function<double(double, double)>& F, double xi, double cut,
                            double tol) {
  const double inf = std::numeric_limits<double>::infinity();
  double total = 0.0;
  // Half-lines ξ = ±τ, τ ≥ cut; y is Ξ in the τ coordinate.
  for (double y : {xi, -xi}) {
    if (y > cut) {
      const double mid = 0.5 * (cut + y);
      total += integrate_1d([&](double s) { return F(cut + s, (y - cut) - s); }, 0.0, mid - cut, tol);
      total += integrate_1d([&](double s) { return F(y - s, s); }, 0.0, y - mid, tol);
      total += integrate_1d([&](double s) { return F(y + s, s); }, 0.0, inf, tol);
    } else {
      total += integrate_1d([&](double s) { return F(cut + s, (cut - y) + s); }, 0.0, inf, tol);
    }
  }
  return total;
}

double singular_integral_3d(const std::function<double(double, double)>& F, double X, double cut,
                            double tol) {
  const double inner_tol = tol * 0.1;
  const double inf = std::numeric_limits<double>::infinity();
  if (X == 0.0) {
    return 4.0 * std::numbers::pi *
           integrate_1d([&](double r) { return r * r * F(r, r); }, cut, inf, tol);
  }
  // Ball |Ξ − ξ| ≤ X/2 around Ξ: ξ = Ξ + ρω, |ξ|² = X² + ρ² + 2Xρv.
  const double R = 0.5 * X;
  auto ball_shell = [&](double rho) {
    if (rho <= 0.0) return 0.0;
    double v_lo = -1.0;
    if (cut > 0.0) v_lo = std::max(-1.0, (cut * cut - X * X - rho * rho) / (2.0 * X * rho));
    if (v_lo >= 1.0) return 0.0;
    auto f = [&](double v) {
      const double a = std::sqrt(std::max(0.0, X * X + rho * rho + 2.0 * X * rho * v));
      return F(a, rho);
    };
    return rho * rho * integrate_1d(f, v_lo, 1.0, inner_tol);
  };
  std::vector<double> ball_cuts{0.0, R};
  if (cut > 0.0 && std::abs(cut - X) < R) ball_cuts.push_back(std::abs(cut - X));
  const double ball = integrate_pieces(ball_shell, ball_cuts, tol);

  // Outside the ball, polar around 0: u ≤ (3X²/4 + r²)/(2Xr).
  auto outer_shell = [&](double r) {
    if (r <= 0.0) return 0.0;
    const double u_hi = std::min(1.0, (0.75 * X * X + r * r) / (2.0 * X * r));
    auto f = [&](double u) {
      const double b = std::sqrt(std::max(0.0, X * X + r * r - 2.0 * X * r * u));
      return F(r, b);
    };
    return r * r * integrate_1d(f, -1.0, u_hi, inner_tol);
  };
  std::vector<double> outer_cuts{cut, inf};
  for (double c : {0.5 * X, 1.5 * X})
    if (c > cut) outer_cuts.push_back(c);
  const double outer = integrate_pieces(outer_shell, outer_cuts, tol);
  return 2.0 * std::numbers::pi * (ball + outer);
}

// a^{-e} with a = 0 mapped to 0 (measure zero, never hit by the quadratures).
double neg_pow(double a, double e) {
  if (e == 0.0) return 1.0;
  return a > 0.0 ? std::pow(a, -e) : 0.0;
}

double zeta(double r, double lambda) {
  if (lambda == 0.0) return 1.0;
  const double q = r * r / (lambda * lambda);
  return -std::expm1(-0.5 * q);
}

void check_window(const IntegralEstimateParams& p) {
  if (p.d != 1 && p.d != 3) throw DimensionError("integral estimates support d = 1 and d = 3");
  if (p.nu < 0.0 || p.sigma < 0.0 || !(p.alpha > 0.0) || !(p.gamma > 0.0))
    throw PreconditionError("need nu, sigma >= 0 and alpha, gamma > 0");
  const double lo = p.nu + p.sigma;
  const double hi = lo + p.alpha * p.gamma;
  if (!(p.d > lo && p.d < hi))
    throw PreconditionError("exponent window: d = " + std::to_string(p.d) + " outside (" +
                            format_double(lo) + ", " + format_double(hi) + ")");
  if (!(p.omega > 0.0)) throw PreconditionError("Omega must be positive");
  if (p.lambda < 0.0) throw PreconditionError("Lambda must be nonnegative");
  if (p.lambda > 0.0 && !(p.epsilon > 0.0 && (p.alpha - p.epsilon) * p.gamma > p.d - lo))
    throw PreconditionError("epsilon too large for the exponent window");
}

double estimate_integrand(const IntegralEstimateParams& p, double omega, double a, double b) {
  return neg_pow(a, p.nu) * neg_pow(b, p.sigma) * std::pow(std::pow(b, p.gamma) + a + omega, -p.alpha);
}

double sharp_integral(const IntegralEstimateParams& p, double omega) {
  return singular_integral(
      p.d, [&](double a, double b) { return estimate_integrand(p, omega, a, b); }, p.xi, p.lambda, p.tol);
}

double eps_of(const IntegralEstimateParams& p) { return p.lambda > 0.0 ? p.epsilon : 0.0; }

}  // namespace

double unit_ball_volume(int d) {
  return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

RadialProfile::RadialProfile(int d, std::vector<double> radii, std::vector<double> values)
    : d_(d), radii_(std::move(radii)), values_(std::move(values)) {
  if (d_ < 1) throw DimensionError("radial profile needs d >= 1");
  if (radii_.size() != values_.size()) throw DimensionError("radii and values differ in length");
  for (std::size_t i = 0; i < radii_.size(); ++i) {
    const double prev = i == 0 ? 0.0 : radii_[i - 1];
    if (!(radii_[i] > prev)) throw DomainError("radii must be positive and strictly increasing");
    if (!(values_[i] >= 0.0) || !std::isfinite(values_[i]))
      throw DomainError("radial profile values must be finite and nonnegative");
  }
}

double RadialProfile::operator()(double r) const {
  const auto it = std::lower_bound(radii_.begin(), radii_.end(), r);
  if (it == radii_.end()) return 0.0;
  return values_[static_cast<std::size_t>(it - radii_.begin())];
}

double RadialProfile::shell_volume(std::size_t i) const {
  const double inner = i == 0 ? 0.0 : std::pow(radii_[i - 1], d_);
  return unit_ball_volume(d_) * (std::pow(radii_[i], d_) - inner);
}

double RadialProfile::level_set_measure(double t) const {
  double m = 0.0;
  for (std::size_t i = 0; i < size(); ++i)
    if (values_[i] > t) m += shell_volume(i);
  return m;
}

double RadialProfile::integral() const {
  double s = 0.0;
  for (std::size_t i = 0; i < size(); ++i) s += values_[i] * shell_volume(i);
  return s;
}

bool RadialProfile::non_increasing() const {
  return std::is_sorted(values_.begin(), values_.end(), std::greater<>());
}

LatticeFunction RadialProfile::sample(const Grid& g) const {
  if (g.dim() != d_) throw DimensionError("profile and grid dimensions differ");
  Vec v(static_cast<Eigen::Index>(g.size()));
  for (std::size_t i = 0; i < g.size(); ++i) v(static_cast<Eigen::Index>(i)) = (*this)(centered_norm(g, i));
  return LatticeFunction(g, v);
}

RadialProfile rearrange(const LatticeFunction& f) {
  std::vector<double> v = nonnegative_values(f);
  std::stable_sort(v.begin(), v.end(), std::greater<>());
  const std::vector<double> volumes(v.size(), f.grid.cell_volume());
  return from_sorted(f.grid.dim(), v, volumes);
}

RadialProfile rearrange(const RadialProfile& f) {
  if (f.non_increasing()) return f;
  std::vector<std::size_t> order(f.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return f.values()[a] > f.values()[b]; });
  std::vector<double> values(f.size());
  std::vector<double> volumes(f.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    values[k] = f.values()[order[k]];
    volumes[k] = f.shell_volume(order[k]);
  }
  return from_sorted(f.dim(), values, volumes);
}

double integrate_product(const RadialProfile& a, const RadialProfile& b) {
  if (a.dim() != b.dim()) throw DimensionError("profiles of different dimension");
  const double end = std::min(a.radii().back(), b.radii().back());
  std::vector<double> cuts;
  cuts.reserve(a.size() + b.size());
  for (double r : a.radii())
    if (r <= end) cuts.push_back(r);
  for (double r : b.radii())
    if (r <= end) cuts.push_back(r);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  const int d = a.dim();
  const double w = unit_ball_volume(d);
  double s = 0.0;
  double prev = 0.0;
  for (double r : cuts) {
    s += a(r) * b(r) * w * (std::pow(r, d) - std::pow(prev, d));
    prev = r;
  }
  return s;
}

RearrangementExample power_law_rearrangement(int d, int n, double p, double lambda, double extent) {
  if (!(p > 0.0) || lambda < 0.0 || !(extent > lambda) || n < 2)
    throw PreconditionError("power-law rearrangement needs p > 0, 0 <= Lambda < extent, n >= 2");
  auto f = [&](double r) { return r <= lambda ? 0.0 : std::pow(r, -p); };
  RadialProfile star(d, {1.0}, {0.0});
  double step = 0.0;
  if (d == 1) {
    const Grid g(1, n, 2.0 * extent);
    step = g.spacing();
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = f(std::abs(g.centered(i) * step));
    star = rearrange(LatticeFunction(g, v));
  } else if (d == 3) {
    step = extent / n;
    std::vector<double> radii(static_cast<std::size_t>(n));
    std::vector<double> values(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      radii[static_cast<std::size_t>(i)] = (i + 1) * step;
      values[static_cast<std::size_t>(i)] = f((i + 0.5) * step);
    }
    star = rearrange(RadialProfile(3, std::move(radii), std::move(values)));
  } else {
    throw DimensionError("power-law rearrangement supports d = 1 and d = 3");
  }
  const double level = std::pow(extent, -p);
  const double lam_d = std::pow(lambda, d);
  RearrangementExample ex{0, 0.0};
  for (std::size_t k = 0; k < star.size() && star.values()[k] > level; ++k) {
    const double r0 = k == 0 ? 0.0 : star.radii()[k - 1];
    const double r1 = star.radii()[k];
    const double r = 0.5 * (r0 + r1);
    const double rd = std::pow(r, d) + lam_d;
    const double closed = std::pow(rd, -p / d);
    const double slope = p * std::pow(r, d - 1) * std::pow(rd, -p / d - 1.0);
    const double resolution = slope * std::max(step, r1 - r0);
    ex.worst_ratio = std::max(ex.worst_ratio, std::abs(star.values()[k] - closed) / resolution);
    ++ex.shells_checked;
  }
  return ex;
}

HardyLittlewood hardy_littlewood_check(const LatticeFunction& f, const LatticeFunction& g) {
  if (f.grid != g.grid) throw DimensionError("functions live on different grids");
  const std::vector<double> fv = nonnegative_values(f);
  const std::vector<double> gv = nonnegative_values(g);
  double lhs = 0.0;
  for (std::size_t i = 0; i < fv.size(); ++i) lhs += fv[i] * gv[i];
  lhs *= f.grid.cell_volume();
  return {lhs, integrate_product(rearrange(f), rearrange(g))};
}

FuzzReport hardy_littlewood_fuzz(int pairs, int L, std::uint64_t seed) {
  const Grid g(1, L, 2.0 * std::numbers::pi);
  auto draw = [&](std::mt19937_64& rng, int kind) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Vec v(static_cast<Eigen::Index>(g.size()));
    const double c = u(rng) * g.box();
    const double w = 0.05 + u(rng);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      double x = 0.0;
      switch (kind) {
        case 0: x = u(rng); break;
        case 1: x = u(rng) < 0.7 ? 0.0 : u(rng); break;
        case 2: {
          const double dx = g.position(static_cast<std::size_t>(i))[0] - c;
          x = std::exp(-dx * dx / (w * w));
          break;
        }
        default: x = std::exp(4.0 * (u(rng) - 0.5)); break;
      }
      v(i) = x;
    }
    return LatticeFunction(g, v);
  };
  const auto margins = parallel_map<double>(static_cast<std::size_t>(pairs), [&](std::size_t k) {
    std::seed_seq seq{seed, static_cast<std::uint64_t>(k)};
    std::mt19937_64 rng(seq);
    const int kind_f = static_cast<int>(k % 4);
    const int kind_g = static_cast<int>((k / 4) % 4);
    const LatticeFunction f = draw(rng, kind_f);
    const LatticeFunction h = draw(rng, kind_g);
    const HardyLittlewood r = hardy_littlewood_check(f, h);
    return r.rhs - r.lhs;
  });
  FuzzReport rep{pairs, 0, std::numeric_limits<double>::infinity()};
  for (double m : margins) {
    if (m < -1e-12) ++rep.violations;
    rep.worst_margin = std::min(rep.worst_margin, m);
  }
  return rep;
}

double peetre_margin(const Point& x, const Point& y, double t) {
  auto jlog = [](const Point& z) { return 0.5 * std::log1p(z[0] * z[0] + z[1] * z[1] + z[2] * z[2]); };
  const Point diff{x[0] - y[0], x[1] - y[1], x[2] - y[2]};
  const double at = std::abs(t);
  return at * std::numbers::ln2 + t * jlog(y) + at * jlog(diff) - t * jlog(x);
}

FuzzReport peetre_check(int samples, int d, double t_max, std::uint64_t seed) {
  if (d < 1 || d > 3) throw DimensionError("Peetre sampling supports d = 1, 2, 3");
  constexpr std::size_t chunks = 64;
  const std::size_t n = static_cast<std::size_t>(samples);
  struct Part {
    int violations;
    double worst;
  };
  const auto parts = parallel_map<Part>(chunks, [&](std::size_t c) {
    std::seed_seq seq{seed, static_cast<std::uint64_t>(c)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> gauss;
    auto point = [&](double scale) {
      Point p{0.0, 0.0, 0.0};
      for (int a = 0; a < d; ++a) p[static_cast<std::size_t>(a)] = scale * gauss(rng);
      return p;
    };
    Part part{0, std::numeric_limits<double>::infinity()};
    const std::size_t begin = n * c / chunks;
    const std::size_t end = n * (c + 1) / chunks;
    for (std::size_t s = begin; s < end; ++s) {
      const Point x = point(std::pow(10.0, 6.0 * u(rng) - 3.0));
      Point y;
      const double mode = u(rng);
      if (mode < 0.1) {
        y = x;
      } else if (mode < 0.3) {
        const Point e = point(std::pow(10.0, 4.0 * u(rng) - 4.0));
        y = {x[0] + e[0], x[1] + e[1], x[2] + e[2]};
      } else {
        y = point(std::pow(10.0, 6.0 * u(rng) - 3.0));
      }
      const double t = t_max * (2.0 * u(rng) - 1.0);
      const double m = peetre_margin(x, y, t);
      if (m < -1e-12) ++part.violations;
      part.worst = std::min(part.worst, m);
    }
    return part;
  });
  FuzzReport rep{samples, 0, std::numeric_limits<double>::infinity()};
  for (const Part& p : parts) {
    rep.violations += p.violations;
    rep.worst_margin = std::min(rep.worst_margin, p.worst);
  }
  return rep;
}

double singular_integral(int d, const std::function<double(double, double)>& F, double xi_norm,
                         double cut, double tol) {
  if (xi_norm < 0.0 || cut < 0.0) throw PreconditionError("|Xi| and the cut must be nonnegative");
  if (d == 1) return singular_integral_1d(F, xi_norm, cut, tol);
  if (d == 3) return singular_integral_3d(F, xi_norm, cut, tol);
  throw DimensionError("singular integrals support d = 1 and d = 3");
}

IntegralEstimateReport integral_estimate_check(const IntegralEstimateParams& p) {
  check_window(p);
  const double eps = eps_of(p);
  const double lo = p.nu + p.sigma;
  IntegralEstimateReport rep{};
  rep.scaling_exponent = -p.alpha + (p.d - lo) / p.gamma;
  rep.bound_exponent = rep.scaling_exponent + eps;
  const double surface = p.d == 3 ? 4.0 * std::numbers::pi : 2.0;
  const double r_power = p.d - 1.0 - lo;
  rep.constant = surface * integrate_pieces(
                               [&](double r) {
                                 return (r > 0.0 ? std::pow(r, r_power) : 0.0) *
                                        std::pow(std::pow(r, p.gamma) + 1.0, -(p.alpha - eps));
                               },
                               {0.0, 1.0, std::numeric_limits<double>::infinity()}, p.tol);
  rep.integral = sharp_integral(p, p.omega);
  rep.bound = rep.constant * std::pow(p.omega, rep.bound_exponent) *
              (p.lambda > 0.0 ? std::pow(p.lambda, -eps) : 1.0);
  rep.integral_scaled = sharp_integral(p, 4.0 * p.omega);
  const double ratio = rep.integral_scaled / rep.integral;
  rep.measured_exponent = std::log(ratio) / std::log(4.0);
  rep.scaling_ratio = ratio / std::pow(4.0, rep.scaling_exponent);
  return rep;
}

double smooth_cutoff_integral(const IntegralEstimateParams& p) {
  check_window(p);
  return singular_integral(
      p.d, [&](double a, double b) { return zeta(a, p.lambda) * estimate_integrand(p, p.omega, a, b); },
      p.xi, 0.0, p.tol);
}

std::vector<double> corollary_prefactors(IntegralEstimateParams p, const std::vector<double>& lambdas) {
  std::vector<double> out;
  out.reserve(lambdas.size());
  for (double lam : lambdas) {
    p.lambda = lam;
    const double e = -p.alpha + (p.d - p.nu - p.sigma) / p.gamma + eps_of(p);
    out.push_back(smooth_cutoff_integral(p) / std::pow(p.omega, e));
  }
  return out;
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw PreconditionError("linear fit needs two or more pairs");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw PreconditionError("linear fit needs distinct abscissae");
  LinearFit f{};
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += r * r;
  }
  f.r2 = syy == 0.0 ? 1.0 : 1.0 - ss_res / syy;
  return f;
}

LemmaTable lemma_estimate_check(double nu, const std::vector<double>& xis, double lambda, double epsilon,
                                double slack, double tol) {
  if (!(nu > 1.0 && nu < 3.0)) throw PreconditionError("nu must lie in (1, 3)");
  if (xis.size() < 2) throw PreconditionError("lemma sweep needs two or more |Xi| values");
  LemmaTable t{};
  t.rows = parallel_map<LemmaRow>(xis.size(), [&](std::size_t i) {
    if (!(xis[i] > 0.0)) throw PreconditionError("|Xi| values must be positive");
    auto F = [&](double a, double b) { return zeta(a, lambda) * neg_pow(a, nu) / (b * b + 1.0); };
    return LemmaRow{xis[i], singular_integral(3, F, xis[i], 0.0, tol)};
  });
  std::vector<double> lx;
  std::vector<double> ly;
  t.prefactor = 0.0;
  for (const LemmaRow& r : t.rows) {
    lx.push_back(std::log(r.xi));
    ly.push_back(std::log(r.integral));
    t.prefactor = std::max(t.prefactor, r.integral * std::pow(r.xi, nu - 1.0 - epsilon));
  }
  t.fit = linear_fit(lx, ly);
  t.slope_bound = -(nu - 1.0 - epsilon) + slack;
  t.pass = t.fit.slope <= t.slope_bound;
  return t;
}

DiagonalTable diagonal_divergence_demo(double c, double mass, double xi, double omega,
                                       const std::vector<double>& lambdas, double tol) {
  if (!(c > 0.0) || !(mass > 0.0)) throw DomainError("coefficients must be positive");
  if (omega < 0.0) throw PreconditionError("spectator energy must be nonnegative");
  if (lambdas.size() < 2) throw PreconditionError("diagonal demo needs two or more cutoffs");
  const double pref = -0.5 / std::pow(2.0 * std::numbers::pi, 3);
  DiagonalTable t{};
  t.rows = parallel_map<DiagonalRow>(lambdas.size(), [&](std::size_t i) {
    const double lam = lambdas[i];
    if (!(lam > 0.0)) throw PreconditionError("cutoffs must be positive");
    auto prof = [&](double a) { return std::pow(profile_hat(a * a / (lam * lam)), 2); };
    auto w = [&](double a) { return std::sqrt(c * a * a + mass * mass); };
    auto unsub = [&](double a, double b) {
      const double wa = w(a);
      return prof(a) / (wa * (c * b * b + wa + omega));
    };
    auto sub = [&](double a, double b) {
      const double wa = w(a);
      return prof(a) / wa * (1.0 / (c * b * b + wa + omega) - 1.0 / (c * a * a + wa));
    };
    DiagonalRow r{};
    r.lambda = lam;
    r.unsubtracted = pref * singular_integral(3, unsub, xi, 0.0, tol);
    r.subtracted = pref * singular_integral(3, sub, xi, 0.0, tol);
    r.vacuum_energy = vacuum_energy_symbol(3, c, mass, lam, SymbolForm::exact, tol);
    return r;
  });
  std::vector<double> lx;
  std::vector<double> ly;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double top = 0.0;
  for (const DiagonalRow& r : t.rows) {
    lx.push_back(std::log(r.lambda));
    ly.push_back(r.unsubtracted);
    lo = std::min(lo, r.subtracted);
    hi = std::max(hi, r.subtracted);
    top = std::max(top, std::abs(r.subtracted));
  }
  t.log_fit = linear_fit(lx, ly);
  t.subtracted_variation = top == 0.0 ? 0.0 : (hi - lo) / top;
  return t;
}

}  // namespace nelsonlab
