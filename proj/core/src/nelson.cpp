#include "nelsonlab/nelson.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "nelsonlab/errors.hpp"
#include "nelsonlab/parallel.hpp"

namespace nelsonlab {

namespace {

std::vector<int> shape_of(const Grid& g) { return std::vector<int>(static_cast<std::size_t>(g.dim()), g.points()); }

std::string point_label(const Grid& g, std::size_t idx) {
  const auto c = g.coords(idx);
  std::string s = "(";
  for (int a = 0; a < g.dim(); ++a) s += (a ? "," : "") + std::to_string(c[static_cast<std::size_t>(a)]);
  return s + ")";
}

void require_tensor(const FreeModel& m) {
  if (m.tensor_dim() > kMaxTensorDim)
    throw SizeError("full tensor dimension " + std::to_string(m.fock.dim()) + " x " +
                    std::to_string(m.points()) + " = " + std::to_string(m.tensor_dim()) +
                    " exceeds the dense guard " + std::to_string(kMaxTensorDim));
}

// (K + c)^{-1} with a positivity check.
Mat shifted_inverse(const Mat& k, double c) {
  const auto n = k.rows();
  Eigen::LLT<Mat> llt(k + c * Mat::Identity(n, n));
  if (llt.info() != Eigen::Success)
    throw SpectralError("K + omega is not positive definite (shift " + format_double(c) + ")");
  return llt.solve(Mat::Identity(n, n));
}

Mat particle_projector_inner(const Grid& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  const auto shape = shape_of(g);
  Mat p(n, n);
  Vec col(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    col.setZero();
    col(j) = 1.0;
    fft_inplace(col.data(), shape, 1, -1);
    for (Eigen::Index k = 0; k < n; ++k) {
      const auto c = g.coords(static_cast<std::size_t>(k));
      bool keep = true;
      for (int a = 0; a < g.dim(); ++a)
        keep = keep && std::abs(g.centered(c[static_cast<std::size_t>(a)])) < g.points() / 4;
      if (!keep) col(k) = 0.0;
    }
    fft_inplace(col.data(), shape, 1, +1);
    p.col(j) = col / static_cast<double>(n);
  }
  return p;
}

}  // namespace

ModelSpec ModelSpec::standard(const Grid& g, double amplitude, double mass, int n_max, int modes,
                              double lambda) {
  ModelSpec s{g, {}, RVec::Constant(static_cast<Eigen::Index>(g.size()), mass), mass,
              RVec::Zero(static_cast<Eigen::Index>(g.size())), {}, lambda, n_max, modes};
  s.metric.reserve(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x0 = g.position(i)[0];
    s.metric.push_back(RMat::Identity(g.dim(), g.dim()) *
                       (1.0 + amplitude * std::sin(2.0 * std::numbers::pi * x0 / g.box())));
  }
  return s;
}

std::pair<double, double> ModelSpec::metric_bounds() const {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& gm : metric) {
    Eigen::SelfAdjointEigenSolver<RMat> es(gm);
    lo = std::min(lo, es.eigenvalues().minCoeff());
    hi = std::max(hi, es.eigenvalues().maxCoeff());
  }
  return {lo, hi};
}

void ModelSpec::validate() const {
  const auto n = grid.size();
  if (metric.size() != n || static_cast<std::size_t>(mu.size()) != n ||
      static_cast<std::size_t>(potential.size()) != n)
    throw SpecError("model tables do not match the grid size " + std::to_string(n));
  if (!(mass_floor > 0.0)) throw SpecError("mass floor m must be positive");
  for (std::size_t i = 0; i < n; ++i) {
    const RMat& gm = metric[i];
    if (gm.rows() != grid.dim() || gm.cols() != grid.dim())
      throw SpecError("metric at " + point_label(grid, i) + " is not d x d");
    if ((gm - gm.transpose()).cwiseAbs().maxCoeff() > 1e-12)
      throw SpecError("metric at " + point_label(grid, i) + " is not symmetric");
    Eigen::SelfAdjointEigenSolver<RMat> es(gm);
    if (es.eigenvalues().minCoeff() <= 0.0)
      throw SpecError("ellipticity violated at lattice point " + point_label(grid, i) +
                      ": min eigenvalue of g is " + format_double(es.eigenvalues().minCoeff()));
    if (mu(static_cast<Eigen::Index>(i)) < mass_floor)
      throw SpecError("mu below the mass floor at lattice point " + point_label(grid, i));
  }
  if (n_max < 0 || modes < 1 || static_cast<std::size_t>(modes) > n)
    throw SpecError("Fock truncation out of range (M = " + std::to_string(modes) +
                    ", N_max = " + std::to_string(n_max) + ")");
  if (lambda < 0.0) throw SpecError("cutoff scale must be nonnegative");
}

Mat divergence_form(const Grid& g, const std::vector<RMat>& metric) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Mat k = Mat::Zero(n, n);
  for (bool flip : {false, true}) {
    std::vector<Mat> d;
    for (int a = 0; a < g.dim(); ++a) d.push_back(spectral_derivative(g, a, flip));
    for (int a = 0; a < g.dim(); ++a)
      for (int b = 0; b < g.dim(); ++b) {
        Vec gab(n);
        for (Eigen::Index i = 0; i < n; ++i) gab(i) = metric[static_cast<std::size_t>(i)](a, b);
        k += 0.5 * d[static_cast<std::size_t>(a)] * gab.asDiagonal() * d[static_cast<std::size_t>(b)];
      }
  }
  // conj(D) = −D̄, so the average is real.
  return k.real().cast<cplx>();
}

FreeModel assemble_free(const ModelSpec& spec) {
  spec.validate();
  const Grid& g = spec.grid;
  const auto n = static_cast<Eigen::Index>(g.size());
  const Mat k0 = divergence_form(g, spec.metric);
  const Mat k = k0 + spec.potential.cast<cplx>().asDiagonal().toDenseMatrix();
  const Mat h = k0 + spec.mu.cwiseAbs2().cast<cplx>().asDiagonal().toDenseMatrix();

  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  const RVec ev = es.eigenvalues();
  const double floor2 = spec.mass_floor * spec.mass_floor;
  if (ev.minCoeff() < floor2 * (1.0 - 1e-10))
    throw SpectralError("h has eigenvalue " + format_double(ev.minCoeff()) + " below m^2");
  const Mat& v = es.eigenvectors();
  auto fn = [&](double p) {
    RVec f(n);
    for (Eigen::Index i = 0; i < n; ++i) f(i) = std::pow(ev(i), p);
    return Mat(v * f.cast<cplx>().asDiagonal() * v.adjoint());
  };
  ModeMap mm(v.leftCols(spec.modes) / std::sqrt(g.cell_volume()), g.cell_volume(), "h-eigenmodes");
  RVec wm = ev.head(spec.modes).cwiseSqrt();
  FockBasis fock(spec.modes, spec.n_max);
  OperatorMatrix dg = second_quantize(fock, wm.cast<cplx>().asDiagonal().toDenseMatrix());
  return FreeModel{spec,       k0,         k,  h,    fn(0.5),         fn(0.25), fn(-0.25),
                   std::move(mm), std::move(wm), std::move(fock), std::move(dg)};
}

Mat particle_lift(const FreeModel& m, const Mat& a) {
  const auto nf = static_cast<Eigen::Index>(m.fock.dim());
  const auto np = static_cast<Eigen::Index>(m.points());
  Mat out = Mat::Zero(nf * np, nf * np);
  for (Eigen::Index f = 0; f < nf; ++f) out.block(f * np, f * np, np, np) = a;
  return out;
}

Mat fock_lift(const FreeModel& m, const Mat& b) {
  const auto nf = static_cast<Eigen::Index>(m.fock.dim());
  const auto np = static_cast<Eigen::Index>(m.points());
  Mat out = Mat::Zero(nf * np, nf * np);
  for (Eigen::Index f = 0; f < nf; ++f)
    for (Eigen::Index f2 = 0; f2 < nf; ++f2)
      if (b(f, f2) != 0.0)
        for (Eigen::Index x = 0; x < np; ++x) out(f * np + x, f2 * np + x) = b(f, f2);
  return out;
}

Mat block_diagonal(const FreeModel& m, const std::function<Mat(std::size_t)>& blk) {
  const auto nf = static_cast<Eigen::Index>(m.fock.dim());
  const auto np = static_cast<Eigen::Index>(m.points());
  Mat out = Mat::Zero(nf * np, nf * np);
  for (Eigen::Index x = 0; x < np; ++x) {
    const Mat b = blk(static_cast<std::size_t>(x));
    for (Eigen::Index f = 0; f < nf; ++f)
      for (Eigen::Index f2 = 0; f2 < nf; ++f2) out(f * np + x, f2 * np + x) = b(f, f2);
  }
  return out;
}

OperatorMatrix free_hamiltonian(const FreeModel& m) {
  require_tensor(m);
  Mat h0 = particle_lift(m, m.K) + fock_lift(m, m.dgamma.entries());
  return OperatorMatrix(std::move(h0), "nelson(" + m.fock.label() + ")", Hermiticity::yes);
}

Mat form_factor_table(const FreeModel& m, double lambda, double sigma) {
  const Grid& g = m.spec.grid;
  CutoffOptions opt = m.spec.cutoff;
  opt.sigma = sigma;
  Mat t(static_cast<Eigen::Index>(g.size()), m.spec.modes);
  for (std::size_t x = 0; x < g.size(); ++x) {
    const Vec c = m.mode_map.project(cutoff_function(g, lambda, x, opt)).coeffs;
    for (int j = 0; j < m.spec.modes; ++j)
      t(static_cast<Eigen::Index>(x), j) = c(j) / std::sqrt(m.omega_modes(j));
  }
  return t;
}

OperatorMatrix assemble_cutoff_hamiltonian(const FreeModel& m, double lambda) {
  require_tensor(m);
  const Mat phi = form_factor_table(m, lambda);
  Mat h = free_hamiltonian(m).entries() + block_diagonal(m, [&](std::size_t x) {
            return field(m.fock, phi.row(static_cast<Eigen::Index>(x)).transpose()).entries();
          });
  return OperatorMatrix(std::move(h), "nelson(" + m.fock.label() + ")", Hermiticity::yes);
}

RelativeBoundReport relative_bound_check(const FreeModel& m, double lambda, double epsilon,
                                         int samples, std::uint64_t seed) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  require_tensor(m);
  const Mat phi = form_factor_table(m, lambda);
  double a = 0.0, b = 0.0;
  for (Eigen::Index x = 0; x < phi.rows(); ++x) {
    double sa = 0.0;
    for (Eigen::Index j = 0; j < phi.cols(); ++j) sa += std::norm(phi(x, j)) / m.omega_modes(j);
    a = std::max(a, std::sqrt(sa));
    b = std::max(b, phi.row(x).norm());
  }
  const double kmin = hermitian_eigenvalues(m.K).minCoeff();
  RelativeBoundReport rep{epsilon, b / std::sqrt(2.0), 0.0, 0, samples};
  if (a > 0.0) {
    const double delta = epsilon / (std::sqrt(2.0) * a);
    rep.c_epsilon += std::sqrt(2.0) * a * (delta * std::abs(kmin) + 0.25 / delta);
  }
  const Mat h0 = free_hamiltonian(m).entries();
  const Mat field_part = block_diagonal(m, [&](std::size_t x) {
    return field(m.fock, phi.row(static_cast<Eigen::Index>(x)).transpose()).entries();
  });
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  for (int s = 0; s < samples; ++s) {
    Vec psi(h0.rows());
    for (auto& v : psi) v = cplx(nd(rng), nd(rng));
    // Alternate plain and spectrally weighted samples so high-energy states are probed.
    if (s % 2 == 1) psi = h0 * psi;
    const double lhs = (field_part * psi).norm();
    const double rhs = epsilon * (h0 * psi).norm() + rep.c_epsilon * psi.norm();
    rep.worst_ratio = std::max(rep.worst_ratio, lhs / rhs);
    if (lhs > rhs * (1.0 + 1e-12)) ++rep.violations;
  }
  return rep;
}

RVec vacuum_energy(const FreeModel& m, double lambda) {
  const Mat phi = form_factor_table(m, lambda);
  RVec e = RVec::Zero(phi.rows());
  for (Eigen::Index j = 0; j < phi.cols(); ++j) {
    const Vec aphi = shifted_inverse(m.K, m.omega_modes(j)) * phi.col(j);
    for (Eigen::Index x = 0; x < phi.rows(); ++x) e(x) += 0.5 * (std::conj(phi(x, j)) * aphi(x)).real();
  }
  return e;
}

double vacuum_energy_at(const FreeModel& m, double lambda, std::size_t X) {
  if (X >= m.points()) throw DimensionError("lattice point outside the grid");
  return vacuum_energy(m, lambda)(static_cast<Eigen::Index>(X));
}

double vacuum_energy_symbol(int d, double c, double mass, double lambda, SymbolForm form, double tol) {
  if (d != 1 && d != 3) throw DimensionError("symbol evaluator supports d = 1 and d = 3");
  if (!(c > 0.0) || !(mass > 0.0)) throw DomainError("coefficients must be positive");
  if (lambda == 0.0) return 0.0;
  auto integrand = [&](double r) {
    const double r2 = r * r;
    const double prof = std::pow(profile_hat(r2 / (lambda * lambda)), 2);
    double core;
    if (form == SymbolForm::exact) {
      const double w = std::sqrt(c * r2 + mass * mass);
      core = 1.0 / (w * (c * r2 + w));
    } else {
      core = std::pow(c * r2 + 1.0, -1.5);
    }
    return prof * core * (d == 3 ? r2 : 1.0);
  };
  const double surface = d == 3 ? 4.0 * std::numbers::pi : 2.0;
  double err = 0.0;
  const double val = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      integrand, 0.0, std::numeric_limits<double>::infinity(), 20, tol, &err);
  return 0.5 * surface * val / std::pow(2.0 * std::numbers::pi, d);
}

double vacuum_energy_lattice_sum(const Grid& g, double c, double mass, double lambda, int modes) {
  std::vector<double> xi2(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) xi2[k] = g.momentum_norm2(k);
  std::stable_sort(xi2.begin(), xi2.end());
  double s = 0.0;
  for (int j = 0; j < modes; ++j) {
    const double q = xi2[static_cast<std::size_t>(j)];
    const double prof = lambda == 0.0 ? 1.0 : std::pow(profile_hat(q / (lambda * lambda)), 2);
    const double w = std::sqrt(c * q + mass * mass);
    s += prof / (w * (c * q + w));
  }
  return 0.5 * s / std::pow(g.box(), g.dim());
}

Mat gross_B_table(const FreeModel& m, double lambda, double sigma) {
  const Mat phi = form_factor_table(m, lambda, sigma);
  Mat b(phi.rows(), phi.cols());
  for (Eigen::Index j = 0; j < phi.cols(); ++j)
    b.col(j) = -(shifted_inverse(m.K, m.omega_modes(j)) * phi.col(j));
  return b;
}

LatticeFunction gross_B(const FreeModel& m, double lambda, double sigma, std::size_t X) {
  if (X >= m.points()) throw DimensionError("lattice point outside the grid");
  const Mat b = gross_B_table(m, lambda, sigma);
  return LatticeFunction(m.spec.grid, m.mode_map.expand(b.row(static_cast<Eigen::Index>(X)).transpose()));
}

TransformedReport transformed_hamiltonian_check(const FreeModel& m, double lambda, double sigma,
                                                double coupling) {
  return transformed_hamiltonian_check(m, lambda, gross_B_table(m, lambda, sigma) * coupling, coupling);
}

TransformedReport transformed_hamiltonian_check(const FreeModel& m, double lambda,
                                                const Mat& b_table, double coupling) {
  require_tensor(m);
  const int top = m.spec.n_max - 2;
  if (top < 0) throw PreconditionError("transformed Hamiltonian check needs N_max >= 2");
  const auto np = static_cast<Eigen::Index>(m.points());
  const auto nm = static_cast<Eigen::Index>(m.spec.modes);
  if (b_table.rows() != np || b_table.cols() != nm) throw DimensionError("B table has the wrong shape");
  const Grid& g = m.spec.grid;
  const FockBasis& fb = m.fock;
  const Mat phi = form_factor_table(m, lambda) * coupling;
  const Mat dg = m.dgamma.entries();
  const RVec& w = m.omega_modes;

  auto row = [](const Mat& t, std::size_t x) -> Vec { return t.row(static_cast<Eigen::Index>(x)).transpose(); };

  const Mat field_part = block_diagonal(m, [&](std::size_t x) { return field(fb, row(phi, x)).entries(); });
  const Mat h = free_hamiltonian(m).entries() + field_part;

  std::vector<WeylOperator> weyls;
  weyls.reserve(m.points());
  for (std::size_t x = 0; x < m.points(); ++x) weyls.push_back(weyl(fb, row(b_table, x)));
  const Mat u = block_diagonal(m, [&](std::size_t x) { return weyls[x].V.entries(); });
  const Mat lhs = u * h * u.adjoint();

  TransformedReport rep{};
  rep.max_sector = top;
  for (const auto& v : weyls) rep.truncation_tolerance = std::max(rep.truncation_tolerance, v.truncation_tolerance);

  // Fock-only conjugations inside the check.
  for (std::size_t x = 0; x < m.points(); ++x) {
    const Vec bx = row(b_table, x);
    const Mat& v = weyls[x].V.entries();
    const double c1 = 0.5 * (w.cast<cplx>().asDiagonal() * bx).dot(bx).real();
    const Mat r1 = v * dg * v.adjoint() - dg - field(fb, w.cast<cplx>().asDiagonal() * bx).entries() -
                   c1 * Mat::Identity(dg.rows(), dg.cols());
    const Mat fx = field(fb, row(phi, x)).entries();
    const Mat r2 = v * fx * v.adjoint() - fx - bx.dot(row(phi, x)).real() * Mat::Identity(dg.rows(), dg.cols());
    rep.weyl_dgamma = std::max(rep.weyl_dgamma, sector_residual(r1, fb, top, SectorNorm::compressed));
    rep.weyl_field = std::max(rep.weyl_field, sector_residual(r2, fb, top, SectorNorm::compressed));
  }

  // H₀ + Φ(ω^{-1/2}ρ + (K₀ + ω)B) + R-terms + constants.
  const Mat kb = m.K0 * b_table + b_table * w.cast<cplx>().asDiagonal();
  const Mat shifted = phi + kb;
  Mat rhs = free_hamiltonian(m).entries() +
            block_diagonal(m, [&](std::size_t x) { return field(fb, row(shifted, x)).entries(); });
  RVec constants = RVec::Zero(np);
  for (Eigen::Index x = 0; x < np; ++x) {
    const Vec bx = b_table.row(x).transpose();
    constants(x) += 0.5 * (w.cast<cplx>().asDiagonal() * bx).dot(bx).real() +
                    bx.dot(phi.row(x).transpose()).real();
  }
  const double s2 = std::sqrt(2.0);
  for (bool flip : {false, true}) {
    std::vector<Mat> dB, ad_star, p;
    for (int a = 0; a < g.dim(); ++a) {
      const Mat d = spectral_derivative(g, a, flip);
      dB.push_back(cplx(0.0, 1.0) * d * b_table);
      ad_star.push_back(block_diagonal(m, [&](std::size_t x) { return create(fb, row(dB.back(), x)).entries(); }));
      p.push_back(particle_lift(m, cplx(0.0, 1.0) * d));
    }
    Mat part = Mat::Zero(rhs.rows(), rhs.cols());
    for (int a = 0; a < g.dim(); ++a)
      for (int b = 0; b < g.dim(); ++b) {
        const auto ua = static_cast<std::size_t>(a), ub = static_cast<std::size_t>(b);
        RVec gab(np);
        for (Eigen::Index x = 0; x < np; ++x) gab(x) = m.spec.metric[static_cast<std::size_t>(x)](a, b);
        const Mat gl = particle_lift(m, gab.cast<cplx>().asDiagonal().toDenseMatrix());
        const Mat& as_a = ad_star[ua];
        const Mat& as_b = ad_star[ub];
        const Mat an_a = as_a.adjoint(), an_b = as_b.adjoint();
        part += -s2 * as_a * gl * p[ub] + s2 * p[ua] * gl * an_b;
        part += -0.5 * as_a * gl * as_b - 0.5 * an_a * gl * an_b + as_a * gl * an_b;
        for (Eigen::Index x = 0; x < np; ++x)
          constants(x) += 0.25 * gab(x) * dB[ua].row(x).conjugate().dot(dB[ub].row(x)).real();
      }
    rhs += 0.5 * part;
  }
  rhs += particle_lift(m, constants.cast<cplx>().asDiagonal().toDenseMatrix());

  const auto k = static_cast<Eigen::Index>(fb.dim_up_to(top)) * np;
  const Mat diff = (lhs - rhs).topLeftCorner(k, k);
  rep.residual = spectral_norm(diff);
  rep.relative = rep.residual / std::max(spectral_norm(h.topLeftCorner(k, k)), 1e-300);
  const Mat pin = particle_projector_inner(g);
  Mat pl = Mat::Zero(k, k);
  for (Eigen::Index f = 0; f < k / np; ++f) pl.block(f * np, f * np, np, np) = pin;
  rep.residual_inner = spectral_norm(pl * diff * pl);
  return rep;
}

FormFactorSplit form_factor_split(const FreeModel& m, double lambda, std::size_t X) {
  const Grid& g = m.spec.grid;
  if (X >= g.size()) throw DimensionError("lattice point outside the grid");
  const LatticeFunction rho = cutoff_function(g, lambda, X, m.spec.cutoff);
  LatticeFunction v(g, m.omega_mhalf * rho.values);
  Vec s = rho.values;
  fft_inplace(s.data(), shape_of(g), 1, -1);
  const RMat& gx = m.spec.metric[X];
  const double mu2 = std::pow(m.spec.mu(static_cast<Eigen::Index>(X)), 2);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Point xi = g.momentum(k);
    double q = mu2;
    for (int a = 0; a < g.dim(); ++a)
      for (int b = 0; b < g.dim(); ++b) q += xi[static_cast<std::size_t>(a)] * gx(a, b) * xi[static_cast<std::size_t>(b)];
    s(static_cast<Eigen::Index>(k)) *= std::pow(q, -0.25);
  }
  fft_inplace(s.data(), shape_of(g), 1, +1);
  LatticeFunction u(g, s / static_cast<double>(g.size()));
  LatticeFunction ut = v - u;
  return {std::move(v), std::move(u), std::move(ut)};
}

double resolvent_distance(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows()) throw DimensionError("resolvent operands differ in size");
  const Mat id = Mat::Identity(a.rows(), a.cols());
  const cplx i(0.0, 1.0);
  return spectral_norm(Mat((a + i * id).partialPivLu().inverse()) - Mat((b + i * id).partialPivLu().inverse()));
}

RenormTable renorm_convergence_experiment(const FreeModel& m, const std::vector<double>& lambdas) {
  require_tensor(m);
  for (double l : lambdas) check_nyquist(m.spec.grid, l, m.spec.cutoff.nyquist_factor);
  struct Point_ {
    Mat h;
    Mat hs;
    double ground;
    double ground_s;
    double mean_e;
  };
  auto pts = parallel_map<Point_>(lambdas.size(), [&](std::size_t i) {
    Point_ p;
    p.h = assemble_cutoff_hamiltonian(m, lambdas[i]).entries();
    const RVec e = vacuum_energy(m, lambdas[i]);
    p.hs = p.h + particle_lift(m, e.cast<cplx>().asDiagonal().toDenseMatrix());
    p.ground = hermitian_eigenvalues(p.h).minCoeff();
    p.ground_s = hermitian_eigenvalues(p.hs).minCoeff();
    p.mean_e = e.mean();
    return p;
  });
  RenormTable t;
  for (const auto& p : pts) {
    t.ground_unsubtracted.push_back(p.ground);
    t.ground_subtracted.push_back(p.ground_s);
    t.mean_vacuum_energy.push_back(p.mean_e);
  }
  if (lambdas.size() < 2) return t;
  t.rows = parallel_map<RenormRow>(lambdas.size() - 1, [&](std::size_t i) {
    return RenormRow{lambdas[i], lambdas[i + 1], resolvent_distance(pts[i].hs, pts[i + 1].hs),
                     resolvent_distance(pts[i].h, pts[i + 1].h)};
  });
  return t;
}

}  // namespace nelsonlab
