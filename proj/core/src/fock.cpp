#include "nelsonlab/fock.hpp"

#include <cmath>
#include <numeric>

#include "nelsonlab/errors.hpp"

namespace nelsonlab {

namespace {

void enumerate_sector(int modes, int n, int mode, Occupation& cur, std::vector<Occupation>& out) {
  if (mode == modes - 1) {
    cur[mode] = n;
    out.push_back(cur);
    return;
  }
  for (int k = n; k >= 0; --k) {
    cur[mode] = k;
    enumerate_sector(modes, n - k, mode + 1, cur, out);
  }
  cur[mode] = 0;
}

}  // namespace

FockBasis::FockBasis(int modes, int n_max) : M_(modes), N_(n_max) {
  if (modes < 1) throw DimensionError("Fock basis needs at least one mode");
  if (n_max < 0) throw DimensionError("boson truncation must be nonnegative");
  for (int n = 0; n <= N_; ++n) {
    offsets_.push_back(states_.size());
    Occupation cur(static_cast<std::size_t>(M_), 0);
    enumerate_sector(M_, n, 0, cur, states_);
    sector_.resize(states_.size(), n);
  }
  offsets_.push_back(states_.size());
  for (std::size_t i = 0; i < states_.size(); ++i) index_.emplace(states_[i], i);
  for (std::size_t i = 0; i < states_.size(); ++i) {
    if (sector_[i] == N_) continue;
    Occupation up = states_[i];
    for (int j = 0; j < M_; ++j) {
      up[j] += 1;
      creation_.push_back({index_.at(up), i, j, std::sqrt(static_cast<double>(up[j]))});
      up[j] -= 1;
    }
  }
}

std::size_t FockBasis::lookup(const Occupation& s) const {
  auto it = index_.find(s);
  if (it == index_.end()) throw DimensionError("occupation vector not in the truncated basis");
  return it->second;
}

std::string FockBasis::label() const {
  return "fock(M=" + std::to_string(M_) + ",N=" + std::to_string(N_) + ")";
}

std::size_t FockBasis::expected_dim(int modes, int n_max) {
  // Σ_n C(M+n−1, n) = C(M+N, N).
  double c = 1.0;
  for (int k = 1; k <= n_max; ++k) c = c * (modes + k) / k;
  return static_cast<std::size_t>(std::llround(c));
}

ModeMap::ModeMap(Mat basis, double weight, std::string label)
    : basis_(std::move(basis)), weight_(weight), label_(std::move(label)) {
  if (basis_.cols() > basis_.rows()) throw DimensionError("more modes than one-particle points");
}

ModeMap ModeMap::abstract(int modes) {
  return ModeMap(Mat::Identity(modes, modes), 1.0, "modes(" + std::to_string(modes) + ")");
}

ModeMap ModeMap::plane_waves(const Grid& g, int modes) {
  const auto n = g.size();
  if (modes < 1 || static_cast<std::size_t>(modes) > n)
    throw DimensionError("plane-wave mode count out of range");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return g.momentum_norm2(a) < g.momentum_norm2(b);
  });
  Mat basis(static_cast<Eigen::Index>(n), modes);
  const double norm = 1.0 / std::sqrt(g.cell_volume() * static_cast<double>(n));
  for (int j = 0; j < modes; ++j) {
    const auto xi = g.momentum(order[static_cast<std::size_t>(j)]);
    for (std::size_t i = 0; i < n; ++i) {
      const auto x = g.position(i);
      const double ph = xi[0] * x[0] + xi[1] * x[1] + xi[2] * x[2];
      basis(static_cast<Eigen::Index>(i), j) = std::polar(norm, ph);
    }
  }
  return ModeMap(std::move(basis), g.cell_volume(), "planewaves(" + std::to_string(modes) + ")");
}

ModeMap::Projection ModeMap::project(const Vec& f) const {
  if (f.size() != basis_.rows())
    throw DimensionError("function length does not match the mode map");
  Vec c = basis_.adjoint() * f * weight_;
  const double res = std::sqrt((f - basis_ * c).squaredNorm() * weight_);
  return {std::move(c), res};
}

double ModeMap::orthonormality_defect() const {
  Mat gram = basis_.adjoint() * basis_ * weight_;
  return (gram - Mat::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

namespace {

void require_modes(const FockBasis& b, Eigen::Index n) {
  if (n != b.modes())
    throw DimensionError("mode count mismatch: " + std::to_string(n) + " coefficients for " +
                         std::to_string(b.modes()) + " modes");
}

}  // namespace

OperatorMatrix create(const FockBasis& b, const Vec& f) {
  require_modes(b, f.size());
  const auto n = static_cast<Eigen::Index>(b.dim());
  Mat a = Mat::Zero(n, n);
  for (const auto& e : b.creation_table())
    a(static_cast<Eigen::Index>(e.to), static_cast<Eigen::Index>(e.from)) += e.factor * f(e.mode);
  return OperatorMatrix(std::move(a), b.label(), Hermiticity::no);
}

OperatorMatrix annihilate(const FockBasis& b, const Vec& f) { return create(b, f).adjoint(); }

OperatorMatrix second_quantize(const FockBasis& b, const Mat& h) {
  if (h.rows() != b.modes() || h.cols() != b.modes())
    throw DimensionError("one-particle operator does not match the mode count");
  const auto n = static_cast<Eigen::Index>(b.dim());
  Mat out = Mat::Zero(n, n);
  const int M = b.modes();
  for (std::size_t s = 0; s < b.dim(); ++s) {
    const Occupation& occ = b.state(s);
    for (int j = 0; j < M; ++j) {
      if (occ[j] == 0) continue;
      Occupation down = occ;
      down[j] -= 1;
      const double fj = std::sqrt(static_cast<double>(occ[j]));
      for (int i = 0; i < M; ++i) {
        if (h(i, j) == cplx(0.0)) continue;
        Occupation up = down;
        up[i] += 1;
        const double fi = std::sqrt(static_cast<double>(up[i]));
        out(static_cast<Eigen::Index>(b.lookup(up)), static_cast<Eigen::Index>(s)) +=
            h(i, j) * fi * fj;
      }
    }
  }
  const bool herm = hermiticity_defect(h) == 0.0;
  return OperatorMatrix(std::move(out), b.label(), herm ? Hermiticity::yes : Hermiticity::unknown);
}

OperatorMatrix number_operator(const FockBasis& b) {
  const auto n = static_cast<Eigen::Index>(b.dim());
  Mat out = Mat::Zero(n, n);
  for (std::size_t s = 0; s < b.dim(); ++s)
    out(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s)) = b.sector_of(s);
  return OperatorMatrix(std::move(out), b.label(), Hermiticity::yes);
}

OperatorMatrix field(const FockBasis& b, const Vec& f) {
  const Mat ad = create(b, f).entries();
  return OperatorMatrix((ad + ad.adjoint()) / std::sqrt(2.0), b.label(), Hermiticity::yes);
}

OperatorMatrix momentum(const FockBasis& b, const Vec& f) {
  const Mat ad = create(b, f).entries();
  return OperatorMatrix((ad - ad.adjoint()) * cplx(0.0, 1.0 / std::sqrt(2.0)), b.label(),
                        Hermiticity::yes);
}

double coherent_tail(double mean, int n_max) {
  if (mean <= 0.0) return 0.0;
  // Σ_{k > N} e^{-μ} μ^k / k!, summed in log space from k = N+1 upward.
  double tail = 0.0;
  for (int k = n_max + 1; k < n_max + 400; ++k) {
    const double term = std::exp(-mean + k * std::log(mean) - std::lgamma(k + 1.0));
    tail += term;
    if (term < 1e-300 || (k > mean && term < 1e-18 * tail)) break;
  }
  return tail;
}

WeylOperator weyl(const FockBasis& b, const Vec& f) {
  const Mat pi = momentum(b, f).entries();
  Mat v = hermitian_function_complex(pi, [](double x) { return std::polar(1.0, x); });
  const double tau = std::max(1e-13, std::sqrt(coherent_tail(0.5 * f.squaredNorm(), b.n_max())));
  return {OperatorMatrix(std::move(v), b.label(), Hermiticity::no), tau};
}

double sector_residual(const Mat& r, const FockBasis& b, int max_sector, SectorNorm kind) {
  if (max_sector < 0) return 0.0;
  const auto k = static_cast<Eigen::Index>(b.dim_up_to(max_sector));
  if (kind == SectorNorm::compressed) return spectral_norm(r.topLeftCorner(k, k));
  return spectral_norm(r.leftCols(k));
}

double gross_check_static(const FockBasis& b, const Mat& omega, const Vec& rho,
                          const GrossStaticOptions& opt) {
  require_modes(b, rho.size());
  if (omega.rows() != b.modes() || omega.cols() != b.modes())
    throw DimensionError("omega does not match the mode count");
  if (hermiticity_defect(omega) > 1e-12) throw SpectralError("omega is not hermitian");
  const RVec ev = hermitian_eigenvalues(omega);
  if (ev.minCoeff() <= 0.0)
    throw SpectralError("omega is not positive definite (min eigenvalue " +
                        format_double(ev.minCoeff()) + ")");
  const Mat w_m12 = hermitian_function(omega, [](double x) { return 1.0 / std::sqrt(x); });
  const Mat w_m32 = hermitian_function(omega, [](double x) { return std::pow(x, -1.5); });
  const Mat w_m1 = hermitian_function(omega, [](double x) { return 1.0 / x; });

  const Vec coupling = w_m12 * rho;
  const Vec f = -(w_m32 * rho);
  const Mat dg = second_quantize(b, omega).entries();
  const Mat h = dg + field(b, coupling).entries();
  const Mat v = weyl(b, f).V.entries();
  const double shift = 0.5 * (w_m1 * rho).squaredNorm();
  const auto n = static_cast<Eigen::Index>(b.dim());
  const Mat r = v * h * v.adjoint() - dg + shift * Mat::Identity(n, n);
  const int top = opt.max_sector >= 0 ? opt.max_sector : b.n_max() - opt.safe_offset;
  return sector_residual(r, b, top, opt.norm);
}

AcNormReport verify_ac_norm_estimates(const FockBasis& b, const Mat& h, const Vec& f,
                                      const Vec& g, double alpha, const Vec& psi, double tol) {
  require_modes(b, f.size());
  require_modes(b, g.size());
  if (h.rows() != b.modes() || h.cols() != b.modes())
    throw DimensionError("h does not match the mode count");
  if (psi.size() != static_cast<Eigen::Index>(b.dim()))
    throw DimensionError("state does not match the Fock dimension");
  if (alpha < 0.5) throw PreconditionError("alpha must be at least 1/2");
  const RVec ev = hermitian_eigenvalues(h);
  if (ev.minCoeff() < 1.0 - 1e-12)
    throw PreconditionError("h has eigenvalue " + format_double(ev.minCoeff()) +
                            " < 1; rescale before calling");

  const Mat h_ma = hermitian_function(h, [&](double x) { return std::pow(x, -alpha); });
  const Mat h_ma2 = hermitian_function(h, [&](double x) { return std::pow(x, -0.5 * alpha); });
  const Mat dg = second_quantize(b, h).entries();
  const Mat dg_a = hermitian_function(dg, [&](double x) { return std::pow(std::max(x, 0.0), alpha); });
  const double dg_psi = (dg_a * psi).norm();

  const Mat af = annihilate(b, f).entries();
  const Mat ag = annihilate(b, g).entries();
  const Mat cf = create(b, f).entries();
  RVec n_inv(static_cast<Eigen::Index>(b.dim()));
  for (std::size_t s = 0; s < b.dim(); ++s)
    n_inv(static_cast<Eigen::Index>(s)) = 1.0 / std::sqrt(b.sector_of(s) + 1.0);

  AcNormReport rep;
  rep.lhs[0] = (af * psi).norm();
  rep.rhs[0] = (h_ma * f).norm() * dg_psi;
  rep.lhs[1] = (cf * psi).norm();
  rep.rhs[1] = (h_ma * f).norm() * dg_psi + f.norm() * psi.norm();
  rep.lhs[2] = (n_inv.cast<cplx>().asDiagonal() * (af * (ag * psi))).norm();
  rep.rhs[2] = (h_ma2 * f).norm() * (h_ma2 * g).norm() * dg_psi;
  for (int i = 0; i < 3; ++i)
    if (rep.lhs[i] > rep.rhs[i] + tol) ++rep.violations;
  return rep;
}

}  // namespace nelsonlab
