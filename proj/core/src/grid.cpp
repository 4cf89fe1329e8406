#include "nelsonlab/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "nelsonlab/errors.hpp"

namespace nelsonlab {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

std::size_t ipow(int base, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= static_cast<std::size_t>(base);
  return r;
}

struct PlanCache {
  std::mutex mutex;
  std::map<std::tuple<std::vector<int>, int, int>, fftw_plan> plans;

  ~PlanCache() {
    for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
  }

  fftw_plan get(const std::vector<int>& shape, int howmany, int sign) {
    std::lock_guard<std::mutex> lock(mutex);
    auto key = std::make_tuple(shape, howmany, sign);
    auto it = plans.find(key);
    if (it != plans.end()) return it->second;
    std::size_t block = 1;
    for (int s : shape) block *= static_cast<std::size_t>(s);
    auto* scratch = fftw_alloc_complex(block * static_cast<std::size_t>(howmany));
    fftw_plan p = fftw_plan_many_dft(static_cast<int>(shape.size()), shape.data(), howmany,
                                     scratch, nullptr, 1, static_cast<int>(block), scratch,
                                     nullptr, 1, static_cast<int>(block), sign,
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    if (!p) throw Error("FFTW plan creation failed");
    plans.emplace(key, p);
    return p;
  }
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

}  // namespace

void fft_inplace(cplx* data, const std::vector<int>& shape, int howmany, int sign) {
  fftw_plan p = plan_cache().get(shape, howmany, sign == -1 ? FFTW_FORWARD : FFTW_BACKWARD);
  auto* ptr = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(p, ptr, ptr);
}

Grid::Grid(int d, int L, double box) : d_(d), L_(L), box_(box) {
  if (d < 1 || d > 3) throw DimensionError("grid dimension must be 1, 2 or 3");
  if (!is_power_of_two(L) || L < 2) throw DimensionError("points per axis must be a power of two");
  if (!(box > 0.0)) throw DomainError("box length must be positive");
  n_ = ipow(L, d);
}

double Grid::momentum_step() const { return 2.0 * kPi / box_; }
double Grid::cell_volume() const { return std::pow(spacing(), d_); }
double Grid::dual_volume() const { return std::pow(momentum_step(), d_); }
double Grid::nyquist() const { return kPi * L_ / box_; }

LatticeIndex Grid::coords(std::size_t idx) const {
  LatticeIndex k{0, 0, 0};
  for (int a = d_ - 1; a >= 0; --a) {
    k[a] = static_cast<int>(idx % L_);
    idx /= L_;
  }
  return k;
}

std::size_t Grid::index(const LatticeIndex& k) const {
  std::size_t idx = 0;
  for (int a = 0; a < d_; ++a) {
    const int c = ((k[a] % L_) + L_) % L_;
    idx = idx * L_ + static_cast<std::size_t>(c);
  }
  return idx;
}

Point Grid::position(std::size_t idx) const {
  const auto k = coords(idx);
  Point x{0, 0, 0};
  for (int a = 0; a < d_; ++a) x[a] = k[a] * spacing();
  return x;
}

Point Grid::momentum(std::size_t idx) const {
  const auto k = coords(idx);
  Point xi{0, 0, 0};
  for (int a = 0; a < d_; ++a) xi[a] = centered(k[a]) * momentum_step();
  return xi;
}

double Grid::momentum_norm2(std::size_t idx) const {
  const auto xi = momentum(idx);
  return xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
}

std::size_t Grid::snap(const Point& x) const {
  LatticeIndex k{0, 0, 0};
  for (int a = 0; a < d_; ++a) k[a] = static_cast<int>(std::ceil(x[a] / spacing() - 0.5));
  return index(k);
}

std::size_t Grid::translate(std::size_t idx, std::size_t shift) const {
  auto a = coords(idx);
  const auto b = coords(shift);
  for (int i = 0; i < d_; ++i) a[i] += b[i];
  return index(a);
}

std::size_t Grid::negate(std::size_t idx) const {
  auto a = coords(idx);
  for (int i = 0; i < d_; ++i) a[i] = -a[i];
  return index(a);
}

LatticeFunction::LatticeFunction(Grid g, Vec v, Space s)
    : grid(std::move(g)), values(std::move(v)), space(s) {
  if (static_cast<std::size_t>(values.size()) != grid.size())
    throw DimensionError("lattice function length " + std::to_string(values.size()) +
                         " does not match grid size " + std::to_string(grid.size()));
}

LatticeFunction LatticeFunction::zeros(const Grid& g, Space s) {
  return LatticeFunction(g, Vec::Zero(static_cast<Eigen::Index>(g.size())), s);
}

LatticeFunction LatticeFunction::from(const Grid& g, const std::function<cplx(const Point&)>& f) {
  Vec v(static_cast<Eigen::Index>(g.size()));
  for (std::size_t i = 0; i < g.size(); ++i) v(static_cast<Eigen::Index>(i)) = f(g.position(i));
  return LatticeFunction(g, std::move(v));
}

double LatticeFunction::weight() const {
  return space == Space::position ? grid.cell_volume() : grid.dual_volume();
}

namespace {
void require_compatible(const LatticeFunction& a, const LatticeFunction& b) {
  if (a.grid != b.grid || a.space != b.space)
    throw DimensionError("lattice functions live on different grids or representations");
}
}  // namespace

cplx LatticeFunction::inner(const LatticeFunction& o) const {
  require_compatible(*this, o);
  return values.dot(o.values) * weight();
}

double LatticeFunction::norm() const { return std::sqrt(values.squaredNorm() * weight()); }

LatticeFunction LatticeFunction::operator+(const LatticeFunction& o) const {
  require_compatible(*this, o);
  return LatticeFunction(grid, values + o.values, space);
}

LatticeFunction LatticeFunction::operator-(const LatticeFunction& o) const {
  require_compatible(*this, o);
  return LatticeFunction(grid, values - o.values, space);
}

LatticeFunction LatticeFunction::operator*(cplx s) const {
  return LatticeFunction(grid, values * s, space);
}

namespace {
std::vector<int> shape_of(const Grid& g) { return std::vector<int>(g.dim(), g.points()); }
}  // namespace

LatticeFunction dft(const LatticeFunction& u) {
  if (u.space != Space::position) throw DomainError("dft expects a position-space function");
  Vec v = u.values;
  fft_inplace(v.data(), shape_of(u.grid), 1, -1);
  v *= std::pow(2.0 * kPi, -0.5 * u.grid.dim()) * u.grid.cell_volume();
  return LatticeFunction(u.grid, std::move(v), Space::momentum);
}

LatticeFunction idft(const LatticeFunction& u) {
  if (u.space != Space::momentum) throw DomainError("idft expects a momentum-space function");
  Vec v = u.values;
  fft_inplace(v.data(), shape_of(u.grid), 1, +1);
  v *= std::pow(2.0 * kPi, -0.5 * u.grid.dim()) * u.grid.dual_volume();
  return LatticeFunction(u.grid, std::move(v), Space::position);
}

double sobolev_norm(const LatticeFunction& u, double s) {
  const LatticeFunction uh = u.space == Space::position ? dft(u) : u;
  const Grid& g = u.grid;
  double acc = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double jp2 = 1.0 + g.momentum_norm2(k);
    acc += std::pow(jp2, s) * std::norm(uh.values(static_cast<Eigen::Index>(k)));
  }
  return std::sqrt(acc * g.dual_volume());
}

double profile_hat(double xi_norm2_over_lambda2) { return std::exp(-0.5 * xi_norm2_over_lambda2); }

void check_nyquist(const Grid& g, double lambda, double nyquist_factor) {
  const double guard = nyquist_factor * g.nyquist();
  if (lambda > guard)
    throw ResolutionError("nyquist guard: Lambda = " + format_double(lambda) + " exceeds " +
                          format_double(nyquist_factor) + " * pi * L / box = " +
                          format_double(guard) + " (L = " + std::to_string(g.points()) +
                          ", box = " + format_double(g.box()) + ")");
}

double infrared_chi(double xi_norm, double sigma) {
  if (sigma <= 0.0) return 1.0;
  if (xi_norm <= sigma) return 0.0;
  if (xi_norm >= 2.0 * sigma) return 1.0;
  return 0.5 * (1.0 - std::cos(kPi * (xi_norm - sigma) / sigma));
}

LatticeFunction cutoff_function(const Grid& g, double lambda, std::size_t X,
                                const CutoffOptions& opt) {
  if (lambda < 0.0) throw DomainError("cutoff scale must be nonnegative");
  if (X >= g.size()) throw DimensionError("cutoff centre outside the grid");
  if (lambda == 0.0 && opt.sigma <= 0.0) return delta_function(g, X);
  if (lambda > 0.0) check_nyquist(g, lambda, opt.nyquist_factor);
  // ρ(x) = ℓ^{-d} Σ_k ρ̂_k e^{iξ_k(x−X)}: build the k-sum at X = 0, then translate.
  Vec spec(static_cast<Eigen::Index>(g.size()));
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double xi2 = g.momentum_norm2(k);
    const double hat = lambda == 0.0 ? 1.0 : profile_hat(xi2 / (lambda * lambda));
    spec(static_cast<Eigen::Index>(k)) = hat * infrared_chi(std::sqrt(xi2), opt.sigma);
  }
  fft_inplace(spec.data(), shape_of(g), 1, +1);
  spec *= std::pow(g.box(), -g.dim());
  for (Eigen::Index i = 0; i < spec.size(); ++i) spec(i) = spec(i).real();
  return translate(LatticeFunction(g, std::move(spec)), X);
}

LatticeFunction delta_function(const Grid& g, std::size_t X) {
  if (X >= g.size()) throw DimensionError("delta centre outside the grid");
  auto f = LatticeFunction::zeros(g);
  f.values(static_cast<Eigen::Index>(X)) = 1.0 / g.cell_volume();
  return f;
}

Mat spectral_derivative(const Grid& g, int axis, bool flip_nyquist) {
  if (axis < 0 || axis >= g.dim()) throw DimensionError("derivative axis out of range");
  const auto n = static_cast<Eigen::Index>(g.size());
  Vec symbol(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto c = g.coords(static_cast<std::size_t>(k));
    int m = g.centered(c[axis]);
    if (flip_nyquist && m == -g.points() / 2) m = -m;
    symbol(k) = m * g.momentum_step();
  }
  // D = F^{-1} diag(ξ) F with F the unnormalized DFT; columns of F^{-1} diag F e_j.
  Mat d(n, n);
  const auto shape = shape_of(g);
  Vec col(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    col.setZero();
    col(j) = 1.0;
    fft_inplace(col.data(), shape, 1, -1);
    col = col.cwiseProduct(symbol);
    fft_inplace(col.data(), shape, 1, +1);
    d.col(j) = col / static_cast<double>(n);
  }
  return d;
}

LatticeFunction translate(const LatticeFunction& u, std::size_t shift) {
  auto out = LatticeFunction::zeros(u.grid, u.space);
  if (u.space != Space::position) throw DomainError("translate expects a position-space function");
  for (std::size_t i = 0; i < u.grid.size(); ++i)
    out.values(static_cast<Eigen::Index>(u.grid.translate(i, shift))) =
        u.values(static_cast<Eigen::Index>(i));
  return out;
}

}  // namespace nelsonlab
