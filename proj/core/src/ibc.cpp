#include "nelsonlab/ibc.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>

#include "nelsonlab/errors.hpp"
#include "nelsonlab/parallel.hpp"

namespace nelsonlab {

namespace {

struct SectorRange {
  Eigen::Index start;
  Eigen::Index size;
};

SectorRange sector_range(const FreeModel& m, int n) {
  const auto np = static_cast<Eigen::Index>(m.points());
  return {static_cast<Eigen::Index>(m.fock.sector_offset(n)) * np,
          static_cast<Eigen::Index>(m.fock.sector_size(n)) * np};
}

std::string label_of(const FreeModel& m) { return "nelson(" + m.fock.label() + ")"; }

}  // namespace

Mat creation_part(const FreeModel& m, double lambda) {
  const Mat phi = form_factor_table(m, lambda) / std::sqrt(2.0);
  return block_diagonal(m, [&](std::size_t x) {
    return create(m.fock, phi.row(static_cast<Eigen::Index>(x)).transpose()).entries();
  });
}

OperatorMatrix build_G(const FreeModel& m, double lambda, double shift) {
  const Mat h0 = free_hamiltonian(m).entries();
  const Mat astar = creation_part(m, lambda);
  Mat g = Mat::Zero(h0.rows(), h0.cols());
  for (int n = 1; n <= m.spec.n_max; ++n) {
    const auto r = sector_range(m, n);
    const Mat blk = h0.block(r.start, r.start, r.size, r.size) + shift * Mat::Identity(r.size, r.size);
    Eigen::LLT<Mat> llt(blk);
    if (llt.info() != Eigen::Success)
      throw SpectralError("H0 + " + format_double(shift) + " is not invertible on sector " +
                          std::to_string(n) + "; record a positive shift");
    g.middleRows(r.start, r.size) = -llt.solve(astar.middleRows(r.start, r.size));
  }
  return OperatorMatrix(std::move(g), label_of(m), Hermiticity::no);
}

std::vector<double> sector_norms(const Mat& G, const FockBasis& b, std::size_t points) {
  const auto np = static_cast<Eigen::Index>(points);
  if (G.rows() != static_cast<Eigen::Index>(b.dim()) * np) throw DimensionError("G does not match the basis");
  std::vector<double> out;
  for (int n = 1; n <= b.n_max(); ++n) {
    const auto r0 = static_cast<Eigen::Index>(b.sector_offset(n)) * np;
    const auto c0 = static_cast<Eigen::Index>(b.sector_offset(n - 1)) * np;
    out.push_back(spectral_norm(G.block(r0, c0, static_cast<Eigen::Index>(b.sector_size(n)) * np,
                                        static_cast<Eigen::Index>(b.sector_size(n - 1)) * np)));
  }
  return out;
}

double fitted_decay_exponent(const std::vector<double>& norms) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < norms.size(); ++i)
    if (norms[i] > 0.0) {
      x.push_back(std::log(static_cast<double>(i + 1)));
      y.push_back(std::log(norms[i]));
    }
  if (x.size() < 2) throw PreconditionError("decay fit needs two nonzero sector norms");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i] / n, my += y[i] / n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sxy += (x[i] - mx) * (y[i] - my), sxx += (x[i] - mx) * (x[i] - mx);
  return -sxy / sxx;
}

NeumannInverse invert_one_minus_G(const OperatorMatrix& G) {
  const Mat& g = G.entries();
  const auto n = g.rows();
  Mat sum = Mat::Identity(n, n);
  Mat term = Mat::Identity(n, n);
  NeumannInverse out{OperatorMatrix(), 1, 0.0, {}};
  for (Eigen::Index k = 1; k <= n; ++k) {
    term = term * g;
    if (term.cwiseAbs().maxCoeff() == 0.0) {
      out.tail = 0.0;
      break;
    }
    sum += term;
    ++out.terms;
    out.tail = spectral_norm(term);
    out.power_norms.push_back(out.tail);
  }
  out.inverse = OperatorMatrix(std::move(sum), G.rows(), G.cols(), Hermiticity::no);
  return out;
}

bool log_concave(const std::vector<double>& norms, double tol) {
  for (std::size_t k = 2; k < norms.size(); ++k) {
    if (norms[k] <= 0.0) return true;
    if (std::log(norms[k]) - 2.0 * std::log(norms[k - 1]) + std::log(norms[k - 2]) > tol) return false;
  }
  return true;
}

IbcOperators build_ibc(const FreeModel& m, double lambda, double shift) {
  OperatorMatrix g = build_G(m, lambda, shift);
  const Mat astar = creation_part(m, lambda);
  Mat t = astar.adjoint() * g.entries();
  const Mat h0 = free_hamiltonian(m).entries() + shift * Mat::Identity(g.size(), g.size());
  const Mat omg = Mat::Identity(g.size(), g.size()) - g.entries();
  const RVec e = vacuum_energy(m, lambda);
  Mat h = omg.adjoint() * h0 * omg + t + particle_lift(m, e.cast<cplx>().asDiagonal().toDenseMatrix()) -
          shift * Mat::Identity(g.size(), g.size());
  h = 0.5 * (h + h.adjoint());
  NeumannInverse inv = invert_one_minus_G(g);
  return IbcOperators{lambda,
                      shift,
                      std::move(g),
                      OperatorMatrix(std::move(t), label_of(m), Hermiticity::unknown),
                      OperatorMatrix(std::move(h), label_of(m), Hermiticity::yes),
                      std::move(inv)};
}

FactorizationReport factorization_residual(const FreeModel& m, const IbcOperators& ops,
                                           const Mat& h_lambda, double h0_shift) {
  if (h0_shift != ops.shift)
    throw ContractError("shift mismatch: G built with " + format_double(ops.shift) +
                        ", identity evaluated with " + format_double(h0_shift));
  const auto n = h_lambda.rows();
  const Mat id = Mat::Identity(n, n);
  const Mat omg = id - ops.G.entries();
  const Mat h0 = free_hamiltonian(m).entries() + h0_shift * id;
  const Mat diff = h_lambda + h0_shift * id - (omg.adjoint() * h0 * omg + ops.T.entries());
  const auto k = static_cast<Eigen::Index>(m.fock.dim_up_to(m.spec.n_max - 1) * m.points());
  FactorizationReport r;
  r.residual = spectral_norm(diff.topLeftCorner(k, k));
  r.relative = r.residual / spectral_norm(h_lambda.topLeftCorner(k, k));
  r.residual_full = spectral_norm(diff);
  r.shift = h0_shift;
  return r;
}

FactorizationReport factorization_identity_check(const FreeModel& m, double lambda, double shift) {
  const IbcOperators ops = build_ibc(m, lambda, shift);
  return factorization_residual(m, ops, assemble_cutoff_hamiltonian(m, lambda).entries(), shift);
}

OperatorMatrix ibc_hamiltonian(const FreeModel& m, double lambda, double shift) {
  return build_ibc(m, lambda, shift).H_ibc;
}

std::vector<double> structured_sector_norms(const FreeModel& m, const Mat& phi, double p, double shift) {
  const auto np = static_cast<Eigen::Index>(m.points());
  const int modes = m.spec.modes;
  if (phi.rows() != np || phi.cols() != modes) throw DimensionError("form factor table has the wrong shape");
  Eigen::SelfAdjointEigenSolver<Mat> es(m.K);
  const RVec& k = es.eigenvalues();
  const Mat& u = es.eigenvectors();
  std::vector<Mat> mj;
  mj.reserve(static_cast<std::size_t>(modes));
  for (int j = 0; j < modes; ++j) mj.push_back(u.adjoint() * phi.col(j).asDiagonal() * u);
  const Mat& dg = m.dgamma.entries();

  // Ladders grouped by target state.
  std::vector<std::vector<const FockBasis::Ladder*>> into(m.fock.dim());
  for (const auto& l : m.fock.creation_table()) into[l.to].push_back(&l);

  std::vector<double> out;
  for (int n = 1; n <= m.spec.n_max; ++n) {
    const std::size_t prev0 = m.fock.sector_offset(n - 1);
    const auto prev_size = static_cast<Eigen::Index>(m.fock.sector_size(n - 1));
    if (static_cast<std::size_t>(prev_size * np) > kMaxTensorDim)
      throw SizeError("structured Gram of sector " + std::to_string(n - 1) + " has dimension " +
                      std::to_string(prev_size * np));
    Mat c = Mat::Zero(prev_size * np, prev_size * np);
    for (std::size_t f = m.fock.sector_offset(n); f < m.fock.sector_offset(n + 1); ++f) {
      const double ef = dg(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(f)).real();
      RVec w2(np);
      for (Eigen::Index a = 0; a < np; ++a) {
        const double e = k(a) + ef;
        if (e + shift <= 0.0 || (p != 0.0 && e < 0.0))
          throw SpectralError("H0 + " + format_double(shift) + " is not positive on sector " + std::to_string(n));
        const double w = std::pow(e, p) / (e + shift);
        w2(a) = w * w;
      }
      for (const auto* l1 : into[f])
        for (const auto* l2 : into[f]) {
          const auto i1 = static_cast<Eigen::Index>(l1->from - prev0);
          const auto i2 = static_cast<Eigen::Index>(l2->from - prev0);
          c.block(i1 * np, i2 * np, np, np) += 0.5 * l1->factor * l2->factor *
                                               mj[static_cast<std::size_t>(l1->mode)].adjoint() *
                                               w2.cast<cplx>().asDiagonal() * mj[static_cast<std::size_t>(l2->mode)];
        }
    }
    const RVec ev = hermitian_eigenvalues(0.5 * (c + c.adjoint()));
    out.push_back(std::sqrt(std::max(ev.maxCoeff(), 0.0)));
  }
  return out;
}

double domain_norm(const FreeModel& m, double lambda, double p, double shift) {
  const auto v = structured_sector_norms(m, form_factor_table(m, lambda), p, shift);
  return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

double domain_norm_dense(const FreeModel& m, double lambda, double p, double shift) {
  const Mat h0 = free_hamiltonian(m).entries();
  const Mat hp = hermitian_function(h0, [p](double x) { return std::pow(std::max(x, 0.0), p); });
  return spectral_norm(hp * build_G(m, lambda, shift).entries());
}

double G_difference_norm(const FreeModel& m, double lambda, double lambda_next, double shift) {
  const Mat d = form_factor_table(m, lambda_next) - form_factor_table(m, lambda);
  const auto v = structured_sector_norms(m, d, 0.0, shift);
  return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

DomainTable domain_regularity_experiment(const std::function<ModelSpec(int)>& make_spec,
                                         const std::vector<int>& points,
                                         const std::vector<double>& lambdas,
                                         const std::vector<double>& ps, double shift) {
  if (points.size() != lambdas.size() || points.empty())
    throw PreconditionError("refinement needs one cutoff per grid size");
  const auto norms = parallel_map<std::vector<double>>(points.size(), [&](std::size_t i) {
    ModelSpec s = make_spec(points[i]);
    s.lambda = lambdas[i];
    const FreeModel m = assemble_free(s);
    const Mat phi = form_factor_table(m, lambdas[i]);
    std::vector<double> row;
    for (double p : ps) {
      const auto v = structured_sector_norms(m, phi, p, shift);
      row.push_back(*std::max_element(v.begin(), v.end()));
    }
    return row;
  });
  DomainTable t;
  t.ps = ps;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t q = 0; q < ps.size(); ++q) t.rows.push_back({points[i], lambdas[i], ps[q], norms[i][q]});
  for (std::size_t q = 0; q < ps.size(); ++q) {
    std::vector<double> g;
    for (std::size_t i = 1; i < points.size(); ++i) g.push_back(norms[i][q] / norms[i - 1][q]);
    t.growth.push_back(g);
    t.total_growth.push_back(norms.back()[q] / norms.front()[q]);
  }
  return t;
}

}  // namespace nelsonlab
