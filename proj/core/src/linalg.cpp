#include "nelsonlab/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "nelsonlab/errors.hpp"

namespace nelsonlab {

OperatorMatrix::OperatorMatrix(Mat entries, std::string rows, std::string cols, Hermiticity h)
    : m_(std::move(entries)), rows_(std::move(rows)), cols_(std::move(cols)), herm_(h) {
  if (herm_ == Hermiticity::yes && (m_.rows() != m_.cols() || rows_ != cols_))
    throw DimensionError("hermitian operator must be square on a single space");
}

OperatorMatrix::OperatorMatrix(Mat entries, std::string space, Hermiticity h)
    : OperatorMatrix(std::move(entries), space, space, h) {
  if (m_.rows() != m_.cols()) throw DimensionError("operator on " + rows_ + " is not square");
}

OperatorMatrix OperatorMatrix::adjoint() const {
  return OperatorMatrix(m_.adjoint(), cols_, rows_, herm_);
}

void OperatorMatrix::check_hermitian(double tol) const {
  if (herm_ != Hermiticity::yes) return;
  const double defect = hermiticity_defect(m_);
  if (defect > tol)
    throw ContractError("operator on " + rows_ + " declared hermitian but defect is " +
                        format_double(defect));
}

OperatorMatrix OperatorMatrix::with_hermiticity(Hermiticity h) const {
  return OperatorMatrix(m_, rows_, cols_, h);
}

namespace {

Hermiticity combine_sum(Hermiticity a, Hermiticity b) {
  if (a == Hermiticity::yes && b == Hermiticity::yes) return Hermiticity::yes;
  return Hermiticity::unknown;
}

void require_same(const std::string& a, const std::string& b, const char* what) {
  if (a != b) throw DimensionError(std::string(what) + ": space mismatch " + a + " vs " + b);
}

}  // namespace

OperatorMatrix OperatorMatrix::operator+(const OperatorMatrix& o) const {
  require_same(rows_, o.rows_, "sum");
  require_same(cols_, o.cols_, "sum");
  return OperatorMatrix(m_ + o.m_, rows_, cols_, combine_sum(herm_, o.herm_));
}

OperatorMatrix OperatorMatrix::operator-(const OperatorMatrix& o) const {
  require_same(rows_, o.rows_, "difference");
  require_same(cols_, o.cols_, "difference");
  return OperatorMatrix(m_ - o.m_, rows_, cols_, combine_sum(herm_, o.herm_));
}

OperatorMatrix OperatorMatrix::operator*(const OperatorMatrix& o) const {
  require_same(cols_, o.rows_, "product");
  return OperatorMatrix(m_ * o.m_, rows_, o.cols_, Hermiticity::unknown);
}

OperatorMatrix OperatorMatrix::operator*(cplx s) const {
  const Hermiticity h =
      (herm_ == Hermiticity::yes && s.imag() == 0.0) ? Hermiticity::yes : Hermiticity::unknown;
  return OperatorMatrix(m_ * s, rows_, cols_, h);
}

double hermiticity_defect(const Mat& a) {
  if (a.rows() != a.cols()) throw DimensionError("hermiticity of a non-square matrix");
  if (a.size() == 0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

double spectral_norm(const Mat& a) {
  if (a.size() == 0) return 0.0;
  // Eigenvalues of the smaller Gram matrix; sqrt of round-off is acceptable at the
  // tolerances used here (relative 1e-8 of the norm squared).
  Mat gram = a.rows() >= a.cols() ? Mat(a.adjoint() * a) : Mat(a * a.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

RVec hermitian_eigenvalues(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(a, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw SpectralError("hermitian eigensolver failed");
  return es.eigenvalues();
}

Mat hermitian_function_complex(const Mat& a, const std::function<cplx(double)>& f) {
  Eigen::SelfAdjointEigenSolver<Mat> es(a);
  if (es.info() != Eigen::Success) throw SpectralError("hermitian eigensolver failed");
  const Mat& u = es.eigenvectors();
  Vec fl(a.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) fl(i) = f(es.eigenvalues()(i));
  return u * fl.asDiagonal() * u.adjoint();
}

Mat hermitian_function(const Mat& a, const std::function<double(double)>& f) {
  return hermitian_function_complex(a, [&](double x) { return cplx(f(x), 0.0); });
}

RMat symmetric_function(const RMat& a, const std::function<double(double)>& f) {
  Eigen::SelfAdjointEigenSolver<RMat> es(a);
  if (es.info() != Eigen::Success) throw SpectralError("symmetric eigensolver failed");
  const RMat& u = es.eigenvectors();
  RVec fl(a.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) fl(i) = f(es.eigenvalues()(i));
  return u * fl.asDiagonal() * u.transpose();
}

Mat identity(Eigen::Index n) { return Mat::Identity(n, n); }

}  // namespace nelsonlab
