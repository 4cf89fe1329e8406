#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <string>

namespace nelsonlab {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

enum class Hermiticity { yes, no, unknown };

// Dense operator with row/column space labels. Labels are free-form strings such
// as "fock(M=8,N=2)" or "particle(L=8)xfock(M=8,N=2)"; arithmetic requires them
// to match.
class OperatorMatrix {
 public:
  OperatorMatrix() = default;
  OperatorMatrix(Mat entries, std::string rows, std::string cols,
                 Hermiticity h = Hermiticity::unknown);
  // Square operator on a single space.
  OperatorMatrix(Mat entries, std::string space, Hermiticity h = Hermiticity::unknown);

  const Mat& entries() const { return m_; }
  const std::string& rows() const { return rows_; }
  const std::string& cols() const { return cols_; }
  Hermiticity hermitian() const { return herm_; }
  Eigen::Index size() const { return m_.rows(); }

  OperatorMatrix adjoint() const;
  // Throws ContractError if declared hermitian but ‖A − A*‖_max > tol.
  void check_hermitian(double tol = 1e-10) const;
  OperatorMatrix with_hermiticity(Hermiticity h) const;

  OperatorMatrix operator+(const OperatorMatrix& o) const;
  OperatorMatrix operator-(const OperatorMatrix& o) const;
  OperatorMatrix operator*(const OperatorMatrix& o) const;
  OperatorMatrix operator*(cplx s) const;
  Vec operator*(const Vec& v) const { return m_ * v; }

 private:
  Mat m_;
  std::string rows_;
  std::string cols_;
  Hermiticity herm_ = Hermiticity::unknown;
};

double hermiticity_defect(const Mat& a);

// Largest singular value.
double spectral_norm(const Mat& a);

// Eigenvalues (ascending) of a hermitian matrix.
RVec hermitian_eigenvalues(const Mat& a);

// f(A) for hermitian A through its eigendecomposition.
Mat hermitian_function(const Mat& a, const std::function<double(double)>& f);
Mat hermitian_function_complex(const Mat& a, const std::function<cplx(double)>& f);

// Real symmetric variant.
RMat symmetric_function(const RMat& a, const std::function<double(double)>& f);

Mat identity(Eigen::Index n);

}  // namespace nelsonlab
