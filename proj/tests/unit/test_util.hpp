#pragma once

#include <random>

#include "nelsonlab/linalg.hpp"

namespace nelsonlab::test {

inline Vec random_vec(std::mt19937_64& rng, Eigen::Index n, double scale = 1.0) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = scale * cplx(nd(rng), nd(rng));
  return v;
}

inline RVec random_rvec(std::mt19937_64& rng, Eigen::Index n, double scale = 1.0) {
  std::normal_distribution<double> nd(0.0, 1.0);
  RVec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = scale * nd(rng);
  return v;
}

inline Mat random_mat(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Mat m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = cplx(nd(rng), nd(rng));
  return m;
}

inline Mat random_hermitian(std::mt19937_64& rng, Eigen::Index n) {
  Mat a = random_mat(rng, n, n);
  return 0.5 * (a + a.adjoint());
}

}  // namespace nelsonlab::test
