#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>

namespace sqn {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

inline double frob(const ComplexMatrix& m) { return m.norm(); }
inline double frob(const RealMatrix& m) { return m.norm(); }

/// max(1, x) scale guard used by every relative tolerance in the library.
inline double scale_floor(double x) { return std::max(1.0, x); }

template <typename Mat>
bool is_square(const Mat& m) {
  return m.rows() == m.cols();
}

template <typename Mat>
bool all_finite(const Mat& m) {
  return m.allFinite();
}

/// ‖U*U − I‖_F, the unitarity (or orthogonality) defect.
template <typename Mat>
double unitarity_defect(const Mat& u) {
  Mat g = u.adjoint() * u;
  g -= Mat::Identity(u.cols(), u.cols());
  return g.norm();
}

/// Closest unitary (orthogonal) matrix in Frobenius norm: the polar factor UV*.
template <typename Mat>
Mat polar_factor(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

/// Orthonormal completion: columns spanning the complement of span(c).
/// c must have full column rank (its columns are near-orthonormal wherever
/// this is called).
template <typename Mat>
Mat orthonormal_complement(const Mat& c, Index n) {
  const Index k = c.cols();
  if (k == 0) return Mat::Identity(n, n);
  Eigen::HouseholderQR<Mat> qr(c);
  Mat q = qr.householderQ();
  return q.rightCols(n - k);
}

}  // namespace sqn
