#pragma once

#include "sqn/types.hpp"

namespace sqn {

/// ‖M*M − MM*‖_F. Zero exactly on normal matrices; unitarily invariant.
inline double normality_defect(const ComplexMatrix& m) {
  require_square_finite(m, "matrix");
  return (m.adjoint() * m - m * m.adjoint()).norm();
}

inline double normality_defect(const RealMatrix& m) {
  require_square_finite(m, "matrix");
  return (m.transpose() * m - m * m.transpose()).norm();
}

/// Defect test relative to max(1, ‖M‖_F²); the defect itself is quadratic in
/// the matrix scale.
inline bool is_normal(const ComplexMatrix& m,
                      const ToleranceConfig& cfg = {}) {
  return normality_defect(m) <= cfg.normality_tol * scale_floor(frob(m) * frob(m));
}

/// Defect of A², the quantity the squared-normal test thresholds.
inline double squared_normality_defect(const ComplexMatrix& a) {
  require_square_finite(a, "matrix");
  return normality_defect(ComplexMatrix(a * a));
}

inline double squared_normality_defect(const RealMatrix& a) {
  require_square_finite(a, "matrix");
  return normality_defect(RealMatrix(a * a));
}

/// A is squared-normal when A² is normal. The defect of A² is quartic in the
/// scale of A, so the threshold is relative to max(1, ‖A‖_F⁴).
inline bool is_squared_normal(const ComplexMatrix& a,
                              const ToleranceConfig& cfg = {}) {
  const double s = frob(a);
  return squared_normality_defect(a) <=
         cfg.normality_tol * scale_floor(s * s * s * s);
}

inline bool is_squared_normal(const RealMatrix& a,
                              const ToleranceConfig& cfg = {}) {
  const double s = frob(a);
  return squared_normality_defect(a) <=
         cfg.normality_tol * scale_floor(s * s * s * s);
}

}  // namespace sqn
