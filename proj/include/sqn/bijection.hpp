#pragma once

#include <cmath>

#include "sqn/types.hpp"

namespace sqn {

/// arg(z) mapped into [0, 2π).
inline double arg_2pi(Complex z) {
  double t = std::arg(z);
  if (t < 0) t += 2 * M_PI;
  return t;
}

/// Square root with arg(w) ∈ [0, π), i.e. halving arg(z) ∈ [0, 2π).
/// principal_sqrt(0) = 0. Real-axis inputs short-circuit so that squares of
/// real and purely imaginary values round-trip without angular dust.
inline Complex principal_sqrt(Complex z) {
  if (z.imag() == 0) {
    if (z.real() >= 0) return Complex(std::sqrt(z.real()), 0);
    return Complex(0, std::sqrt(-z.real()));
  }
  const double r = std::sqrt(std::abs(z));
  const double half = arg_2pi(z) / 2;
  return Complex(r * std::cos(half), r * std::sin(half));
}

/// Polar data of a coupled block: ρ = |μ|/r and φ = arg(μ) on one side,
/// χ = |ν| and ψ = arg(ν) on the other, linked by ρ = √χ/(1−χ) and φ = ψ/2.
struct PolarDecomp {
  double rho;
  double phi;
  double chi;
  double psi;
};

/// Solve ρ = √χ/(1−χ) for χ = s². The positive root of ρs² + s − ρ = 0 in the
/// cancellation-free form; s ∈ [0, 1) and s → 1 as ρ → ∞, s(0) = 0.
inline double coupling_root(double rho) {
  return 2 * rho / (1 + std::sqrt(1 + 4 * rho * rho));
}

inline PolarDecomp make_polar(Complex mu, double r) {
  PolarDecomp p{};
  p.rho = std::abs(mu) / r;
  p.phi = (mu == Complex(0, 0)) ? 0.0 : arg_2pi(mu);
  const double s = coupling_root(p.rho);
  p.chi = s * s;
  p.psi = 2 * p.phi;
  return p;
}

/// τ[[0,1],[ν,0]] ↦ τ[[√ν, 1−|ν|],[0, −√ν]]: the coupled block of the second
/// family mapped into the first. μ = τ√ν carries arg(μ) = arg(ν)/2 ∈ [0, π).
inline BlockS1 f_forward(const BlockS2& s2) {
  const Complex mu = s2.tau * principal_sqrt(s2.nu);
  const double r = s2.tau * (1 - std::abs(s2.nu));
  return BlockS1(mu, r);
}

/// Inverse of f_forward: from μ = τ√ν and r = τ(1−|ν|) recover ν = χe^{iψ}
/// with χ = s² from the quadratic root and τ = r/(1−χ). Exact for μ on the
/// real or imaginary axis.
inline BlockS2 f_inverse(const BlockS1& s1) {
  const PolarDecomp p = make_polar(s1.mu, s1.r);
  Complex nu;
  if (s1.mu.imag() == 0) {
    nu = Complex(p.chi, 0);  // ψ = 0
  } else if (s1.mu.real() == 0) {
    nu = Complex(-p.chi, 0);  // ψ = π
  } else {
    nu = p.chi * Complex(std::cos(p.psi), std::sin(p.psi));
  }
  const double tau = s1.r / (1 - p.chi);
  return BlockS2(nu, tau);
}

/// The explicit unitary S with N_{μ,r}·S = S·M_{ν,τ}:
/// S = (1/√(τ²+μμ̄))·[[τ, μ̄],[−μ, τ]]. Verifies the pair corresponds under f.
inline ComplexMatrix witness_S(const BlockS1& s1, const BlockS2& s2,
                               double tol = 1e-8) {
  const BlockS1 image = f_forward(s2);
  const double scale = 1.0 + std::max(std::abs(s1.mu), s1.r);
  if (std::abs(image.mu - s1.mu) > tol * scale ||
      std::abs(image.r - s1.r) > tol * scale)
    throw MismatchedPairError("witness_S: blocks do not correspond under f");
  const double norm = std::sqrt(s2.tau * s2.tau + std::norm(s1.mu));
  ComplexMatrix s(2, 2);
  s << Complex(s2.tau, 0), std::conj(s1.mu), -s1.mu, Complex(s2.tau, 0);
  return s / norm;
}

}  // namespace sqn
