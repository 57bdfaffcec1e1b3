#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "sqn/linalg.hpp"

namespace sqn {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

enum class ErrorCode {
  NotSquaredNormal,
  ClusterAmbiguity,
  NotInvolution,
  NotNilpotent,
  MismatchedPair,
  PairingFailure,
  DimensionMismatch,
  InvalidMatrix,
  IoError,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

class NotSquaredNormalError : public Error {
 public:
  NotSquaredNormalError(double defect, const std::string& which = "input")
      : Error(ErrorCode::NotSquaredNormal,
              which + " is not squared-normal (defect " +
                  std::to_string(defect) + ")"),
        defect_(defect),
        which_(which) {}
  double defect() const { return defect_; }
  const std::string& which() const { return which_; }

 private:
  double defect_;
  std::string which_;
};

class ClusterAmbiguityError : public Error {
 public:
  explicit ClusterAmbiguityError(const std::string& what)
      : Error(ErrorCode::ClusterAmbiguity, what) {}
};

class NotInvolutionError : public Error {
 public:
  explicit NotInvolutionError(const std::string& what)
      : Error(ErrorCode::NotInvolution, what) {}
};

class NotNilpotentError : public Error {
 public:
  explicit NotNilpotentError(const std::string& what)
      : Error(ErrorCode::NotNilpotent, what) {}
};

class MismatchedPairError : public Error {
 public:
  explicit MismatchedPairError(const std::string& what)
      : Error(ErrorCode::MismatchedPair, what) {}
};

class PairingFailureError : public Error {
 public:
  explicit PairingFailureError(const std::string& what)
      : Error(ErrorCode::PairingFailure, what) {}
};

class DimensionMismatchError : public Error {
 public:
  explicit DimensionMismatchError(const std::string& what)
      : Error(ErrorCode::DimensionMismatch, what) {}
};

class InvalidMatrixError : public Error {
 public:
  explicit InvalidMatrixError(const std::string& what)
      : Error(ErrorCode::InvalidMatrix, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCode::IoError, what) {}
};

/// Entry validation shared by every public operation taking a matrix.
template <typename Mat>
void require_square_finite(const Mat& m, const char* name) {
  if (!is_square(m))
    throw InvalidMatrixError(std::string(name) + " must be square");
  if (!all_finite(m))
    throw InvalidMatrixError(std::string(name) + " has non-finite entries");
}

// ---------------------------------------------------------------------------
// Tolerances
// ---------------------------------------------------------------------------

/// Knobs for every tolerance-sensitive decision. All defaults are relative
/// scales; the quantity each one multiplies is documented at the use site.
struct ToleranceConfig {
  double normality_tol = 1e-10;  // normality defect, relative to max(1, ‖·‖_F²)
  double cluster_tol = 1e-8;     // eigenvalue cluster link distance
  double rank_tol = 1e-10;       // numerical rank cutoff, relative to largest
  double witness_tol = 1e-12;    // unitarity defect allowed in a witness

  void validate() const {
    if (normality_tol <= 0 || cluster_tol <= 0 || rank_tol <= 0 ||
        witness_tol <= 0)
      throw std::invalid_argument("tolerances must be positive");
  }
};

// ---------------------------------------------------------------------------
// Canonical blocks
// ---------------------------------------------------------------------------

/// 1×1 block [λ].
struct BlockLambda {
  Complex lambda;

  explicit BlockLambda(Complex l = Complex(0, 0)) : lambda(l) {}
};

/// 2×2 block [[μ, r], [0, −μ]] with 0 ≤ arg(μ) < π (arg(0) := 0) and r > 0.
struct BlockS1 {
  Complex mu;
  double r;

  BlockS1(Complex mu_, double r_) : mu(mu_), r(r_) {
    const bool arg_ok =
        (mu == Complex(0, 0)) || mu.imag() > 0 ||
        (mu.imag() == 0 && mu.real() > 0);
    if (!arg_ok) throw std::invalid_argument("BlockS1: arg(mu) not in [0, pi)");
    if (!(r > 0)) throw std::invalid_argument("BlockS1: r must be positive");
  }
};

/// 2×2 block τ[[0, 1], [ν, 0]] with |ν| < 1 and τ > 0.
struct BlockS2 {
  Complex nu;
  double tau;

  BlockS2(Complex nu_, double tau_) : nu(nu_), tau(tau_) {
    if (!(std::abs(nu) < 1)) throw std::invalid_argument("BlockS2: |nu| >= 1");
    if (!(tau > 0)) throw std::invalid_argument("BlockS2: tau must be positive");
  }
};

/// 2×2 real block [[a, −b], [b, a]] with b > 0.
struct BlockRealRotation {
  double a;
  double b;

  BlockRealRotation(double a_, double b_) : a(a_), b(b_) {
    if (!(b > 0))
      throw std::invalid_argument("BlockRealRotation: b must be positive");
  }
};

/// 4×4 real block τ[[0,0,1,0],[0,0,0,1],[c,−d,0,0],[d,c,0,0]]
/// with d > 0, c² + d² < 1, τ > 0.
struct BlockRealS2Pair {
  double c;
  double d;
  double tau;

  BlockRealS2Pair(double c_, double d_, double tau_) : c(c_), d(d_), tau(tau_) {
    if (!(d > 0))
      throw std::invalid_argument("BlockRealS2Pair: d must be positive");
    if (!(c * c + d * d < 1))
      throw std::invalid_argument("BlockRealS2Pair: c^2 + d^2 >= 1");
    if (!(tau > 0))
      throw std::invalid_argument("BlockRealS2Pair: tau must be positive");
  }
};

using CanonicalBlock = std::variant<BlockLambda, BlockS1, BlockS2,
                                    BlockRealRotation, BlockRealS2Pair>;

inline Index block_dim(const CanonicalBlock& b) {
  struct V {
    Index operator()(const BlockLambda&) const { return 1; }
    Index operator()(const BlockS1&) const { return 2; }
    Index operator()(const BlockS2&) const { return 2; }
    Index operator()(const BlockRealRotation&) const { return 2; }
    Index operator()(const BlockRealS2Pair&) const { return 4; }
  };
  return std::visit(V{}, b);
}

/// Type precedence of the canonical order. Lower sorts first.
inline int block_type_rank(const CanonicalBlock& b) {
  return static_cast<int>(b.index());
}

/// Per-type parameter key; components compared in descending order.
inline std::array<double, 3> block_sort_params(const CanonicalBlock& b) {
  struct V {
    std::array<double, 3> operator()(const BlockLambda& l) const {
      return {l.lambda.real(), l.lambda.imag(), 0.0};
    }
    std::array<double, 3> operator()(const BlockS1& s) const {
      return {s.mu.real(), s.mu.imag(), s.r};
    }
    std::array<double, 3> operator()(const BlockS2& s) const {
      return {s.nu.real(), s.nu.imag(), s.tau};
    }
    std::array<double, 3> operator()(const BlockRealRotation& r) const {
      return {r.a, r.b, 0.0};
    }
    std::array<double, 3> operator()(const BlockRealS2Pair& p) const {
      return {p.c, p.d, p.tau};
    }
  };
  return std::visit(V{}, b);
}

/// Strict weak order: type rank ascending, then parameters descending.
inline bool block_before(const CanonicalBlock& a, const CanonicalBlock& b) {
  const int ra = block_type_rank(a), rb = block_type_rank(b);
  if (ra != rb) return ra < rb;
  const auto pa = block_sort_params(a), pb = block_sort_params(b);
  for (int i = 0; i < 3; ++i) {
    if (pa[i] != pb[i]) return pa[i] > pb[i];
  }
  return false;
}

// ---------------------------------------------------------------------------
// Canonical forms
// ---------------------------------------------------------------------------

enum class Flavor { ComplexA, ComplexB, Real };

/// A direct sum of canonical blocks together with the family it belongs to.
/// complex-A admits Lambda/S1 blocks, complex-B admits Lambda/S2, real admits
/// Lambda (real λ), S2 (real ν), RealRotation and RealS2Pair.
struct CanonicalForm {
  std::vector<CanonicalBlock> blocks;
  Flavor flavor = Flavor::ComplexA;

  Index total_dim() const {
    Index n = 0;
    for (const auto& b : blocks) n += block_dim(b);
    return n;
  }
};

inline const char* flavor_name(Flavor f) {
  switch (f) {
    case Flavor::ComplexA: return "a";
    case Flavor::ComplexB: return "b";
    case Flavor::Real: return "real";
  }
  return "?";
}

/// Throws std::invalid_argument when a block is illegal for the form's flavor.
inline void validate_form(const CanonicalForm& form) {
  for (const auto& b : form.blocks) {
    const int rank = block_type_rank(b);
    switch (form.flavor) {
      case Flavor::ComplexA:
        if (rank > 1)
          throw std::invalid_argument("complex-A form admits Lambda/S1 only");
        break;
      case Flavor::ComplexB:
        if (rank != 0 && rank != 2)
          throw std::invalid_argument("complex-B form admits Lambda/S2 only");
        break;
      case Flavor::Real:
        if (rank == 1)
          throw std::invalid_argument("real form admits no S1 blocks");
        if (rank == 0 && std::get<BlockLambda>(b).lambda.imag() != 0)
          throw std::invalid_argument("real form requires real lambda");
        if (rank == 2 && std::get<BlockS2>(b).nu.imag() != 0)
          throw std::invalid_argument("real form requires real nu");
        break;
    }
  }
}

}  // namespace sqn
