#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "sqn/types.hpp"

namespace sqn {

/// Deterministic canonical order; idempotent. Identical inputs sort
/// identically, so equal forms assemble to equal matrices.
inline CanonicalForm sort_blocks(CanonicalForm form) {
  std::stable_sort(form.blocks.begin(), form.blocks.end(), block_before);
  return form;
}

inline ComplexMatrix block_matrix(const CanonicalBlock& block) {
  struct V {
    ComplexMatrix operator()(const BlockLambda& b) const {
      ComplexMatrix m(1, 1);
      m(0, 0) = b.lambda;
      return m;
    }
    ComplexMatrix operator()(const BlockS1& b) const {
      ComplexMatrix m = ComplexMatrix::Zero(2, 2);
      m(0, 0) = b.mu;
      m(0, 1) = Complex(b.r, 0);
      m(1, 1) = -b.mu;
      return m;
    }
    ComplexMatrix operator()(const BlockS2& b) const {
      ComplexMatrix m = ComplexMatrix::Zero(2, 2);
      m(0, 1) = Complex(b.tau, 0);
      m(1, 0) = b.tau * b.nu;
      return m;
    }
    ComplexMatrix operator()(const BlockRealRotation& b) const {
      ComplexMatrix m(2, 2);
      m << Complex(b.a, 0), Complex(-b.b, 0), Complex(b.b, 0), Complex(b.a, 0);
      return m;
    }
    ComplexMatrix operator()(const BlockRealS2Pair& b) const {
      ComplexMatrix m = ComplexMatrix::Zero(4, 4);
      m(0, 2) = m(1, 3) = Complex(b.tau, 0);
      m(2, 0) = Complex(b.tau * b.c, 0);
      m(2, 1) = Complex(-b.tau * b.d, 0);
      m(3, 0) = Complex(b.tau * b.d, 0);
      m(3, 1) = Complex(b.tau * b.c, 0);
      return m;
    }
  };
  return std::visit(V{}, block);
}

/// Direct sum of the form's blocks in sorted order.
inline ComplexMatrix assemble(const CanonicalForm& form) {
  validate_form(form);
  const CanonicalForm sorted = sort_blocks(form);
  const Index n = sorted.total_dim();
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  Index off = 0;
  for (const auto& b : sorted.blocks) {
    const Index d = block_dim(b);
    m.block(off, off, d, d) = block_matrix(b);
    off += d;
  }
  return m;
}

/// Real-entry assembly; requires a real-flavor form.
inline RealMatrix assemble_real(const CanonicalForm& form) {
  if (form.flavor != Flavor::Real)
    throw std::invalid_argument("assemble_real requires a real-flavor form");
  return assemble(form).real();
}

namespace detail {

inline double param_dist(double a, double b) {
  return std::abs(a - b) / (1.0 + std::max(std::abs(a), std::abs(b)));
}

inline double param_dist(Complex a, Complex b) {
  return std::abs(a - b) / (1.0 + std::max(std::abs(a), std::abs(b)));
}

/// Max over parameters of the relative-or-absolute distance; infinity across
/// block types.
inline double block_distance(const CanonicalBlock& x, const CanonicalBlock& y) {
  if (x.index() != y.index())
    return std::numeric_limits<double>::infinity();
  struct V {
    const CanonicalBlock& other;
    double operator()(const BlockLambda& b) const {
      return param_dist(b.lambda, std::get<BlockLambda>(other).lambda);
    }
    double operator()(const BlockS1& b) const {
      const auto& o = std::get<BlockS1>(other);
      return std::max(param_dist(b.mu, o.mu), param_dist(b.r, o.r));
    }
    double operator()(const BlockS2& b) const {
      const auto& o = std::get<BlockS2>(other);
      return std::max(param_dist(b.nu, o.nu), param_dist(b.tau, o.tau));
    }
    double operator()(const BlockRealRotation& b) const {
      const auto& o = std::get<BlockRealRotation>(other);
      return std::max(param_dist(b.a, o.a), param_dist(b.b, o.b));
    }
    double operator()(const BlockRealS2Pair& b) const {
      const auto& o = std::get<BlockRealS2Pair>(other);
      return std::max({param_dist(b.c, o.c), param_dist(b.d, o.d),
                       param_dist(b.tau, o.tau)});
    }
  };
  return std::visit(V{y}, x);
}

}  // namespace detail

/// Multiset equality of blocks within a parameter tolerance. Matching is
/// closest-first rather than positional so that near-tie sort flips between
/// the two forms cannot produce false negatives.
/// Returns the permutation taking form b's blocks onto form a's when equal.
inline std::optional<std::vector<Index>> form_match(const CanonicalForm& a,
                                                    const CanonicalForm& b,
                                                    double tol) {
  if (a.flavor != b.flavor) return std::nullopt;
  if (a.blocks.size() != b.blocks.size()) return std::nullopt;
  const Index k = static_cast<Index>(a.blocks.size());
  std::vector<bool> used(k, false);
  std::vector<Index> match(k, -1);
  for (Index i = 0; i < k; ++i) {
    double best = std::numeric_limits<double>::infinity();
    Index best_j = -1;
    for (Index j = 0; j < k; ++j) {
      if (used[j]) continue;
      const double d = detail::block_distance(a.blocks[i], b.blocks[j]);
      if (d < best) {
        best = d;
        best_j = j;
      }
    }
    if (best_j < 0 || best > tol) return std::nullopt;
    used[best_j] = true;
    match[i] = best_j;
  }
  return match;
}

inline bool form_equal(const CanonicalForm& a, const CanonicalForm& b,
                       double tol) {
  return form_match(a, b, tol).has_value();
}

}  // namespace sqn
