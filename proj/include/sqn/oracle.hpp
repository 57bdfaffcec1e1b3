#pragma once

#include <optional>
#include <vector>

#include "sqn/canon_real.hpp"

namespace sqn {

struct SimilarityDecision {
  bool similar = false;
  std::optional<ComplexMatrix> witness;  // U with U*AU ≈ B when similar
};

struct RealSimilarityDecision {
  bool similar = false;
  std::optional<RealMatrix> witness;
};

namespace detail {

/// Permutation aligning `from`'s blocks onto `to`'s: column group i selects
/// the columns of from-block match[i], so P*·assemble(from)·P carries the
/// blocks in to-order.
template <typename Mat>
Mat block_permutation(const CanonicalForm& to, const CanonicalForm& from,
                      const std::vector<Index>& match) {
  std::vector<Index> from_off(from.blocks.size(), 0);
  Index off = 0;
  for (size_t j = 0; j < from.blocks.size(); ++j) {
    from_off[j] = off;
    off += block_dim(from.blocks[j]);
  }
  const Index n = off;
  Mat p = Mat::Zero(n, n);
  Index to_off = 0;
  for (size_t i = 0; i < to.blocks.size(); ++i) {
    const Index d = block_dim(to.blocks[i]);
    for (Index c = 0; c < d; ++c)
      p(from_off[match[i]] + c, to_off + c) = 1;
    to_off += d;
  }
  return p;
}

}  // namespace detail

/// Unitary similarity of two squared-normal matrices, decided by comparing
/// canonical forms as block multisets. A positive verdict ships the witness
/// U = W_A·(W_B·P)*, where P aligns the two block orders.
inline SimilarityDecision unitarily_similar(const ComplexMatrix& a,
                                            const ComplexMatrix& b,
                                            const ToleranceConfig& cfg = {}) {
  require_square_finite(a, "A");
  require_square_finite(b, "B");
  if (a.rows() != b.rows())
    throw DimensionMismatchError("inputs have different dimensions");
  if (!is_squared_normal(a, cfg))
    throw NotSquaredNormalError(squared_normality_defect(a), "A");
  if (!is_squared_normal(b, cfg))
    throw NotSquaredNormalError(squared_normality_defect(b), "B");

  const CanonResult ca = canon_a(a, cfg);
  const CanonResult cb = canon_a(b, cfg);
  const auto match = form_match(ca.form, cb.form, cfg.cluster_tol);
  if (!match) return {};
  SimilarityDecision out;
  out.similar = true;
  const ComplexMatrix p =
      detail::block_permutation<ComplexMatrix>(ca.form, cb.form, *match);
  out.witness = ca.transform * (cb.transform * p).adjoint();
  return out;
}

/// Orthogonal similarity of two real squared-normal matrices via the real
/// canonical form; same witness composition with a real orthogonal result.
inline RealSimilarityDecision orthogonally_similar(
    const RealMatrix& a, const RealMatrix& b, const ToleranceConfig& cfg = {}) {
  require_square_finite(a, "A");
  require_square_finite(b, "B");
  if (a.rows() != b.rows())
    throw DimensionMismatchError("inputs have different dimensions");
  if (!is_squared_normal(a, cfg))
    throw NotSquaredNormalError(squared_normality_defect(a), "A");
  if (!is_squared_normal(b, cfg))
    throw NotSquaredNormalError(squared_normality_defect(b), "B");

  const RealCanonResult ca = canon_real(a, cfg);
  const RealCanonResult cb = canon_real(b, cfg);
  const auto match = form_match(ca.form, cb.form, cfg.cluster_tol);
  if (!match) return {};
  RealSimilarityDecision out;
  out.similar = true;
  const RealMatrix p =
      detail::block_permutation<RealMatrix>(ca.form, cb.form, *match);
  out.witness = ca.transform * (cb.transform * p).transpose();
  return out;
}

/// Independent 2×2 cross-check: tr A, tr A², tr A*A form a complete set of
/// unitary-similarity invariants in dimension 2.
inline bool trace_oracle_2x2(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != 2 || a.cols() != 2 || b.rows() != 2 || b.cols() != 2)
    throw DimensionMismatchError("trace oracle requires 2x2 inputs");
  const auto near = [](Complex x, Complex y) {
    return std::abs(x - y) <= 1e-8 * (1 + std::max(std::abs(x), std::abs(y)));
  };
  return near(a.trace(), b.trace()) &&
         near((a * a).trace(), (b * b).trace()) &&
         near((a.adjoint() * a).trace(), (b.adjoint() * b).trace());
}

}  // namespace sqn
