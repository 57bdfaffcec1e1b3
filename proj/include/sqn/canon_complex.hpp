#pragma once

#include <algorithm>
#include <utility>
#include <variant>
#include <vector>

#include "sqn/canonical_form.hpp"
#include "sqn/spectral.hpp"

namespace sqn {

/// A canonical form together with the unitary exhibiting it:
/// transform* · A · transform equals assemble(form).
struct CanonResult {
  CanonicalForm form;
  ComplexMatrix transform;
};

namespace detail {

/// A block paired with the global columns carrying it.
template <typename Mat>
using Piece = std::pair<CanonicalBlock, Mat>;

template <typename Mat>
void sort_pieces(std::vector<Piece<Mat>>& pieces) {
  std::stable_sort(pieces.begin(), pieces.end(),
                   [](const Piece<Mat>& a, const Piece<Mat>& b) {
                     return block_before(a.first, b.first);
                   });
}

template <typename Mat>
void emit_pieces(const std::vector<Piece<Mat>>& pieces, CanonicalForm& form,
                 Mat& transform) {
  Index off = 0;
  for (const auto& [blk, cols] : pieces) {
    form.blocks.push_back(blk);
    transform.middleCols(off, cols.cols()) = cols;
    off += cols.cols();
  }
}

/// The square-root branch cut sits on the positive real axis, which is where
/// squares of real eigenvalues land. Snapping a near-real cluster center onto
/// the axis keeps μ on one side of the cut across reruns and perturbations.
inline Complex snap_to_real_axis(Complex sigma, double link) {
  if (std::abs(sigma.imag()) <= link) return Complex(sigma.real(), 0);
  return sigma;
}

inline void append_involution_pieces(
    std::vector<Piece<ComplexMatrix>>& pieces, const ComplexMatrix& cols,
    Complex mu, const InvolutionReduction<ComplexMatrix>& red) {
  const Index k = static_cast<Index>(red.coupled.size());
  for (Index i = 0; i < k; ++i)
    pieces.emplace_back(BlockS1(mu, red.coupled[i]),
                        cols.middleCols(2 * i, 2));
  for (Index i = 0; i < red.p - k; ++i)
    pieces.emplace_back(BlockLambda(mu), cols.middleCols(2 * k + i, 1));
  for (Index i = 0; i < red.q - k; ++i)
    pieces.emplace_back(BlockLambda(-mu), cols.middleCols(k + red.p + i, 1));
}

inline void append_nilpotent_pieces(
    std::vector<Piece<ComplexMatrix>>& pieces, const ComplexMatrix& cols,
    const NilpotentReduction<ComplexMatrix>& red) {
  const Index k = static_cast<Index>(red.singulars.size());
  for (Index i = 0; i < k; ++i)
    pieces.emplace_back(BlockS1(Complex(0, 0), red.singulars[i]),
                        cols.middleCols(2 * i, 2));
  for (Index i = 2 * k; i < cols.cols(); ++i)
    pieces.emplace_back(BlockLambda(Complex(0, 0)), cols.middleCols(i, 1));
}

}  // namespace detail

/// Canonical form of the first kind: direct sum of [λ] and [[μ, r],[0, −μ]]
/// blocks in the canonical order. Throws NotSquaredNormalError or
/// ClusterAmbiguityError; see cluster_spectrum.
inline CanonResult canon_a(const ComplexMatrix& a,
                           const ToleranceConfig& cfg = {}) {
  const auto clusters = cluster_spectrum(a, cfg);
  const Index n = a.rows();
  const double na = frob(a);
  const double link = cfg.cluster_tol * scale_floor(na * na);

  std::vector<detail::Piece<ComplexMatrix>> pieces;
  for (const auto& cl : clusters) {
    const ComplexMatrix b = cl.basis.adjoint() * a * cl.basis;
    const double nb2 = b.squaredNorm();
    if ((b * b).norm() <= cfg.normality_tol * nb2) {
      const auto red = reduce_nilpotent<ComplexMatrix>(b, cfg);
      detail::append_nilpotent_pieces(pieces, cl.basis * red.basis, red);
    } else {
      const Complex sigma = detail::snap_to_real_axis(cl.sigma, link);
      const Complex mu = principal_sqrt(sigma);
      const auto red = reduce_involution<ComplexMatrix>(b, mu, cfg);
      detail::append_involution_pieces(pieces, cl.basis * red.basis, mu, red);
    }
  }

  detail::sort_pieces(pieces);
  CanonResult res;
  res.form.flavor = Flavor::ComplexA;
  res.transform.resize(n, n);
  detail::emit_pieces(pieces, res.form, res.transform);
  if (n > 0) res.transform = polar_factor(res.transform);
  return res;
}

/// Canonical form of the second kind: direct sum of [λ] and τ[[0, 1],[ν, 0]]
/// blocks. Computed from the first kind by replacing every coupled block with
/// its image under the block bijection and composing the transform with the
/// per-block change of basis.
inline CanonResult canon_b(const ComplexMatrix& a,
                           const ToleranceConfig& cfg = {}) {
  CanonResult first = canon_a(a, cfg);
  const Index n = a.rows();

  std::vector<detail::Piece<ComplexMatrix>> pieces;
  Index off = 0;
  for (const auto& blk : first.form.blocks) {
    const Index d = block_dim(blk);
    ComplexMatrix cols = first.transform.middleCols(off, d);
    if (const auto* s1 = std::get_if<BlockS1>(&blk)) {
      const BlockS2 s2 = f_inverse(*s1);
      cols = (cols * witness_S(*s1, s2)).eval();
      pieces.emplace_back(s2, std::move(cols));
    } else {
      pieces.emplace_back(blk, std::move(cols));
    }
    off += d;
  }

  detail::sort_pieces(pieces);
  CanonResult res;
  res.form.flavor = Flavor::ComplexB;
  res.transform.resize(n, n);
  detail::emit_pieces(pieces, res.form, res.transform);
  if (n > 0) res.transform = polar_factor(res.transform);
  return res;
}

}  // namespace sqn
