#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "sqn/canon_complex.hpp"

namespace sqn {

/// Entrywise doubling: each entry a+bi becomes the 2×2 block [[a, −b],[b, a]].
inline RealMatrix realify(const ComplexMatrix& m) {
  RealMatrix out(2 * m.rows(), 2 * m.cols());
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) {
      const double a = m(i, j).real();
      const double b = m(i, j).imag();
      out(2 * i, 2 * j) = a;
      out(2 * i, 2 * j + 1) = -b;
      out(2 * i + 1, 2 * j) = b;
      out(2 * i + 1, 2 * j + 1) = a;
    }
  return out;
}

/// Squared-normality is preserved by the doubling; this evaluates both sides
/// of that equivalence and reports whether they agree.
inline bool squared_normal_realification_check(const ComplexMatrix& m,
                                               const ToleranceConfig& cfg = {}) {
  require_square_finite(m, "matrix");
  return is_squared_normal(m, cfg) == is_squared_normal(realify(m), cfg);
}

/// A real canonical form with the orthogonal matrix exhibiting it:
/// transformᵀ · A · transform equals assemble_real(form).
struct RealCanonResult {
  CanonicalForm form;
  RealMatrix transform;
};

namespace detail {

struct RealCluster {
  Complex sigma;                 // center; imag > 0 marks a conjugate-pair cluster
  bool complex_kind = false;
  std::vector<Index> entries;    // indices into the spectrum entry list
};

inline std::vector<RealCluster> cluster_real_spectrum(
    const RealNormalSpectrum& sp, double link) {
  std::vector<Complex> vals;
  for (const auto& e : sp.entries) vals.emplace_back(e.h, e.beta);
  const auto groups = single_linkage(vals, link);

  std::vector<RealCluster> clusters;
  std::vector<double> spreads;
  for (const auto& grp : groups) {
    RealCluster c;
    Complex center(0, 0);
    double weight = 0;
    for (Index j : grp) {
      const double w = static_cast<double>(sp.entries[j].ncols);
      center += w * vals[j];
      weight += w;
      c.entries.push_back(j);
    }
    center /= weight;
    double spread = 0;
    for (Index j : grp) spread = std::max(spread, std::abs(vals[j] - center));
    c.complex_kind = center.imag() > link;
    c.sigma = c.complex_kind ? center : Complex(center.real(), 0);
    clusters.push_back(std::move(c));
    spreads.push_back(spread);
  }
  for (size_t i = 0; i < clusters.size(); ++i)
    for (size_t j = i + 1; j < clusters.size(); ++j) {
      const double spread = std::max(spreads[i], spreads[j]);
      if (std::abs(clusters[i].sigma - clusters[j].sigma) < 3 * spread)
        throw ClusterAmbiguityError(
            "eigenvalue clusters of the square are not separated");
    }
  std::stable_sort(clusters.begin(), clusters.end(),
                   [](const RealCluster& x, const RealCluster& y) {
                     if (x.sigma.real() != y.sigma.real())
                       return x.sigma.real() > y.sigma.real();
                     return x.sigma.imag() > y.sigma.imag();
                   });
  return clusters;
}

/// σ > 0: real involution. Coupled pairs leave through the same 2×2 change of
/// basis as the complex route, which is real whenever μ is.
inline void append_positive_involution_pieces(
    std::vector<Piece<RealMatrix>>& pieces, const RealMatrix& vcols,
    const RealMatrix& b, double sigma, const ToleranceConfig& cfg) {
  const double mu = std::sqrt(sigma);
  const auto red = reduce_involution<RealMatrix>(b, mu, cfg);
  const RealMatrix cols = vcols * red.basis;
  const Index k = static_cast<Index>(red.coupled.size());
  for (Index i = 0; i < k; ++i) {
    const BlockS1 s1(Complex(mu, 0), red.coupled[i]);
    const BlockS2 s2 = f_inverse(s1);
    RealMatrix s(2, 2);
    s << s2.tau, mu, -mu, s2.tau;
    s /= std::sqrt(s2.tau * s2.tau + mu * mu);
    pieces.emplace_back(s2, (cols.middleCols(2 * i, 2) * s).eval());
  }
  for (Index i = 0; i < red.p - k; ++i)
    pieces.emplace_back(BlockLambda(Complex(mu, 0)),
                        cols.middleCols(2 * k + i, 1));
  for (Index i = 0; i < red.q - k; ++i)
    pieces.emplace_back(BlockLambda(Complex(-mu, 0)),
                        cols.middleCols(k + red.p + i, 1));
}

/// σ = −m² < 0: B/m is a complex structure. The Gram matrix BᵀB separates the
/// roles: eigenvalue τ² > m² flags the second column of a coupled block τ[[0,
/// 1],[ν, 0]] with ν = σ/τ² (its partner eigenvalue m⁴/τ² is skipped, because
/// the partner columns are exactly the images Bu/τ), and the m²-eigenspace is
/// the rotation part, where B restricts to a skew matrix. Legal coupled
/// blocks force τ > m, so generator and partner eigenvalues cannot collide.
inline void append_negative_involution_pieces(
    std::vector<Piece<RealMatrix>>& pieces, const RealMatrix& vcols,
    const RealMatrix& b, double sigma, const ToleranceConfig& cfg) {
  const Index m = b.rows();
  const double msq = -sigma;
  const RealMatrix g = b.transpose() * b;
  Eigen::SelfAdjointEigenSolver<RealMatrix> eg(g);
  const Eigen::VectorXd gv = eg.eigenvalues();
  const double g_link = cfg.cluster_tol * scale_floor(b.squaredNorm());

  RealMatrix local(m, m);  // cluster-local orthonormal candidate
  Index filled = 0;
  std::vector<Index> pool;

  Index i0 = 0;
  while (i0 < m) {
    Index i1 = i0;
    while (i1 + 1 < m && gv(i1 + 1) - gv(i1) <= g_link) ++i1;
    double center = 0;
    for (Index i = i0; i <= i1; ++i) center += gv(i);
    center /= static_cast<double>(i1 - i0 + 1);
    if (std::abs(center - msq) <= 3 * g_link) {
      for (Index i = i0; i <= i1; ++i) pool.push_back(i);
    } else if (center > msq) {
      for (Index i = i0; i <= i1; ++i) {
        const Eigen::VectorXd u = eg.eigenvectors().col(i);
        const Eigen::VectorXd w = b * u;
        const double tau = w.norm();
        const double nu = u.dot(b * w) / (tau * tau);
        if (!(nu > -1 && nu < 0))
          throw ClusterAmbiguityError(
              "coupled block parameter escapes the legal range");
        local.col(filled) = w / tau;
        local.col(filled + 1) = u;
        RealMatrix cols(vcols.rows(), 2);
        cols.col(0) = vcols * local.col(filled);
        cols.col(1) = vcols * u;
        pieces.emplace_back(BlockS2(Complex(nu, 0), tau), std::move(cols));
        filled += 2;
      }
    }
    // center < msq: partner eigenvalues, already represented.
    i0 = i1 + 1;
  }

  const Index w = static_cast<Index>(pool.size());
  if (filled + w != m)
    throw ClusterAmbiguityError(
        "coupled and rotation parts do not fill the cluster");
  if (w > 0) {
    RealMatrix p(m, w);
    for (Index i = 0; i < w; ++i) p.col(i) = eg.eigenvectors().col(pool[i]);
    RealMatrix ks = p.transpose() * b * p;
    ks = ((ks - ks.transpose()) / 2.0).eval();
    Eigen::RealSchur<RealMatrix> schur(ks);
    const RealMatrix t = schur.matrixT();
    const RealMatrix cols = p * schur.matrixU();
    const double parse_tol =
        1e3 * std::numeric_limits<double>::epsilon() * scale_floor(ks.norm());
    Index j = 0;
    while (j < w) {
      if (j + 1 >= w || std::abs(t(j + 1, j)) <= parse_tol)
        throw PairingFailureError(
            "rotation part of a negative cluster has an unpaired direction");
      Eigen::VectorXd p1 = cols.col(j);
      Eigen::VectorXd p2 = cols.col(j + 1);
      double beta = (p2.dot(b * p1) - p1.dot(b * p2)) / 2.0;
      if (beta < 0) {
        p1.swap(p2);
        beta = -beta;
      }
      local.col(filled) = p1;
      local.col(filled + 1) = p2;
      RealMatrix gcols(vcols.rows(), 2);
      gcols.col(0) = vcols * p1;
      gcols.col(1) = vcols * p2;
      pieces.emplace_back(BlockRealRotation(0, beta), std::move(gcols));
      filled += 2;
      j += 2;
    }
  }
  if (unitarity_defect(RealMatrix(local.leftCols(filled))) > 1e-6)
    throw ClusterAmbiguityError(
        "negative cluster reduction lost orthonormality");
}

/// √2·[Re w, −Im w] realifies the single eigenvector column w; the sign flip
/// on the second column makes the restriction [[Re λ, −Im λ],[Im λ, Re λ]].
inline RealMatrix realify_column(const Eigen::VectorXcd& w, double im_sign) {
  RealMatrix out(w.size(), 2);
  out.col(0) = std::sqrt(2.0) * w.real();
  out.col(1) = im_sign * std::sqrt(2.0) * w.imag();
  return out;
}

/// Im σ > 0: the cluster and its conjugate are handled together. The complex
/// involution reduction runs on the half-dimensional eigenvector basis
/// u = (v₁ − i·v₂)/√2; every complex output column then realifies to two real
/// columns whose span also covers the conjugate eigenspace.
inline void append_conjugate_pair_pieces(
    std::vector<Piece<RealMatrix>>& pieces, const ComplexMatrix& ac,
    const ComplexMatrix& u_e, Complex sigma, const ToleranceConfig& cfg) {
  const Complex mu = principal_sqrt(sigma);  // open first quadrant
  const ComplexMatrix b_e = u_e.adjoint() * ac * u_e;
  const auto red = reduce_involution<ComplexMatrix>(b_e, mu, cfg);
  const ComplexMatrix cols = u_e * red.basis;
  const Index k = static_cast<Index>(red.coupled.size());

  const Index g = u_e.cols();
  RealMatrix all(u_e.rows(), 2 * g);
  Index filled = 0;
  for (Index i = 0; i < k; ++i) {
    const BlockS1 s1(mu, red.coupled[i]);
    const BlockS2 s2 = f_inverse(s1);
    const ComplexMatrix pair =
        cols.middleCols(2 * i, 2) * witness_S(s1, s2);
    RealMatrix four(u_e.rows(), 4);
    four.leftCols(2) = realify_column(pair.col(0), -1.0);
    four.rightCols(2) = realify_column(pair.col(1), -1.0);
    all.middleCols(filled, 4) = four;
    filled += 4;
    pieces.emplace_back(BlockRealS2Pair(s2.nu.real(), s2.nu.imag(), s2.tau),
                        std::move(four));
  }
  for (Index i = 0; i < red.p - k; ++i) {
    RealMatrix two = realify_column(cols.col(2 * k + i), -1.0);
    all.middleCols(filled, 2) = two;
    filled += 2;
    pieces.emplace_back(BlockRealRotation(mu.real(), mu.imag()),
                        std::move(two));
  }
  for (Index i = 0; i < red.q - k; ++i) {
    // +Im realification carries the −μ eigenvector; its block spectrum is
    // {−μ, −μ̄} as required.
    RealMatrix two = realify_column(cols.col(k + red.p + i), 1.0);
    all.middleCols(filled, 2) = two;
    filled += 2;
    pieces.emplace_back(BlockRealRotation(-mu.real(), mu.imag()),
                        std::move(two));
  }
  if (unitarity_defect(RealMatrix(all.leftCols(filled))) > 1e-6)
    throw PairingFailureError(
        "conjugate-pair realification lost orthonormality");
}

}  // namespace detail

/// Real canonical form under orthogonal similarity: direct sum of [λ],
/// τ[[0, 1],[ν, 0]] with real ν, [[a, −b],[b, a]], and the 4×4 realified
/// coupled block, in the canonical order. Conjugate eigenstructure is kept
/// paired throughout, so the transform stays real.
inline RealCanonResult canon_real(const RealMatrix& a,
                                  const ToleranceConfig& cfg = {}) {
  require_square_finite(a, "matrix");
  if (!is_squared_normal(a, cfg))
    throw NotSquaredNormalError(squared_normality_defect(a));

  const Index n = a.rows();
  const double na = frob(a);
  const double link = cfg.cluster_tol * scale_floor(na * na);
  const RealMatrix m = a * a;
  const RealNormalSpectrum sp = real_normal_spectrum(m, link);
  const auto clusters = detail::cluster_real_spectrum(sp, link);

  ComplexMatrix ac;  // complex view, materialized only for pair clusters
  std::vector<detail::Piece<RealMatrix>> pieces;
  for (const auto& cl : clusters) {
    if (cl.complex_kind) {
      Index g = 0;
      for (Index j : cl.entries) {
        if (sp.entries[j].ncols != 2)
          throw PairingFailureError(
              "real eigenvector inside a conjugate-pair cluster");
        ++g;
      }
      ComplexMatrix u_e(n, g);
      Index c = 0;
      for (Index j : cl.entries) {
        const auto v1 = sp.vectors.col(sp.entries[j].col);
        const auto v2 = sp.vectors.col(sp.entries[j].col + 1);
        u_e.col(c++) =
            (v1.cast<Complex>() - Complex(0, 1) * v2.cast<Complex>()) /
            std::sqrt(2.0);
      }
      if (ac.size() == 0) ac = a.cast<Complex>();
      detail::append_conjugate_pair_pieces(pieces, ac, u_e, cl.sigma, cfg);
    } else {
      Index dim = 0;
      for (Index j : cl.entries) dim += sp.entries[j].ncols;
      RealMatrix v(n, dim);
      Index c = 0;
      for (Index j : cl.entries) {
        v.middleCols(c, sp.entries[j].ncols) =
            sp.vectors.middleCols(sp.entries[j].col, sp.entries[j].ncols);
        c += sp.entries[j].ncols;
      }
      const RealMatrix b = v.transpose() * a * v;
      const double nb2 = b.squaredNorm();
      if ((b * b).norm() <= cfg.normality_tol * nb2) {
        const auto red = reduce_nilpotent<RealMatrix>(b, cfg);
        const RealMatrix cols = v * red.basis;
        const Index k = static_cast<Index>(red.singulars.size());
        for (Index i = 0; i < k; ++i)
          pieces.emplace_back(BlockS2(Complex(0, 0), red.singulars[i]),
                              cols.middleCols(2 * i, 2));
        for (Index i = 2 * k; i < dim; ++i)
          pieces.emplace_back(BlockLambda(Complex(0, 0)),
                              cols.middleCols(i, 1));
      } else if (cl.sigma.real() >= 0) {
        detail::append_positive_involution_pieces(pieces, v, b,
                                                  cl.sigma.real(), cfg);
      } else {
        detail::append_negative_involution_pieces(pieces, v, b,
                                                  cl.sigma.real(), cfg);
      }
    }
  }

  detail::sort_pieces(pieces);
  RealCanonResult res;
  res.form.flavor = Flavor::Real;
  res.transform.resize(n, n);
  detail::emit_pieces(pieces, res.form, res.transform);
  validate_form(res.form);
  if (n > 0) res.transform = polar_factor(res.transform);
  return res;
}

}  // namespace sqn
