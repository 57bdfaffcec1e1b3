#pragma once

#include <limits>
#include <numeric>
#include <vector>

#include "sqn/bijection.hpp"
#include "sqn/normality.hpp"
#include "sqn/types.hpp"

namespace sqn {

namespace detail {

/// Union-find single linkage over points in the plane. Groups are reported in
/// order of first member appearance, members ascending, so the grouping is
/// deterministic for a fixed input order.
inline std::vector<std::vector<Index>> single_linkage(
    const std::vector<Complex>& vals, double link) {
  const Index n = static_cast<Index>(vals.size());
  std::vector<Index> parent(n);
  std::iota(parent.begin(), parent.end(), Index(0));
  auto find = [&](Index i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (std::abs(vals[i] - vals[j]) <= link) parent[find(i)] = find(j);
  std::vector<std::vector<Index>> groups;
  std::vector<Index> slot(n, -1);
  for (Index i = 0; i < n; ++i) {
    const Index r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<Index>(groups.size());
      groups.emplace_back();
    }
    groups[slot[r]].push_back(i);
  }
  return groups;
}

/// Full unitary Q whose leading p columns span range(c); p is the numerical
/// rank at rank_tol relative to the largest pivot.
template <typename Mat>
std::pair<Mat, Index> range_orthonormalize(const Mat& c, double rank_tol) {
  Eigen::ColPivHouseholderQR<Mat> qr(c);
  Mat q = qr.householderQ();
  const auto rdiag = qr.matrixQR().diagonal().cwiseAbs().eval();
  Index p = 0;
  if (rdiag.size() > 0 && rdiag(0) > 0) {
    for (Index i = 0; i < rdiag.size(); ++i)
      if (rdiag(i) > rank_tol * rdiag(0)) ++p;
  }
  return {std::move(q), p};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Unitary diagonalization of a (numerically) normal matrix
// ---------------------------------------------------------------------------

struct NormalEigen {
  Eigen::VectorXcd values;  // Rayleigh-refined, one per column
  ComplexMatrix vectors;    // unitary
};

/// Joint diagonalization of the commuting Hermitian and skew parts of a
/// normal matrix: eigendecompose H = (M+M*)/2, then within each eigenvalue
/// group (adjacent gaps ≤ group_tol) eigendecompose the compressed
/// S = (M−M*)/(2i). Both stages use orthonormal self-adjoint eigenvectors, so
/// the product basis stays unitary to rounding. This is the stable substitute
/// for reordering a triangular factor.
inline NormalEigen normal_eigendecompose(const ComplexMatrix& m,
                                         double group_tol) {
  const Index n = m.rows();
  NormalEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  if (n == 0) return out;

  const ComplexMatrix h = (m + m.adjoint()) / 2.0;
  const ComplexMatrix s = (m - m.adjoint()) / Complex(0, 2);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eh(h);
  const Eigen::VectorXd hv = eh.eigenvalues();
  const ComplexMatrix v = eh.eigenvectors();

  Index i0 = 0;
  while (i0 < n) {
    Index i1 = i0;
    while (i1 + 1 < n && hv(i1 + 1) - hv(i1) <= group_tol) ++i1;
    const Index g = i1 - i0 + 1;
    const ComplexMatrix vg = v.middleCols(i0, g);
    ComplexMatrix sg = vg.adjoint() * s * vg;
    sg = ((sg + sg.adjoint()) / 2.0).eval();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sg);
    out.vectors.middleCols(i0, g) = vg * es.eigenvectors();
    i0 = i1 + 1;
  }
  for (Index j = 0; j < n; ++j) {
    const auto vj = out.vectors.col(j);
    out.values(j) = vj.dot(m * vj);  // Rayleigh quotient, second-order accurate
  }
  return out;
}

// ---------------------------------------------------------------------------
// Spectral clusters of A²
// ---------------------------------------------------------------------------

struct SpectralCluster {
  Complex sigma;        // cluster center, a common eigenvalue λ² of A²
  ComplexMatrix basis;  // orthonormal columns spanning the cluster eigenspace
  Index dim = 0;
};

namespace detail {

struct ClusterIndexing {
  std::vector<Complex> centers;
  std::vector<double> spreads;
  std::vector<std::vector<Index>> members;
};

inline ClusterIndexing group_eigenvalues(const std::vector<Complex>& vals,
                                         double link) {
  ClusterIndexing out;
  out.members = single_linkage(vals, link);
  for (const auto& grp : out.members) {
    Complex c(0, 0);
    for (Index j : grp) c += vals[j];
    c /= static_cast<double>(grp.size());
    double spread = 0;
    for (Index j : grp) spread = std::max(spread, std::abs(vals[j] - c));
    out.centers.push_back(c);
    out.spreads.push_back(spread);
  }
  return out;
}

/// Grouping is ill-posed when two centers sit within 3× of either side's
/// intra-cluster spread; refusing beats canonicalizing the wrong structure.
inline void check_cluster_ambiguity(const ClusterIndexing& cl) {
  for (size_t i = 0; i < cl.centers.size(); ++i)
    for (size_t j = i + 1; j < cl.centers.size(); ++j) {
      const double spread = std::max(cl.spreads[i], cl.spreads[j]);
      if (std::abs(cl.centers[i] - cl.centers[j]) < 3 * spread)
        throw ClusterAmbiguityError(
            "eigenvalue clusters of the square are not separated");
    }
}

}  // namespace detail

/// Clusters of A²'s spectrum with orthonormal A-invariant bases.
/// Pre: A squared-normal. Link distance is cluster_tol·max(1, ‖A‖_F²).
inline std::vector<SpectralCluster> cluster_spectrum(
    const ComplexMatrix& a, const ToleranceConfig& cfg = {}) {
  require_square_finite(a, "matrix");
  if (!is_squared_normal(a, cfg))
    throw NotSquaredNormalError(squared_normality_defect(a));

  const double na = frob(a);
  const double link = cfg.cluster_tol * scale_floor(na * na);
  const ComplexMatrix m = a * a;
  const NormalEigen ne = normal_eigendecompose(m, link);

  std::vector<Complex> vals(ne.values.data(), ne.values.data() + ne.values.size());
  const auto cl = detail::group_eigenvalues(vals, link);
  detail::check_cluster_ambiguity(cl);

  std::vector<SpectralCluster> clusters;
  for (size_t g = 0; g < cl.members.size(); ++g) {
    SpectralCluster c;
    c.sigma = cl.centers[g];
    c.dim = static_cast<Index>(cl.members[g].size());
    c.basis.resize(a.rows(), c.dim);
    for (Index k = 0; k < c.dim; ++k)
      c.basis.col(k) = ne.vectors.col(cl.members[g][k]);
    clusters.push_back(std::move(c));
  }
  // Deterministic processing order: center descending by (Re, Im).
  std::stable_sort(clusters.begin(), clusters.end(),
                   [](const SpectralCluster& x, const SpectralCluster& y) {
                     if (x.sigma.real() != y.sigma.real())
                       return x.sigma.real() > y.sigma.real();
                     return x.sigma.imag() > y.sigma.imag();
                   });
  return clusters;
}

// ---------------------------------------------------------------------------
// Involution split: B² = σI, σ ≠ 0
// ---------------------------------------------------------------------------

struct InvolutionSplit {
  Complex mu;  // principal square root of σ
  Index p = 0;
  Index q = 0;
  ComplexMatrix f;             // p×q coupling block
  ComplexMatrix basis_change;  // unitary Q with Q*BQ = [[μI, F],[0, −μI]]
};

namespace detail {

template <typename Mat>
double involution_defect(const Mat& b, typename Mat::Scalar sigma) {
  Mat d = b * b;
  d.diagonal().array() -= sigma;
  return d.norm();
}

/// Gate for accepting B² ≈ σI: cluster-width slack grows with dimension
/// because linked chains widen a legitimate cluster.
inline double involution_gate(const ToleranceConfig& cfg, Index dim,
                              double norm_b, double abs_sigma) {
  const double rel = std::max(cfg.normality_tol,
                              cfg.cluster_tol * (3.0 + static_cast<double>(dim)));
  return rel * scale_floor(std::max(norm_b * norm_b, abs_sigma));
}

}  // namespace detail

/// Adapted basis for ker(B−μI) ⊕ ker(B+μI). The first kernel equals
/// range(B+μI) because (B−μI)(B+μI) = 0 and the two shifts differ by the
/// invertible 2μI, so a rank-revealing orthonormalization of B+μI delivers it
/// without forming kernels.
inline InvolutionSplit split_involution(const ComplexMatrix& b, Complex sigma,
                                        const ToleranceConfig& cfg = {}) {
  require_square_finite(b, "matrix");
  const Index m = b.rows();
  if (sigma == Complex(0, 0))
    throw NotInvolutionError("sigma must be nonzero");
  const double defect = detail::involution_defect(b, sigma);
  const double gate = detail::involution_gate(cfg, m, frob(b), std::abs(sigma));
  if (defect > gate)
    throw NotInvolutionError("matrix square is not sigma times identity (defect " +
                             std::to_string(defect) + ")");

  InvolutionSplit out;
  out.mu = principal_sqrt(sigma);
  ComplexMatrix shifted = b;
  shifted.diagonal().array() += out.mu;
  auto [q, p] = detail::range_orthonormalize(shifted, cfg.rank_tol);
  out.p = p;
  out.q = m - p;
  out.basis_change = std::move(q);
  out.f = out.basis_change.leftCols(out.p).adjoint() * b *
          out.basis_change.rightCols(out.q);
  return out;
}

// ---------------------------------------------------------------------------
// Nilpotent part: B² ≈ 0
// ---------------------------------------------------------------------------

/// Coupling strengths of a nilpotent restriction: the singular values of B
/// above rank_tol·σ_max, descending. Each kept value r becomes one coupled
/// block [[0, r],[0, 0]]; everything else is kernel.
/// Pre: ‖B²‖_F ≤ normality_tol·‖B‖_F².
inline std::vector<double> nilpotent_singulars(const ComplexMatrix& b,
                                               const ToleranceConfig& cfg = {}) {
  require_square_finite(b, "matrix");
  const double nb = frob(b);
  if ((b * b).norm() > cfg.normality_tol * nb * nb)
    throw NotNilpotentError("matrix square is not numerically zero");
  if (b.rows() == 0) return {};
  Eigen::JacobiSVD<ComplexMatrix> svd(b);
  const auto& sv = svd.singularValues();
  std::vector<double> out;
  if (sv.size() > 0 && sv(0) > 0)
    for (Index i = 0; i < sv.size(); ++i)
      if (sv(i) > cfg.rank_tol * sv(0)) out.push_back(sv(i));
  return out;
}

// ---------------------------------------------------------------------------
// Per-cluster reductions shared by the complex and real canonicalizers
// ---------------------------------------------------------------------------

/// Local unitary (orthogonal) basis ordered [x₁ y₁ … x_k y_k | μ-singles |
/// (−μ)-singles]; pair (x_i, y_i) carries the restriction [[μ, r_i],[0, −μ]].
template <typename Mat>
struct InvolutionReduction {
  Mat basis;
  std::vector<double> coupled;  // r_i, descending
  Index p = 0;
  Index q = 0;
};

template <typename Mat>
InvolutionReduction<Mat> reduce_involution(const Mat& b,
                                           typename Mat::Scalar mu,
                                           const ToleranceConfig& cfg) {
  const Index m = b.rows();
  InvolutionReduction<Mat> out;
  Mat shifted = b;
  shifted.diagonal().array() += mu;
  auto [q_full, p] = detail::range_orthonormalize(shifted, cfg.rank_tol);
  const Index q = m - p;
  out.p = p;
  out.q = q;
  if (p == 0 || q == 0) {
    out.basis = std::move(q_full);
    return out;
  }
  const Mat f = q_full.leftCols(p).adjoint() * b * q_full.rightCols(q);
  Eigen::JacobiSVD<Mat> svd(f, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Index k = 0;
  if (sv.size() > 0 && sv(0) > 0)
    for (Index i = 0; i < sv.size(); ++i)
      if (sv(i) > cfg.rank_tol * sv(0)) ++k;
  const Mat x = q_full.leftCols(p) * svd.matrixU();
  const Mat y = q_full.rightCols(q) * svd.matrixV();
  out.basis.resize(m, m);
  for (Index i = 0; i < k; ++i) {
    out.basis.col(2 * i) = x.col(i);
    out.basis.col(2 * i + 1) = y.col(i);
    out.coupled.push_back(sv(i));
  }
  out.basis.middleCols(2 * k, p - k) = x.rightCols(p - k);
  out.basis.middleCols(k + p, q - k) = y.rightCols(q - k);
  return out;
}

/// Local basis ordered [u₁ v₁ … u_k v_k | kernel]; pair (u_i, v_i) carries
/// [[0, r_i],[0, 0]]. Valid because range(B) ⊥ range(B*) when B² = 0, which
/// makes the interleaved singular vectors orthonormal; a violation signals a
/// cluster that merged structure below the resolving tolerance.
template <typename Mat>
struct NilpotentReduction {
  Mat basis;
  std::vector<double> singulars;  // descending
};

template <typename Mat>
NilpotentReduction<Mat> reduce_nilpotent(const Mat& b,
                                         const ToleranceConfig& cfg) {
  const Index m = b.rows();
  NilpotentReduction<Mat> out;
  if (m == 0) {
    out.basis.resize(0, 0);
    return out;
  }
  Eigen::JacobiSVD<Mat> svd(b, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Index k = 0;
  if (sv.size() > 0 && sv(0) > 0)
    for (Index i = 0; i < sv.size(); ++i)
      if (sv(i) > cfg.rank_tol * sv(0)) ++k;
  if (2 * k > m)
    throw ClusterAmbiguityError(
        "nilpotent restriction carries more coupling than its dimension");
  Mat c(m, 2 * k);
  for (Index i = 0; i < k; ++i) {
    c.col(2 * i) = svd.matrixU().col(i);
    c.col(2 * i + 1) = svd.matrixV().col(i);
    out.singulars.push_back(sv(i));
  }
  if (k > 0 && unitarity_defect(c) > 1e-6)
    throw ClusterAmbiguityError(
        "nilpotent restriction mixes structure below the cluster tolerance");
  out.basis.resize(m, m);
  out.basis.leftCols(2 * k) = c;
  out.basis.rightCols(m - 2 * k) = orthonormal_complement(c, m);
  return out;
}

// ---------------------------------------------------------------------------
// Real spectrum of a real normal matrix
// ---------------------------------------------------------------------------

struct RealSpectrumEntry {
  double h = 0;     // real part of the eigenvalue (pair)
  double beta = 0;  // imaginary part, ≥ 0; 0 marks a real eigenvector
  Index col = 0;    // first column in vectors
  Index ncols = 1;  // 1 for a real eigenvector, 2 for a conjugate pair plane
};

struct RealNormalSpectrum {
  RealMatrix vectors;  // orthogonal
  std::vector<RealSpectrumEntry> entries;
};

/// Real-arithmetic analogue of normal_eigendecompose: eigendecompose the
/// symmetric part, then bring the compressed skew part to its rotation normal
/// form inside each eigenvalue group. A pair entry (v₁, v₂) carries the
/// restriction [[h, −β],[β, h]] with β > 0.
inline RealNormalSpectrum real_normal_spectrum(const RealMatrix& m,
                                               double group_tol) {
  const Index n = m.rows();
  RealNormalSpectrum out;
  out.vectors.resize(n, n);
  if (n == 0) return out;

  const RealMatrix h = (m + m.transpose()) / 2.0;
  const RealMatrix k = (m - m.transpose()) / 2.0;
  Eigen::SelfAdjointEigenSolver<RealMatrix> eh(h);
  const Eigen::VectorXd hv = eh.eigenvalues();
  const RealMatrix v = eh.eigenvectors();
  const double kscale = scale_floor(k.norm());
  const double parse_tol = 1e3 * std::numeric_limits<double>::epsilon() * kscale;

  Index i0 = 0;
  while (i0 < n) {
    Index i1 = i0;
    while (i1 + 1 < n && hv(i1 + 1) - hv(i1) <= group_tol) ++i1;
    const Index g = i1 - i0 + 1;
    RealMatrix cols;
    RealMatrix t;
    if (g == 1) {
      cols = v.middleCols(i0, 1);
      t = RealMatrix::Zero(1, 1);
    } else {
      const RealMatrix vg = v.middleCols(i0, g);
      RealMatrix kg = vg.transpose() * k * vg;
      kg = ((kg - kg.transpose()) / 2.0).eval();
      Eigen::RealSchur<RealMatrix> schur(kg);
      cols = vg * schur.matrixU();
      t = schur.matrixT();
    }
    Index j = 0;
    while (j < g) {
      RealSpectrumEntry e;
      e.col = i0 + j;
      if (j + 1 < g && std::abs(t(j + 1, j)) > parse_tol) {
        e.ncols = 2;
        e.beta = (t(j + 1, j) - t(j, j + 1)) / 2.0;
        if (e.beta < 0) {
          cols.col(j).swap(cols.col(j + 1));
          e.beta = -e.beta;
        }
        j += 2;
      } else {
        e.ncols = 1;
        j += 1;
      }
      out.entries.push_back(e);
    }
    out.vectors.middleCols(i0, g) = cols;
    i0 = i1 + 1;
  }

  // Rayleigh refinement against the full matrix.
  for (auto& e : out.entries) {
    if (e.ncols == 1) {
      const auto v1 = out.vectors.col(e.col);
      e.h = v1.dot(m * v1);
      e.beta = 0;
    } else {
      const auto v1 = out.vectors.col(e.col);
      const auto v2 = out.vectors.col(e.col + 1);
      e.h = (v1.dot(m * v1) + v2.dot(m * v2)) / 2.0;
      e.beta = (v2.dot(m * v1) - v1.dot(m * v2)) / 2.0;
      if (e.beta < 0) {
        out.vectors.col(e.col).swap(out.vectors.col(e.col + 1));
        e.beta = -e.beta;
      }
    }
  }
  return out;
}

}  // namespace sqn
