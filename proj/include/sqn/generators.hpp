#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "sqn/bijection.hpp"
#include "sqn/canonical_form.hpp"

namespace sqn {

/// Deterministic source of draws. The engine is fully specified by the
/// standard and the derived distributions avoid std::*_distribution, whose
/// output is implementation-defined; identical seeds give identical streams
/// on every platform with the same libm.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t raw() { return eng_(); }

  double uniform() { return static_cast<double>(raw() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  bool coin(double p) { return uniform() < p; }

  Index pick(Index n) { return static_cast<Index>(raw() % static_cast<std::uint64_t>(n)); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0;
    do {
      u1 = uniform();
    } while (u1 == 0.0);
    const double u2 = uniform();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * 3.141592653589793238462643383279502884 * u2;
    spare_ = mag * std::sin(ang);
    has_spare_ = true;
    return mag * std::cos(ang);
  }

  Complex cnormal() { return Complex(normal(), normal()); }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0;
  bool has_spare_ = false;
};

namespace detail {

inline constexpr std::uint64_t seed_mix = 0x9e3779b97f4a7c15ULL;

template <typename Mat>
Mat haar_factor(Mat g) {
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  const auto d = qr.matrixQR().diagonal().eval();
  for (Index j = 0; j < d.size(); ++j) {
    const auto r = d(j);
    if (std::abs(r) > 0) q.col(j) *= r / std::abs(r);
  }
  return q;
}

}  // namespace detail

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the column
/// phases corrected so the triangular factor has positive diagonal.
inline ComplexMatrix random_unitary(Index n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("random_unitary: n must be >= 1");
  Rng rng(seed);
  ComplexMatrix g(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) g(i, j) = rng.cnormal();
  return detail::haar_factor(std::move(g));
}

inline RealMatrix random_orthogonal(Index n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("random_orthogonal: n must be >= 1");
  Rng rng(seed);
  RealMatrix g(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) g(i, j) = rng.normal();
  return detail::haar_factor(std::move(g));
}

/// Generator controls. Densities are probabilities; `separation` is the
/// minimum pairwise distance between distinct eigenvalue clusters of the
/// square, in units of link_scale (matching the canonicalizer's cluster link
/// at default tolerances). Adversarial mode drops the separation rejection.
struct GenParams {
  double scale = 1.0;
  double pair_density = 0.45;
  double zero_density = 0.12;
  double reuse_density = 0.3;
  double separation = 10.0;
  double link_scale = 1e-8;
  bool adversarial = false;
};

namespace detail {

/// Rejection sampler state for cluster separation in σ = λ² space.
class SigmaSpacing {
 public:
  SigmaSpacing(const GenParams& par, Index n)
      : par_(par),
        min_dist_(par.separation * par.link_scale *
                  scale_floor(4.0 * static_cast<double>(n) * par.scale *
                              par.scale)) {}

  bool admit(Complex sigma) {
    if (!par_.adversarial)
      for (Complex s : used_)
        if (std::abs(s - sigma) < min_dist_) return false;
    used_.push_back(sigma);
    return true;
  }

 private:
  GenParams par_;
  double min_dist_;
  std::vector<Complex> used_;
};

template <typename DrawFn>
auto rejection_draw(DrawFn&& draw, int attempts = 256) ->
    typename std::decay_t<decltype(draw())>::value_type {
  for (int i = 0; i < attempts; ++i) {
    if (auto v = draw()) return *v;
  }
  throw std::runtime_error("generator could not separate eigenvalue clusters");
}

}  // namespace detail

/// Random mixture of [λ] and coupled 2×2 blocks filling dimension n, all
/// parameter constraints satisfied, pairwise-separated clusters unless
/// adversarial. Families (a μ value, or the zero family) are deliberately
/// reused with probability reuse_density to exercise multiplicity handling.
inline CanonicalForm random_canonical_a(Index n, std::uint64_t seed,
                                        const GenParams& par = {}) {
  if (n < 1) throw std::invalid_argument("random_canonical_a: n must be >= 1");
  Rng rng(seed);
  detail::SigmaSpacing spacing(par, n);
  CanonicalForm form;
  form.flavor = Flavor::ComplexA;

  std::vector<Complex> mus;
  bool zero_family = false;

  auto fresh_mu = [&]() -> Complex {
    const auto draw = [&]() -> std::optional<Complex> {
      const double mag = par.scale * rng.uniform(0.4, 1.6);
      Complex mu;
      const double axis = rng.uniform();
      if (axis < 0.3)
        mu = Complex(mag, 0);
      else if (axis < 0.45)
        mu = Complex(0, mag);
      else
        mu = std::polar(mag, rng.uniform(0.0, 3.14159265358979323846));
      if (!spacing.admit(mu * mu)) return std::nullopt;
      return mu;
    };
    const Complex mu = detail::rejection_draw(draw);
    mus.push_back(mu);
    return mu;
  };
  auto family_mu = [&]() -> Complex {
    if (!mus.empty() && rng.coin(par.reuse_density))
      return mus[rng.pick(static_cast<Index>(mus.size()))];
    return fresh_mu();
  };
  auto want_zero = [&]() -> bool {
    if (zero_family) return rng.coin(par.zero_density + par.reuse_density);
    if (!rng.coin(par.zero_density)) return false;
    if (!spacing.admit(Complex(0, 0))) return false;
    zero_family = true;
    return true;
  };

  Index remaining = n;
  while (remaining > 0) {
    if (remaining >= 2 && rng.coin(par.pair_density)) {
      const double r = par.scale * rng.uniform(0.3, 2.0);
      const Complex mu = want_zero() ? Complex(0, 0) : family_mu();
      form.blocks.emplace_back(BlockS1(mu, r));
      remaining -= 2;
    } else {
      Complex lambda(0, 0);
      if (!want_zero()) {
        const Complex mu = family_mu();
        lambda = rng.coin(0.5) ? mu : -mu;
      }
      form.blocks.emplace_back(BlockLambda(lambda));
      remaining -= 1;
    }
  }
  return sort_blocks(std::move(form));
}

/// Random real-flavor form: [λ] with real λ, real-ν coupled blocks, rotation
/// blocks, and 4×4 realified coupled blocks. Negative and complex clusters
/// deliberately co-locate rotation and coupled structure at one σ.
inline CanonicalForm random_canonical_real(Index n, std::uint64_t seed,
                                           const GenParams& par = {}) {
  if (n < 1)
    throw std::invalid_argument("random_canonical_real: n must be >= 1");
  Rng rng(seed);
  detail::SigmaSpacing spacing(par, n);
  CanonicalForm form;
  form.flavor = Flavor::Real;

  // kind 0: zero family; 1: σ > 0; 2: σ < 0; 3: σ complex (Im > 0)
  struct Fam {
    int kind;
    Complex sigma;
  };
  std::vector<Fam> fams;
  const double s2 = par.scale * par.scale;

  auto fresh_fam = [&](int kind) -> std::optional<Fam> {
    const auto draw = [&]() -> std::optional<Fam> {
      Complex sigma;
      switch (kind) {
        case 0: sigma = Complex(0, 0); break;
        case 1: sigma = Complex(s2 * rng.uniform(0.2, 2.5), 0); break;
        case 2: sigma = Complex(-s2 * rng.uniform(0.2, 2.5), 0); break;
        default:
          sigma = std::polar(s2 * rng.uniform(0.3, 2.5),
                             rng.uniform(0.3, 2.8));
          break;
      }
      if (!spacing.admit(sigma)) return std::nullopt;
      return Fam{kind, sigma};
    };
    try {
      const Fam f = detail::rejection_draw(draw);
      fams.push_back(f);
      return f;
    } catch (const std::runtime_error&) {
      return std::nullopt;
    }
  };
  auto pick_fam = [&](Index max_dim) -> Fam {
    // kind 3 needs 2 columns minimum (rotation); 4 for a coupled pair block
    std::vector<int> kinds;
    if (max_dim >= 1) {
      kinds.push_back(0);
      kinds.push_back(1);
    }
    if (max_dim >= 2) kinds.push_back(2);
    if (max_dim >= 2) kinds.push_back(3);
    if (!fams.empty() && rng.coin(par.reuse_density)) {
      std::vector<Fam> fitting;
      for (const Fam& f : fams) {
        const Index need = (f.kind == 0 || f.kind == 1) ? 1 : 2;
        if (need <= max_dim) fitting.push_back(f);
      }
      if (!fitting.empty())
        return fitting[rng.pick(static_cast<Index>(fitting.size()))];
    }
    for (int attempt = 0; attempt < 64; ++attempt) {
      const int kind = kinds[rng.pick(static_cast<Index>(kinds.size()))];
      if (kind == 0) {
        for (const Fam& f : fams)
          if (f.kind == 0) return f;
      }
      if (const auto f = fresh_fam(kind)) return *f;
    }
    throw std::runtime_error("generator could not build a real family");
  };

  Index remaining = n;
  while (remaining > 0) {
    const Fam fam = pick_fam(remaining);
    switch (fam.kind) {
      case 0: {
        if (remaining >= 2 && rng.coin(par.pair_density)) {
          form.blocks.emplace_back(
              BlockS2(Complex(0, 0), par.scale * rng.uniform(0.3, 2.0)));
          remaining -= 2;
        } else {
          form.blocks.emplace_back(BlockLambda(Complex(0, 0)));
          remaining -= 1;
        }
        break;
      }
      case 1: {
        const double sig = fam.sigma.real();
        if (remaining >= 2 && rng.coin(par.pair_density)) {
          const double nu = rng.uniform(0.05, 0.9);
          form.blocks.emplace_back(
              BlockS2(Complex(nu, 0), std::sqrt(sig / nu)));
          remaining -= 2;
        } else {
          const double lam = std::sqrt(sig);
          form.blocks.emplace_back(
              BlockLambda(Complex(rng.coin(0.5) ? lam : -lam, 0)));
          remaining -= 1;
        }
        break;
      }
      case 2: {
        const double sig = fam.sigma.real();
        if (rng.coin(0.5)) {
          const double nu = -rng.uniform(0.05, 0.9);
          form.blocks.emplace_back(
              BlockS2(Complex(nu, 0), std::sqrt(sig / nu)));
        } else {
          form.blocks.emplace_back(BlockRealRotation(0, std::sqrt(-sig)));
        }
        remaining -= 2;
        break;
      }
      default: {
        if (remaining >= 4 && rng.coin(par.pair_density)) {
          const double mod = rng.uniform(0.05, 0.9);
          const double tau = std::sqrt(std::abs(fam.sigma) / mod);
          const Complex nu = fam.sigma / (tau * tau);
          form.blocks.emplace_back(BlockRealS2Pair(nu.real(), nu.imag(), tau));
          remaining -= 4;
        } else {
          const Complex mu = principal_sqrt(fam.sigma);
          const double re = rng.coin(0.5) ? mu.real() : -mu.real();
          form.blocks.emplace_back(BlockRealRotation(re, mu.imag()));
          remaining -= 2;
        }
        break;
      }
    }
  }
  return sort_blocks(std::move(form));
}

struct GeneratedInstance {
  ComplexMatrix matrix;
  CanonicalForm form;  // sorted ground truth
};

struct RealGeneratedInstance {
  RealMatrix matrix;
  CanonicalForm form;
};

/// assemble(random form) conjugated by a Haar unitary; squared-normal by
/// construction, with the generating form kept as ground truth.
inline GeneratedInstance random_squared_normal_with_form(
    Index n, std::uint64_t seed, const GenParams& par = {}) {
  GeneratedInstance out;
  out.form = random_canonical_a(n, seed, par);
  const ComplexMatrix c = assemble(out.form);
  const ComplexMatrix u = random_unitary(n, seed ^ detail::seed_mix);
  out.matrix = u * c * u.adjoint();
  return out;
}

inline ComplexMatrix random_squared_normal(Index n, std::uint64_t seed,
                                           const GenParams& par = {}) {
  return random_squared_normal_with_form(n, seed, par).matrix;
}

inline RealGeneratedInstance random_real_squared_normal_with_form(
    Index n, std::uint64_t seed, const GenParams& par = {}) {
  RealGeneratedInstance out;
  out.form = random_canonical_real(n, seed, par);
  const RealMatrix c = assemble_real(out.form);
  const RealMatrix q = random_orthogonal(n, seed ^ detail::seed_mix);
  out.matrix = q * c * q.transpose();
  return out;
}

inline RealMatrix random_real_squared_normal(Index n, std::uint64_t seed,
                                             const GenParams& par = {}) {
  return random_real_squared_normal_with_form(n, seed, par).matrix;
}

}  // namespace sqn
