#include <catch2/catch_amalgamated.hpp>

#include <sqn/sqn.hpp>

using namespace sqn;

namespace {

// (3 - sqrt(5))/2 and (1 + sqrt(5))/2, the image of mu = 1, r = 1
constexpr double kNuGolden = 0.3819660112501051;
constexpr double kTauGolden = 1.618033988749895;

bool cnear(Complex a, Complex b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

TEST_CASE("principal square root halves the [0, 2pi) argument") {
  CHECK(principal_sqrt(Complex(4, 0)) == Complex(2, 0));
  CHECK(principal_sqrt(Complex(-4, 0)) == Complex(0, 2));
  CHECK(principal_sqrt(Complex(0, 0)) == Complex(0, 0));
  CHECK(cnear(principal_sqrt(Complex(0, 2)), Complex(1, 1), 1e-15));
  CHECK(cnear(principal_sqrt(Complex(0, -2)), Complex(-1, 1), 1e-15));

  // the root always lands in the upper closed half plane, arg in [0, pi)
  for (double t = 0.1; t < 6.2; t += 0.37) {
    const Complex z = std::polar(2.5, t);
    const Complex w = principal_sqrt(z);
    CHECK(cnear(w * w, z, 1e-13));
    const double a = std::arg(w);
    CHECK(a >= 0.0);
    CHECK(a < M_PI);
  }

  // squares of real values round-trip with exactly zero imaginary part
  CHECK(principal_sqrt(Complex(7.3 * 7.3, 0)).imag() == 0.0);
  CHECK(principal_sqrt(Complex(-7.3 * 7.3, 0)).real() == 0.0);
}

TEST_CASE("coupling root solves rho = sqrt(chi)/(1 - chi)") {
  CHECK(coupling_root(0) == 0.0);
  CHECK(std::abs(coupling_root(1) - 0.6180339887498949) <= 1e-15);
  double prev = -1;
  for (double rho = 0; rho < 50; rho += 0.173) {
    const double s = coupling_root(rho);
    CHECK(s >= 0.0);
    CHECK(s < 1.0);
    CHECK(s > prev);
    prev = s;
    const double chi = s * s;
    CHECK(std::abs(std::sqrt(chi) / (1 - chi) - rho) <= 1e-12 * (1 + rho));
  }
}

TEST_CASE("the golden pair: mu = 1, r = 1 maps to the golden ratio") {
  const BlockS2 s2 = f_inverse(BlockS1(Complex(1, 0), 1));
  CHECK(std::abs(s2.nu.real() - kNuGolden) <= 1e-12);
  CHECK(s2.nu.imag() == 0.0);
  CHECK(std::abs(s2.tau - kTauGolden) <= 1e-12);

  const BlockS1 back = f_forward(s2);
  CHECK(cnear(back.mu, Complex(1, 0), 1e-12));
  CHECK(std::abs(back.r - 1) <= 1e-12);
}

TEST_CASE("an imaginary mu lands on the negative nu axis exactly") {
  const BlockS2 s2 = f_inverse(BlockS1(Complex(0, 1), 1));
  CHECK(std::abs(s2.nu.real() + kNuGolden) <= 1e-12);
  CHECK(s2.nu.imag() == 0.0);
  CHECK(std::abs(s2.tau - kTauGolden) <= 1e-12);
}

TEST_CASE("mu = 0 maps to nu = 0, tau = r") {
  const BlockS2 s2 = f_inverse(BlockS1(Complex(0, 0), 2.5));
  CHECK(s2.nu == Complex(0, 0));
  CHECK(s2.tau == 2.5);
  const BlockS1 back = f_forward(s2);
  CHECK(back.mu == Complex(0, 0));
  CHECK(back.r == 2.5);
}

TEST_CASE("f round-trips across the parameter range") {
  for (double mag : {0.0, 1e-3, 0.7, 5.0, 2e3}) {
    for (double phi : {0.0, 0.3, 1.2, M_PI / 2, 2.1, 3.0}) {
      for (double r : {1e-2, 1.0, 40.0}) {
        const Complex mu = std::polar(mag, phi);
        const BlockS1 s1(mag == 0 ? Complex(0, 0) : mu, r);
        const BlockS2 s2 = f_inverse(s1);
        CHECK(std::abs(s2.nu) < 1.0);
        CHECK(s2.tau > 0.0);
        const BlockS1 back = f_forward(s2);
        const double scale = 1 + std::max(std::abs(s1.mu), s1.r);
        CHECK(std::abs(back.mu - s1.mu) <= 1e-12 * scale);
        CHECK(std::abs(back.r - s1.r) <= 1e-12 * scale);
      }
    }
  }
  for (double nu_re : {-0.95, -0.3, 0.0, 0.4, 0.93}) {
    for (double nu_im : {-0.2, 0.0, 0.31}) {
      if (std::hypot(nu_re, nu_im) >= 1) continue;
      for (double tau : {0.05, 1.0, 12.0}) {
        const BlockS2 s2(Complex(nu_re, nu_im), tau);
        const BlockS2 back = f_inverse(f_forward(s2));
        CHECK(cnear(back.nu, s2.nu, 1e-12 * (1 + std::abs(s2.nu))));
        CHECK(std::abs(back.tau - s2.tau) <= 1e-12 * (1 + s2.tau));
      }
    }
  }
}

TEST_CASE("polar data satisfies the defining identities") {
  const PolarDecomp p = make_polar(Complex(1, 0), 1);
  CHECK(p.rho == 1.0);
  CHECK(p.phi == 0.0);
  CHECK(std::abs(p.chi - kNuGolden) <= 1e-12);
  CHECK(p.psi == 0.0);

  const PolarDecomp q = make_polar(Complex(0, 3), 2);
  CHECK(q.rho == 1.5);
  CHECK(std::abs(q.phi - M_PI / 2) <= 1e-15);
  CHECK(std::abs(q.psi - M_PI) <= 1e-15);
}

TEST_CASE("the intertwiner is unitary and intertwines") {
  const BlockS1 s1(Complex(1, 0), 1);
  const BlockS2 s2 = f_inverse(s1);
  const ComplexMatrix s = witness_S(s1, s2);
  CHECK(unitarity_defect(s) <= 1e-14);
  const ComplexMatrix lhs = block_matrix(s1) * s;
  const ComplexMatrix rhs = s * block_matrix(s2);
  CHECK((lhs - rhs).norm() <= 1e-12);
}

TEST_CASE("the intertwiner works across the parameter range") {
  for (double mag : {0.0, 0.4, 3.0}) {
    for (double phi : {0.0, 1.0, 2.8}) {
      for (double r : {0.1, 1.0, 7.0}) {
        const Complex mu = std::polar(mag, phi);
        const BlockS1 s1(mag == 0 ? Complex(0, 0) : mu, r);
        const BlockS2 s2 = f_inverse(s1);
        const ComplexMatrix s = witness_S(s1, s2);
        CHECK(unitarity_defect(s) <= 1e-13);
        const double scale = std::max({1.0, std::abs(s1.mu), s2.tau});
        CHECK((block_matrix(s1) * s - s * block_matrix(s2)).norm() <=
              1e-12 * scale);
      }
    }
  }
}

TEST_CASE("mismatched pairs are refused") {
  CHECK_THROWS_AS(witness_S(BlockS1(Complex(1, 0), 1), BlockS2(Complex(0.5, 0), 1)),
                  MismatchedPairError);
  CHECK_THROWS_AS(witness_S(BlockS1(Complex(0, 0), 2), BlockS2(Complex(0, 0), 1)),
                  MismatchedPairError);
}
