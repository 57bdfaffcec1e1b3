#include <catch2/catch_amalgamated.hpp>

#include <sqn/sqn.hpp>

using namespace sqn;

namespace {

ComplexMatrix elementary(Index i, Index j) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(i, j) = 1;
  return m;
}

double witness_residual(const ComplexMatrix& a, const ComplexMatrix& b,
                        const ComplexMatrix& u) {
  return (u.adjoint() * a * u - b).norm();
}

}  // namespace

TEST_CASE("the two elementary nilpotents are unitarily similar") {
  const ComplexMatrix e12 = elementary(0, 1);
  const ComplexMatrix e21 = elementary(1, 0);
  const SimilarityDecision d = unitarily_similar(e12, e21);
  REQUIRE(d.similar);
  REQUIRE(d.witness.has_value());
  CHECK(unitarity_defect(*d.witness) <= 1e-10);
  CHECK(witness_residual(e12, e21, *d.witness) <= 1e-10);
}

TEST_CASE("different coupling strengths are not similar") {
  ComplexMatrix a = elementary(0, 1);
  a(0, 1) = 2;
  const ComplexMatrix b = elementary(0, 1);
  const SimilarityDecision d = unitarily_similar(a, b);
  CHECK_FALSE(d.similar);
  CHECK_FALSE(d.witness.has_value());
}

TEST_CASE("a reflection is similar to its diagonal form") {
  ComplexMatrix diag = ComplexMatrix::Zero(2, 2);
  diag(0, 0) = 1;
  diag(1, 1) = -1;
  ComplexMatrix swap(2, 2);
  swap << Complex(0, 0), Complex(1, 0), Complex(1, 0), Complex(0, 0);
  const SimilarityDecision d = unitarily_similar(diag, swap);
  REQUIRE(d.similar);
  CHECK(witness_residual(diag, swap, *d.witness) <= 1e-10);

  RealMatrix rdiag(2, 2);
  rdiag << 1, 0, 0, -1;
  RealMatrix rswap(2, 2);
  rswap << 0, 1, 1, 0;
  const RealSimilarityDecision rd = orthogonally_similar(rdiag, rswap);
  REQUIRE(rd.similar);
  CHECK(unitarity_defect(*rd.witness) <= 1e-10);
  CHECK((rd.witness->transpose() * rdiag * *rd.witness - rswap).norm() <= 1e-10);
}

TEST_CASE("the two coupled families are similar across the correspondence") {
  ComplexMatrix n(2, 2);
  n << Complex(1, 0), Complex(1, 0), Complex(0, 0), Complex(-1, 0);
  CanonicalForm image;
  image.flavor = Flavor::ComplexB;
  image.blocks.emplace_back(f_inverse(BlockS1(Complex(1, 0), 1)));
  const ComplexMatrix m = assemble(image);
  const SimilarityDecision d = unitarily_similar(n, m);
  REQUIRE(d.similar);
  CHECK(witness_residual(n, m, *d.witness) <= 1e-10);
}

TEST_CASE("rotation speeds separate real similarity classes") {
  CanonicalForm f1, f2;
  f1.flavor = f2.flavor = Flavor::Real;
  f1.blocks.emplace_back(BlockRealRotation(0, 2));
  f2.blocks.emplace_back(BlockRealRotation(0, 3));
  const RealSimilarityDecision d =
      orthogonally_similar(assemble_real(f1), assemble_real(f2));
  CHECK_FALSE(d.similar);
}

TEST_CASE("similarity is reflexive with a near-identity-quality witness") {
  const ComplexMatrix a = random_squared_normal(5, 42);
  const SimilarityDecision d = unitarily_similar(a, a);
  REQUIRE(d.similar);
  const double scale = scale_floor(frob(a));
  CHECK(witness_residual(a, a, *d.witness) <= 1e-7 * scale);
}

TEST_CASE("similarity is symmetric and transitive on conjugates") {
  const ComplexMatrix c = random_squared_normal(4, 7);
  const ComplexMatrix u1 = random_unitary(4, 100);
  const ComplexMatrix u2 = random_unitary(4, 200);
  const ComplexMatrix a = u1 * c * u1.adjoint();
  const ComplexMatrix b = u2 * c * u2.adjoint();
  const double scale = scale_floor(frob(c));

  const SimilarityDecision ab = unitarily_similar(a, b);
  const SimilarityDecision ba = unitarily_similar(b, a);
  const SimilarityDecision ac = unitarily_similar(a, c);
  const SimilarityDecision cb = unitarily_similar(c, b);
  REQUIRE(ab.similar);
  REQUIRE(ba.similar);
  REQUIRE(ac.similar);
  REQUIRE(cb.similar);
  CHECK(witness_residual(a, b, *ab.witness) <= 1e-7 * scale);
  // composing the two witnesses decides a ~ b through c
  const ComplexMatrix composed = *ac.witness * *cb.witness;
  CHECK(witness_residual(a, b, composed) <= 1e-7 * scale);
}

TEST_CASE("real similarity on generated instances") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const RealMatrix a = random_real_squared_normal(1 + seed % 7, seed);
    const RealMatrix q = random_orthogonal(a.rows(), seed + 999);
    const RealMatrix b = q * a * q.transpose();
    const RealSimilarityDecision d = orthogonally_similar(a, b);
    REQUIRE(d.similar);
    CHECK(unitarity_defect(*d.witness) <= 1e-10);
    const double scale = scale_floor(frob(a));
    CHECK((d.witness->transpose() * a * *d.witness - b).norm() <= 1e-7 * scale);
  }
}

TEST_CASE("different spectra are never similar") {
  const ComplexMatrix a = 2 * ComplexMatrix::Identity(3, 3);
  const ComplexMatrix b = 3 * ComplexMatrix::Identity(3, 3);
  CHECK_FALSE(unitarily_similar(a, b).similar);
}

TEST_CASE("similarity rejects malformed queries") {
  CHECK_THROWS_AS(
      unitarily_similar(ComplexMatrix::Zero(2, 2), ComplexMatrix::Zero(3, 3)),
      DimensionMismatchError);

  ComplexMatrix j3 = ComplexMatrix::Zero(3, 3);
  j3(0, 1) = j3(1, 2) = 1;
  try {
    unitarily_similar(j3, ComplexMatrix::Zero(3, 3));
    FAIL("expected NotSquaredNormalError");
  } catch (const NotSquaredNormalError& e) {
    CHECK(e.which() == "A");
  }
  try {
    unitarily_similar(ComplexMatrix::Zero(3, 3), j3);
    FAIL("expected NotSquaredNormalError");
  } catch (const NotSquaredNormalError& e) {
    CHECK(e.which() == "B");
  }
}

TEST_CASE("the trace oracle matches hand-computable cases") {
  const ComplexMatrix e12 = elementary(0, 1);
  ComplexMatrix doubled = e12;
  doubled(0, 1) = 2;
  CHECK_FALSE(trace_oracle_2x2(doubled, e12));
  CHECK(trace_oracle_2x2(e12, elementary(1, 0)));
  CHECK(trace_oracle_2x2(e12, e12));
  CHECK_THROWS_AS(trace_oracle_2x2(e12, ComplexMatrix::Zero(3, 3)),
                  DimensionMismatchError);
}

TEST_CASE("the trace oracle agrees with the canonical-form decision in 2x2") {
  Index checked = 0;
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const ComplexMatrix a = random_squared_normal(2, seed);
    ComplexMatrix b;
    if (seed % 2 == 0) {
      const ComplexMatrix u = random_unitary(2, seed + 5000);
      b = u * a * u.adjoint();
    } else {
      b = random_squared_normal(2, seed + 9000);
    }
    const bool via_form = unitarily_similar(a, b).similar;
    const bool via_traces = trace_oracle_2x2(a, b);
    CHECK(via_form == via_traces);
    ++checked;
  }
  CHECK(checked == 150);
}
