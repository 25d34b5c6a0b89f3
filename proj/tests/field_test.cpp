#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "pruw/error.hpp"
#include "pruw/field.hpp"
#include "pruw/rng.hpp"

using namespace pruw;

TEST_CASE("modular arithmetic anchors") {
  const Fq f7(7);
  CHECK(f7.add(5, 4) == 2);
  CHECK(f7.mul(3, 0) == 0);
  CHECK(f7.sub(2, 5) == 4);
  CHECK(f7.neg(3) == 4);
  CHECK(f7.neg(0) == 0);
  const Fq f2053(2053);
  CHECK(f2053.add(2052, 1) == 0);
  CHECK(f2053.mul(2052, 2052) == 1);  // (-1)^2
}

TEST_CASE("inverses") {
  const Fq f7(7);
  CHECK(f7.inverse(3) == 5);
  CHECK(f7.inverse(1) == 1);
  const Fq f11(11);
  CHECK(f11.inverse(2) == 6);
  CHECK_THROWS_AS(f7.inverse(0), FieldError);
  for (FieldElement a = 1; a < 11; ++a) {
    CHECK(f11.mul(a, f11.inverse(a)) == 1);
  }
}

TEST_CASE("modulus must be prime and bounded") {
  CHECK_THROWS_AS(Fq(1), FieldError);
  CHECK_THROWS_AS(Fq(6), FieldError);
  CHECK_THROWS_AS(Fq(2052), FieldError);
  CHECK(Fq::is_prime(2));
  CHECK(Fq::is_prime(2053));
  CHECK(!Fq::is_prime(2055));
  CHECK(!Fq::is_prime(1));
  CHECK(Fq::is_prime(2147483647));  // 2^31 - 1
  // 2147483659 is prime but exceeds the 31-bit multiply guard.
  CHECK_THROWS_WITH_AS(Fq(2147483659ULL), "modulus too large (must fit 31 bits)",
                       FieldError);
}

TEST_CASE("field axioms on sampled triples") {
  const Fq fq(2053);
  RngStream rng(11, "field-axioms");
  for (int trial = 0; trial < 500; ++trial) {
    const FieldElement a = rng.field_element(2053);
    const FieldElement b = rng.field_element(2053);
    const FieldElement c = rng.field_element(2053);
    CHECK(fq.add(fq.add(a, b), c) == fq.add(a, fq.add(b, c)));
    CHECK(fq.mul(fq.mul(a, b), c) == fq.mul(a, fq.mul(b, c)));
    CHECK(fq.mul(a, fq.add(b, c)) == fq.add(fq.mul(a, b), fq.mul(a, c)));
    CHECK(fq.add(a, fq.neg(a)) == 0);
    if (a != 0) {
      CHECK(fq.mul(a, fq.inverse(a)) == 1);
    }
  }
}

TEST_CASE("pow matches repeated multiplication") {
  const Fq fq(11);
  for (FieldElement base = 0; base < 11; ++base) {
    FieldElement acc = 1;
    for (unsigned e = 0; e < 12; ++e) {
      CHECK(fq.pow(base, e) == acc);
      acc = fq.mul(acc, base);
    }
  }
}

TEST_CASE("vector operations check shape and modulus") {
  const FieldVector a(7, {1, 2, 3});
  const FieldVector b(7, {6, 5, 4});
  CHECK(add(a, b) == FieldVector(7, {0, 0, 0}));
  CHECK(sub(a, b) == FieldVector(7, {2, 4, 6}));
  CHECK(scale(2, a) == FieldVector(7, {2, 4, 6}));
  CHECK(inner_product(a, b) == (6 + 10 + 12) % 7);
  CHECK_THROWS_AS(add(a, FieldVector(7, {1, 2})), FieldError);
  CHECK_THROWS_AS(add(a, FieldVector(11, {1, 2, 3})), FieldError);
}

TEST_CASE("matrix operations") {
  FieldMatrix m(7, 2, 3);
  m.at(0, 0) = 1;
  m.at(0, 1) = 2;
  m.at(0, 2) = 3;
  m.at(1, 0) = 4;
  m.at(1, 1) = 5;
  m.at(1, 2) = 6;
  const FieldVector v(7, {1, 1, 1});
  CHECK(matvec(m, v) == FieldVector(7, {6, 1}));
  CHECK(column(m, 1) == FieldVector(7, {2, 5}));
  CHECK(FieldMatrix::identity(7, 2).at(0, 0) == 1);
  CHECK(FieldMatrix::identity(7, 2).at(0, 1) == 0);
  CHECK_THROWS_AS(matvec(m, FieldVector(7, {1, 1})), FieldError);
}

TEST_CASE("eval_poly anchors and linearity") {
  CHECK(eval_poly(FieldVector(7, std::vector<FieldElement>{5}), 3) == 5);
  CHECK(eval_poly(FieldVector(7, {1, 1}), 3) == 4);
  CHECK(eval_poly(FieldVector(7, {2, 0, 1}), 3) == 4);  // 2 + 9 = 11 = 4
  const Fq fq(2053);
  RngStream rng(3, "poly-linearity");
  for (int trial = 0; trial < 200; ++trial) {
    const FieldVector a(2053, rng.field_vector(2053, 6));
    const FieldVector b(2053, rng.field_vector(2053, 6));
    const FieldElement x = rng.field_element(2053);
    CHECK(eval_poly(add(a, b), x) ==
          fq.add(eval_poly(a, x), eval_poly(b, x)));
  }
}

TEST_CASE("solve_linear anchors") {
  SUBCASE("identity system") {
    const FieldMatrix a = FieldMatrix::identity(7, 3);
    const FieldVector b(7, {4, 5, 6});
    CHECK(solve_linear(a, b) == b);
  }
  SUBCASE("hand-solved 2x2") {
    FieldMatrix a(7, 2, 2);
    a.at(0, 0) = 1;
    a.at(0, 1) = 1;
    a.at(1, 0) = 1;
    a.at(1, 1) = 2;
    CHECK(solve_linear(a, FieldVector(7, {3, 5})) == FieldVector(7, {1, 2}));
  }
  SUBCASE("singular matrix names the pivot column, 1-based") {
    FieldMatrix a(7, 2, 2);
    a.at(0, 0) = 1;
    a.at(0, 1) = 2;
    a.at(1, 0) = 2;
    a.at(1, 1) = 4;  // row 2 = 2 * row 1
    try {
      solve_linear(a, FieldVector(7, {1, 2}));
      FAIL("expected SingularMatrixError");
    } catch (const SingularMatrixError& e) {
      CHECK(e.pivot_column == 2);
    }
  }
}

TEST_CASE("solve_linear recovers planted solutions up to 20x20") {
  RngStream rng(17, "planted-solve");
  const Fq fq(2053);
  for (std::size_t n = 1; n <= 20; ++n) {
    // Random matrices over a large field are almost surely invertible;
    // retry on the rare singular draw.
    for (int attempt = 0;; ++attempt) {
      REQUIRE(attempt < 10);
      FieldMatrix a(2053, n, n);
      a.e = rng.field_vector(2053, n * n);
      const FieldVector x(2053, rng.field_vector(2053, n));
      FieldVector b(2053, n);
      for (std::size_t i = 0; i < n; ++i) {
        FieldElement acc = 0;
        for (std::size_t j = 0; j < n; ++j) {
          acc = fq.add(acc, fq.mul(a.at(i, j), x[j]));
        }
        b[i] = acc;
      }
      try {
        CHECK(solve_linear(a, b) == x);
        break;
      } catch (const SingularMatrixError&) {
        continue;
      }
    }
  }
}

TEST_CASE("Cauchy-Vandermonde system with planted solution") {
  // The decoding shape for ell=1, N=6: columns 1/(f_1-a_n), 1, a_n, ...,
  // a_n^4 with distinct alphas; solve must recover the planted vector.
  const Fq fq(2053);
  const FieldElement f1 = 10;
  const std::vector<FieldElement> alphas = {1, 2, 3, 4, 5, 6};
  RngStream rng(23, "cauchy-vandermonde");
  const FieldVector x(2053, rng.field_vector(2053, 6));
  FieldMatrix a(2053, 6, 6);
  FieldVector b(2053, 6);
  for (int n = 0; n < 6; ++n) {
    a.at(n, 0) = fq.inverse(fq.sub(f1, alphas[n]));
    FieldElement power = 1;
    for (int j = 0; j < 5; ++j) {
      a.at(n, 1 + j) = power;
      power = fq.mul(power, alphas[n]);
    }
    FieldElement acc = 0;
    for (int j = 0; j < 6; ++j) {
      acc = fq.add(acc, fq.mul(a.at(n, j), x[j]));
    }
    b[n] = acc;
  }
  CHECK(solve_linear(a, b) == x);
}
