#include <catch2/catch_amalgamated.hpp>

#include "toract/int_matrix.hpp"
#include "toract/int_polynomial.hpp"
#include "toract/testing_random.hpp"

using namespace toract;

TEST_CASE("determinant on pinned matrices") {
  CHECK(det(IntMatrix::identity(3)) == 1);
  CHECK(det(IntMatrix::from_rows({{2, 1}, {1, 1}})) == 1);  // 2*1 - 1*1
  CHECK(det(IntMatrix::from_rows({{0, -1}, {1, 0}})) == 1);
  CHECK(det(IntMatrix::from_rows({{3, 1}, {6, 2}})) == 0);
  CHECK(det(IntMatrix()) == 1);
  CHECK_THROWS_AS(det(IntMatrix(2, 3)), dimension_error);
}

TEST_CASE("determinant is multiplicative") {
  Rng rng(11);
  for (int t = 0; t < 200; ++t) {
    std::size_t n = 1 + static_cast<std::size_t>(rng.range(0, 4));
    IntMatrix a = testing::random_matrix(rng, n, n, 9);
    IntMatrix b = testing::random_matrix(rng, n, n, 9);
    CHECK(det(a * b) == det(a) * det(b));
  }
}

TEST_CASE("kernel rank over the rationals") {
  CHECK(kernel_rank_over_rationals(IntMatrix(2, 2)) == 2);
  IntMatrix id3 = IntMatrix::identity(3);
  CHECK(kernel_rank_over_rationals(id3 - id3) == 3);
  // E_12 - I in size 3 has a single nonzero entry, rank 1, nullity 2.
  IntMatrix e12 = IntMatrix::identity(3);
  e12.at(0, 1) = 1;
  CHECK(kernel_rank_over_rationals(e12 - IntMatrix::identity(3)) == 2);
  CHECK(kernel_rank_over_rationals(IntMatrix::identity(4)) == 0);
}

TEST_CASE("integer kernel basis spans the null space") {
  Rng rng(12);
  for (int t = 0; t < 120; ++t) {
    std::size_t r = 1 + static_cast<std::size_t>(rng.range(0, 3));
    std::size_t c = 1 + static_cast<std::size_t>(rng.range(0, 3));
    IntMatrix m = testing::random_matrix(rng, r, c, 6);
    auto basis = integer_kernel_basis(m);
    CHECK(basis.size() == kernel_rank_over_rationals(m));
    for (const Vec& v : basis) {
      CHECK(!is_zero_vec(v));
      CHECK(is_primitive(v));
      CHECK(is_zero_vec(m.apply(v)));
    }
  }
}

TEST_CASE("unimodular completion on pinned vectors") {
  SECTION("standard basis vector maps to the identity") {
    IntMatrix a = unimodular_completion({Int(1), Int(0), Int(0)});
    CHECK(a == IntMatrix::identity(3));
  }
  SECTION("(2,3)") {
    Vec w{Int(2), Int(3)};
    IntMatrix a = unimodular_completion(w);
    CHECK(det(a) == 1);
    CHECK(a.at(0, 0) == 2);
    CHECK(a.at(1, 0) == 3);
  }
  SECTION("(6,10,15)") {
    Vec w{Int(6), Int(10), Int(15)};
    IntMatrix a = unimodular_completion(w);
    CHECK(det(a) == 1);
    for (std::size_t i = 0; i < 3; ++i) CHECK(a.at(i, 0) == w[i]);
  }
  SECTION("non-primitive input is rejected with the gcd") {
    try {
      unimodular_completion({Int(2), Int(4)});
      FAIL("expected precondition_error");
    } catch (const precondition_error& e) {
      CHECK(std::string(e.what()).find("gcd = 2") != std::string::npos);
    }
  }
}

TEST_CASE("unimodular completion holds on random primitive vectors") {
  Rng rng(13);
  int built = 0;
  while (built < 1000) {
    std::size_t n = 1 + static_cast<std::size_t>(rng.range(0, 5));
    Vec w(n);
    for (Int& x : w) x = rng.range(-40, 40);
    if (content(w) != 1) continue;
    if (n == 1 && w[0] == -1) continue;  // no det 1 completion in dimension 1
    ++built;
    IntMatrix a = unimodular_completion(w);
    CHECK(det(a) == 1);
    for (std::size_t i = 0; i < n; ++i) CHECK(a.at(i, 0) == w[i]);
  }
}

TEST_CASE("unimodular inverse") {
  Rng rng(14);
  for (int t = 0; t < 100; ++t) {
    std::size_t n = 1 + static_cast<std::size_t>(rng.range(0, 4));
    IntMatrix a = testing::random_unimodular(rng, n, 12);
    IntMatrix inv = inverse_unimodular(a);
    CHECK((a * inv).is_identity());
    CHECK((inv * a).is_identity());
  }
  CHECK_THROWS_AS(inverse_unimodular(IntMatrix::from_rows({{2, 0}, {0, 2}})), precondition_error);
}

TEST_CASE("characteristic polynomials of pinned matrices") {
  CHECK(char_poly(IntMatrix::identity(2)) == IntPolynomial::from_coeffs({1, -2, 1}));
  // det(xI - A) for A = [[2,1],[1,1]] expands to x^2 - 3x + 1.
  CHECK(char_poly(IntMatrix::from_rows({{2, 1}, {1, 1}})) ==
        IntPolynomial::from_coeffs({1, -3, 1}));
  CHECK(char_poly(IntMatrix::from_rows({{0, -1}, {1, 0}})) ==
        IntPolynomial::from_coeffs({1, 0, 1}));
}

TEST_CASE("characteristic polynomial is a conjugation invariant") {
  Rng rng(15);
  for (int t = 0; t < 100; ++t) {
    std::size_t n = 1 + static_cast<std::size_t>(rng.range(0, 4));
    IntMatrix a = testing::random_matrix(rng, n, n, 8);
    IntMatrix p = testing::random_unimodular(rng, n, 10);
    CHECK(char_poly(inverse_unimodular(p) * a * p) == char_poly(a));
  }
}

TEST_CASE("characteristic polynomial constant term is the signed determinant") {
  Rng rng(16);
  for (int t = 0; t < 80; ++t) {
    std::size_t n = 1 + static_cast<std::size_t>(rng.range(0, 4));
    IntMatrix a = testing::random_matrix(rng, n, n, 8);
    Int c0 = char_poly(a).coeff(0);
    Int expect = det(a);
    if (n % 2 == 1) expect = -expect;
    CHECK(c0 == expect);
  }
}

TEST_CASE("cyclotomic polynomials") {
  CHECK(cyclotomic_poly(1) == IntPolynomial::from_coeffs({-1, 1}));
  CHECK(cyclotomic_poly(2) == IntPolynomial::from_coeffs({1, 1}));
  // x^4 - 1 = Phi_1 * Phi_2 * Phi_4; independent multiplication check below.
  CHECK(cyclotomic_poly(4) == IntPolynomial::from_coeffs({1, 0, 1}));
  CHECK(cyclotomic_poly(6) == IntPolynomial::from_coeffs({1, -1, 1}));
  CHECK_THROWS_AS(cyclotomic_poly(0), domain_error);
}

TEST_CASE("product of cyclotomics over divisors of N is x^N - 1") {
  for (unsigned long n = 1; n <= 30; ++n) {
    IntPolynomial prod = IntPolynomial::from_coeffs({1});
    for (unsigned long d = 1; d <= n; ++d)
      if (n % d == 0) prod = prod * cyclotomic_poly(d);
    IntPolynomial target = IntPolynomial::monomial(n) - IntPolynomial::from_coeffs({1});
    CHECK(prod == target);
  }
}

TEST_CASE("root of unity eigenvalue detection") {
  auto rot = has_root_of_unity_eigenvalue(IntMatrix::from_rows({{0, -1}, {1, 0}}));
  CHECK(rot.yes);
  CHECK(rot.order == 4);

  auto hyp = has_root_of_unity_eigenvalue(IntMatrix::from_rows({{2, 1}, {1, 1}}));
  CHECK_FALSE(hyp.yes);

  auto id = has_root_of_unity_eigenvalue(IntMatrix::identity(5));
  CHECK(id.yes);
  CHECK(id.order == 1);

  CHECK_THROWS_AS(has_root_of_unity_eigenvalue(IntMatrix::identity(17)), out_of_scope_error);
}

TEST_CASE("hyperbolic example has nonzero remainder by every candidate cyclotomic") {
  IntPolynomial cp = char_poly(IntMatrix::from_rows({{2, 1}, {1, 1}}));
  for (unsigned long d : {1ul, 2ul, 3ul, 4ul, 6ul}) {
    CHECK_FALSE(cp.divmod_monic(cyclotomic_poly(d)).second.is_zero());
  }
}

TEST_CASE("root of unity verdict agrees with kernel ranks of A^d - I") {
  Rng rng(17);
  for (int t = 0; t < 60; ++t) {
    std::size_t n = 1 + static_cast<std::size_t>(rng.range(0, 3));
    IntMatrix a = testing::random_unimodular(rng, n, 6);
    auto verdict = has_root_of_unity_eigenvalue(a);
    bool kernel_hit = false;
    for (unsigned long d : root_of_unity_orders(n)) {
      if (kernel_rank_over_rationals(pow(a, static_cast<long>(d)) - IntMatrix::identity(n)) >= 1) {
        kernel_hit = true;
        break;
      }
    }
    CHECK(verdict.yes == kernel_hit);
    if (verdict.yes) {
      CHECK(kernel_rank_over_rationals(pow(a, static_cast<long>(verdict.order)) -
                                       IntMatrix::identity(n)) >= 1);
    }
  }
}

TEST_CASE("polynomial division and pseudo remainder") {
  IntPolynomial f = IntPolynomial::from_coeffs({-1, 0, 0, 0, 1});  // x^4 - 1
  IntPolynomial d = IntPolynomial::from_coeffs({1, 0, 1});         // x^2 + 1
  auto [q, r] = f.divmod_monic(d);
  CHECK(r.is_zero());
  CHECK(q == IntPolynomial::from_coeffs({-1, 0, 1}));
  CHECK(d.divides(f));
  CHECK_FALSE(IntPolynomial::from_coeffs({1, 1}).divides(IntPolynomial::from_coeffs({1, 0, 1})));
  // non-monic divisibility goes through the pseudo remainder
  IntPolynomial two_x_minus_2 = IntPolynomial::from_coeffs({-2, 2});
  CHECK(two_x_minus_2.divides(IntPolynomial::from_coeffs({-1, 0, 0, 1})));  // x^3 - 1 at x = 1
}
