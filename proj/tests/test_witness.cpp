#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "toract/witness.hpp"

using namespace toract;

namespace {
const IntMatrix kHyperbolic = IntMatrix::from_rows({{2, 1}, {1, 1}});

// Brute-force oracle: build the shifted coefficient array by explicit index
// arithmetic and sum squared differences in rationals.
Rat brute_force_shift_deviation_sq(std::size_t window) {
  long l = static_cast<long>(window);
  auto coeff = [&](long j) {
    if (j < -l || j > l) return Rat(0);
    Rat c = Rat(1) - Rat(std::abs(j), l + 1);
    c.canonicalize();
    return c;
  };
  Rat norm = 0, sum = 0;
  for (long j = -l; j <= l; ++j) norm += coeff(j) * coeff(j);
  for (long j = -l - 1; j <= l + 1; ++j) {
    Rat d = coeff(j - 1) - coeff(j);
    sum += d * d;
  }
  return sum / norm;
}
}  // namespace

TEST_CASE("fixed seed character gives an exactly invariant witness") {
  ASIWitness w = asi_witness(IntMatrix::identity(2), {Int(1), Int(0)}, 16);
  CHECK(w.deviation == 0.0);
  CHECK(w.deviation_sq == 0);
  CHECK(w.points.size() == 1);
}

TEST_CASE("hyperbolic witness matches the closed-form Fejer shift deviation") {
  for (std::size_t l : {4ul, 8ul, 16ul, 33ul}) {
    ASIWitness w = asi_witness(kHyperbolic, {Int(1), Int(0)}, l);
    CHECK(w.deviation_sq == fejer_shift_deviation_sq(l));
    CHECK(w.deviation_sq == brute_force_shift_deviation_sq(l));
    // mean zero: the zero frequency never appears among the orbit points
    for (const Vec& p : w.points) CHECK_FALSE(is_zero_vec(p));
    CHECK(w.mean == 0.0);
    CHECK(w.l2_norm == 1.0);
    // deviation is below sqrt(2/(L+1))
    CHECK(w.deviation <= std::sqrt(2.0 / (static_cast<double>(l) + 1)) + 1e-9);
  }
}

TEST_CASE("doubling the window follows the closed form and decays") {
  for (std::size_t l : {8ul, 16ul, 64ul}) {
    ASIWitness w1 = asi_witness(kHyperbolic, {Int(1), Int(0)}, l);
    ASIWitness w2 = asi_witness(kHyperbolic, {Int(1), Int(0)}, 2 * l);
    CHECK(std::abs(w1.deviation_sq.get_d() - fejer_shift_deviation_sq(l).get_d()) < 1e-12);
    CHECK(std::abs(w2.deviation_sq.get_d() - fejer_shift_deviation_sq(2 * l).get_d()) < 1e-12);
    CHECK(w2.deviation <= 0.75 * w1.deviation);
  }
}

TEST_CASE("orbit collision inside the window is rejected") {
  IntMatrix rot = IntMatrix::from_rows({{0, -1}, {1, 0}});
  CHECK_THROWS_AS(asi_witness(rot, {Int(1), Int(0)}, 3), precondition_error);
}

TEST_CASE("lifted witness deviations equal the lambda deviations exactly") {
  GroupPresentation p = build_theorem1_family(2, 2, {kHyperbolic});
  ASIWitness w = asi_witness(kHyperbolic, {Int(1), Int(0)}, 32);
  auto devs = lifted_witness_deviations(w, p);
  REQUIRE(devs.size() == p.gamma_generators.size());
  for (std::size_t t = 0; t < devs.size(); ++t) {
    IntMatrix lam = quotient_pi(p.gamma_generators[t]);
    if (lam.is_identity()) {
      CHECK(devs[t].deviation_sq == 0);
    } else {
      CHECK(devs[t].deviation_sq == w.deviation_sq);
    }
  }
}

TEST_CASE("invariant orbit witness for a finite-order generator") {
  IntMatrix rot = IntMatrix::from_rows({{0, -1}, {1, 0}});
  ASIWitness w = invariant_orbit_witness(rot);
  CHECK(w.deviation == 0.0);
  CHECK(w.points.size() == 4);
  CHECK_THROWS_AS(invariant_orbit_witness(kHyperbolic), precondition_error);
}

TEST_CASE("affine witness: linear generators are exactly invariant") {
  RemarkFourFamily fam = build_remark4_family(3, golden_mean_surrogate());
  ASIWitness w = affine_asi_witness(fam, 24);
  std::size_t linear = fam.linear_generators.size();
  REQUIRE(w.per_generator.size() == linear + fam.n);
  for (std::size_t i = 0; i < linear; ++i) {
    CHECK(w.per_generator[i].deviation_sq == 0);
    CHECK(w.per_generator[i].deviation == 0.0);
  }
  // rotation along the first coordinate moves the witness, the others do not
  CHECK(w.per_generator[linear].deviation > 0.0);
  for (std::size_t t = 1; t < fam.n; ++t)
    CHECK(w.per_generator[linear + t].deviation == 0.0);
  // the deviation sum evaluated directly
  double alpha = fam.alpha.as_double();
  double expect = 0.0;
  for (std::size_t i = 0; i < w.points.size(); ++i) {
    double c = w.weights[i].get_d();
    double s = std::sin(M_PI * w.points[i][0].get_d() * alpha);
    expect += 4.0 * c * c * s * s;
  }
  expect = std::sqrt(expect / w.norm_sq.get_d());
  CHECK(w.deviation == Catch::Approx(expect).epsilon(1e-12));
}

TEST_CASE("affine witness pinned case: window one, alpha one half") {
  RemarkFourFamily fam = build_remark4_family(3, AlphaSurrogate{Rat(1, 2), 0.0});
  ASIWitness w = affine_asi_witness(fam, 1);
  // single character q = 1, normalized weight 1: |e^{i pi} - 1|^2 = 4
  CHECK(w.deviation == Catch::Approx(2.0).epsilon(1e-12));
  std::size_t linear = fam.linear_generators.size();
  CHECK(w.per_generator[linear].deviation == Catch::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("larger window lowers the affine rotation deviation") {
  RemarkFourFamily fam = build_remark4_family(3, golden_mean_surrogate());
  ASIWitness small = affine_asi_witness(fam, 8);
  ASIWitness large = affine_asi_witness(fam, 128);
  CHECK(large.deviation < small.deviation);
}
