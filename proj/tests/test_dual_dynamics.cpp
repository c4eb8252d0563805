#include <catch2/catch_amalgamated.hpp>

#include "toract/dual_dynamics.hpp"
#include "toract/testing_random.hpp"

using namespace toract;

namespace {
const IntMatrix kHyperbolic = IntMatrix::from_rows({{2, 1}, {1, 1}});
const IntMatrix kRotation = IntMatrix::from_rows({{0, -1}, {1, 0}});
}  // namespace

TEST_CASE("orbit of the trivial group is the seed alone") {
  OrbitReport r = orbit_bfs({Int(1)}, {IntMatrix::identity(1)}, 100);
  CHECK(r.status == OrbitStatus::finite);
  CHECK(r.orbit == std::vector<Vec>{Vec{Int(1)}});
}

TEST_CASE("hyperbolic orbits exceed the bound") {
  OrbitReport r = orbit_bfs({Int(1), Int(0)}, {kHyperbolic}, 10000);
  CHECK(r.status == OrbitStatus::exceeded_bound);
  CHECK(r.visited > 10000);
}

TEST_CASE("transvection orbits exceed small bounds") {
  std::vector<IntMatrix> gens = sl_generators(2);
  OrbitReport r = orbit_bfs({Int(0), Int(1)}, gens, 50);
  CHECK(r.status == OrbitStatus::exceeded_bound);
}

TEST_CASE("zero seed is rejected") {
  CHECK_THROWS_AS(orbit_bfs({Int(0), Int(0)}, {kRotation}, 10), domain_error);
}

TEST_CASE("finite orbits are closed and canonically ordered") {
  OrbitReport r = orbit_bfs({Int(1), Int(0)}, {kRotation}, 100);
  REQUIRE(r.status == OrbitStatus::finite);
  CHECK(r.orbit.size() == 4);
  CHECK(orbit_closed(r.orbit, {kRotation}));
  std::vector<Vec> expect{Vec{Int(-1), Int(0)}, Vec{Int(0), Int(-1)}, Vec{Int(0), Int(1)},
                          Vec{Int(1), Int(0)}};
  CHECK(r.orbit == expect);
}

TEST_CASE("single-generator fast path agrees with the generic search") {
  // force the generic path by duplicating the generator with a second one
  OrbitReport fast = orbit_bfs({Int(1), Int(0)}, {kRotation}, 100);
  OrbitReport generic = orbit_bfs({Int(1), Int(0)}, {kRotation, kRotation * kRotation}, 100);
  REQUIRE(fast.status == OrbitStatus::finite);
  REQUIRE(generic.status == OrbitStatus::finite);
  CHECK(fast.orbit == generic.orbit);

  // small bound: both report exceeded with the same count
  OrbitReport f2 = orbit_bfs({Int(1), Int(0)}, {kRotation}, 2);
  CHECK(f2.status == OrbitStatus::exceeded_bound);
  CHECK(f2.visited == 3);
}

TEST_CASE("cyclic ergodicity verdicts") {
  SECTION("hyperbolic generator is ergodic") {
    ErgodicityVerdict v = cyclic_lambda_ergodicity(kHyperbolic);
    CHECK(v.outcome == ErgodicityOutcome::ergodic);
    CHECK(v.exact);
  }
  SECTION("finite-order generator is not ergodic, witness orbit pinned") {
    ErgodicityVerdict v = cyclic_lambda_ergodicity(kRotation);
    REQUIRE(v.outcome == ErgodicityOutcome::not_ergodic);
    CHECK(v.rou_order == 4);
    REQUIRE(v.witness.has_value());
    CHECK(*v.witness == Vec{Int(1), Int(0)});
    REQUIRE(v.witness_orbit.has_value());
    std::vector<Vec> expect{Vec{Int(-1), Int(0)}, Vec{Int(0), Int(-1)}, Vec{Int(0), Int(1)},
                            Vec{Int(1), Int(0)}};
    CHECK(v.witness_orbit->orbit == expect);
    // the witness really is fixed by A^d
    CHECK(pow(kRotation, 4).apply(*v.witness) == *v.witness);
  }
  SECTION("trivial group in dimension 1") {
    ErgodicityVerdict v = cyclic_lambda_ergodicity(IntMatrix::identity(1));
    REQUIRE(v.outcome == ErgodicityOutcome::not_ergodic);
    CHECK(*v.witness == Vec{Int(1)});
    CHECK(v.witness_orbit->orbit == std::vector<Vec>{Vec{Int(1)}});
  }
  SECTION("non-unimodular input is rejected") {
    CHECK_THROWS_AS(cyclic_lambda_ergodicity(IntMatrix::from_rows({{2, 0}, {0, 1}})),
                    precondition_error);
  }
}

TEST_CASE("full-action ergodicity check") {
  SECTION("k = 0 is vacuously ergodic") {
    GroupPresentation p = build_theorem1_family(0, 2, {});
    ErgodicityVerdict v = ergodicity_check(p, 3000, 2);
    CHECK(v.outcome == ErgodicityOutcome::ergodic);
    CHECK(v.exact);
  }
  SECTION("concrete example is ergodic") {
    GroupPresentation p = build_theorem1_family(2, 2, {kHyperbolic});
    ErgodicityVerdict v = ergodicity_check(p, 3000, 2);
    CHECK(v.outcome == ErgodicityOutcome::ergodic);
    CHECK(v.exact);
  }
  SECTION("trivial lambda with k = 1 is not ergodic, witness (1, 0, 0)") {
    GroupPresentation p = build_theorem1_family(1, 2, {IntMatrix::identity(1)});
    ErgodicityVerdict v = ergodicity_check(p, 3000, 2);
    REQUIRE(v.outcome == ErgodicityOutcome::not_ergodic);
    CHECK(v.exact);
    REQUIRE(v.witness.has_value());
    CHECK(*v.witness == Vec{Int(1), Int(0), Int(0)});
    REQUIRE(v.witness_orbit.has_value());
    CHECK(v.witness_orbit->status == OrbitStatus::finite);
    CHECK(v.witness_orbit->orbit == std::vector<Vec>{Vec{Int(1), Int(0), Int(0)}});
  }
}

TEST_CASE("ergodicity verdict is invariant under conjugating lambda") {
  Rng rng(41);
  for (int t = 0; t < 12; ++t) {
    IntMatrix a = t % 2 ? kHyperbolic : kRotation;
    IntMatrix p = testing::random_unimodular(rng, 2, 8);
    IntMatrix conj = p * a * inverse_unimodular(p);
    ErgodicityVerdict v1 = cyclic_lambda_ergodicity(a);
    ErgodicityVerdict v2 = cyclic_lambda_ergodicity(conj);
    CHECK(v1.outcome == v2.outcome);
    CHECK(v1.rou_order == v2.rou_order);
  }
}

TEST_CASE("freeness sweep") {
  GroupPresentation p = build_theorem1_family(2, 2, {kHyperbolic});

  SECTION("single transvection fixes a codimension-one subtorus") {
    IntMatrix e = IntMatrix::identity(4);
    e.at(2, 3) = 1;  // SL-block transvection inside the linear part
    CHECK(kernel_rank_over_rationals(e - IntMatrix::identity(4)) == 3);
  }

  SECTION("exhaustive sweep at short length") {
    FreenessReport r = freeness_check(p, 3);
    CHECK(r.all_proper);
    CHECK(r.elements_checked > 0);
    CHECK(r.max_fixed_dim < 4);
    CHECK_FALSE(r.truncated);
  }

  SECTION("random words of length up to 6 fix proper subtori") {
    Rng rng(42);
    std::vector<IntMatrix> gens;
    for (const GroupElement& g : p.gamma_generators) gens.push_back(g.linear_part());
    IntMatrix id = IntMatrix::identity(4);
    int checked = 0;
    while (checked < 500) {
      IntMatrix w = id;
      int len = static_cast<int>(rng.range(1, 6));
      for (int i = 0; i < len; ++i) {
        const IntMatrix& g =
            gens[static_cast<std::size_t>(rng.range(0, static_cast<long>(gens.size()) - 1))];
        w = rng.range(0, 1) ? w * g : w * inverse_unimodular(g);
      }
      if (w.is_identity()) continue;
      ++checked;
      CHECK(kernel_rank_over_rationals(w - id) < 4);
    }
  }
}

TEST_CASE("cross validation of cyclic verdicts at reduced scale") {
  CrossValidationResult ok = cross_validate_cyclic(kHyperbolic, 3, 2000);
  CHECK(ok.consistent);
  CHECK(ok.seeds_checked > 0);

  CrossValidationResult rot = cross_validate_cyclic(kRotation, 3, 2000);
  CHECK(rot.consistent);

  Rng rng(43);
  for (int t = 0; t < 6; ++t) {
    IntMatrix a = testing::random_unimodular(rng, 3, 8, 3, 5);
    CrossValidationResult r = cross_validate_cyclic(a, 2, 5000);
    CHECK(r.consistent);
  }
}
