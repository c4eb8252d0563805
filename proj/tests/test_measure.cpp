#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "toract/measure_validator.hpp"

using namespace toract;

namespace {

std::vector<double> sampled_cos(std::size_t dimension, std::size_t resolution) {
  std::uint64_t cells = 1;
  for (std::size_t i = 0; i < dimension; ++i) cells *= resolution;
  std::vector<double> f(cells);
  std::uint64_t stride = cells / resolution;  // first coordinate is the leading digit
  for (std::uint64_t x = 0; x < cells; ++x) {
    double first = static_cast<double>(x / stride) / static_cast<double>(resolution);
    f[x] = std::cos(2.0 * M_PI * first);
  }
  return f;
}

// Graph measure of the grid permutation induced by g.
DiscreteMeasure graph_measure(const IntMatrix& g, std::size_t dimension, std::size_t resolution) {
  GridAction act(g, dimension, resolution);
  DiscreteMeasure m;
  m.dimension = dimension;
  m.resolution = resolution;
  std::uint64_t cells = act.cells();
  double w = 1.0 / static_cast<double>(cells);
  for (std::uint64_t x = 0; x < cells; ++x)
    m.weights.emplace_back(DiscreteMeasure::pair_key(x, act(x), cells), w);
  m.normalize_storage();
  return m;
}

}  // namespace

TEST_CASE("product of uniforms: marginals pass, diagonal and correlation fail") {
  std::size_t res = 16;
  DiscreteMeasure m = product_of_uniforms(1, res);
  std::vector<double> f = sampled_cos(1, res);
  auto rep = validate_measure_sequence({m}, {IntMatrix::from_rows({{1}})}, f, f, {});
  REQUIRE(rep.per_measure.size() == 1);
  const auto& b = rep.per_measure[0];
  CHECK(b.marginals_uniform);
  CHECK(std::abs(b.marginal_total_1 - 1.0) <= 1e-10);
  CHECK(std::abs(b.marginal_total_2 - 1.0) <= 1e-10);
  // diagonal mass is 1/gridsize, reported against the tolerance
  CHECK(b.diagonal_mass == Catch::Approx(1.0 / 16.0).epsilon(1e-9));
  CHECK_FALSE(b.diagonal_null);
  // int f(x) f(y) dnu = 0 while int f^2 dmu = 1/2
  CHECK(b.correlation_gap == Catch::Approx(0.5).margin(1e-9));
  CHECK_FALSE(b.correlation_ok);
}

TEST_CASE("diagonal measure fails the null-diagonal bullet with mass 1") {
  DiscreteMeasure m = diagonal_measure(1, 16);
  std::vector<double> f = sampled_cos(1, 16);
  auto rep = validate_measure_sequence({m}, {IntMatrix::from_rows({{1}})}, f, f, {});
  const auto& b = rep.per_measure[0];
  CHECK(b.marginals_uniform);
  CHECK(b.diagonal_mass == Catch::Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(b.diagonal_null);
  // diagonal graph couples f with itself perfectly and is g x g invariant
  CHECK(b.correlation_gap <= 1e-9);
  CHECK(b.asymptotically_invariant);
}

TEST_CASE("graph of a generator's own grid action achieves pushforward distance zero") {
  IntMatrix a = IntMatrix::from_rows({{2, 1}, {1, 1}});
  DiscreteMeasure m = graph_measure(a, 2, 16);
  std::vector<double> f = sampled_cos(2, 16);
  auto rep = validate_measure_sequence({m}, {a}, f, f, {});
  const auto& b = rep.per_measure[0];
  CHECK(b.marginals_uniform);
  REQUIRE(b.pushforward_tv.size() == 1);
  CHECK(b.pushforward_tv[0] == 0.0);
  CHECK(b.asymptotically_invariant);
}

TEST_CASE("grid compatibility and shared-grid validation") {
  // det 2 shares a factor with resolution 16
  CHECK_THROWS_AS(GridAction(IntMatrix::from_rows({{2, 0}, {0, 1}}), 2, 16), precondition_error);
  // det 3 is coprime to 16: fine even though it is not unimodular
  CHECK_NOTHROW(GridAction(IntMatrix::from_rows({{3, 0}, {0, 1}}), 2, 16));

  DiscreteMeasure a = diagonal_measure(1, 16);
  DiscreteMeasure b = diagonal_measure(1, 8);
  std::vector<double> f = sampled_cos(1, 16);
  CHECK_THROWS_AS(validate_measure_sequence({a, b}, {IntMatrix::from_rows({{1}})}, f, f, {}),
                  dimension_error);

  DiscreteMeasure bad = diagonal_measure(1, 16);
  bad.weights[0].second += 0.5;
  CHECK_THROWS_AS(validate_measure_sequence({bad}, {IntMatrix::from_rows({{1}})}, f, f, {}),
                  precondition_error);
}

TEST_CASE("trend diagnostics across a sequence") {
  // mix the product measure toward the diagonal: correlation gap decreases
  std::size_t res = 16;
  std::vector<DiscreteMeasure> seq;
  for (double t : {0.0, 0.5, 0.9}) {
    DiscreteMeasure prod = product_of_uniforms(1, res);
    DiscreteMeasure diag = diagonal_measure(1, res);
    DiscreteMeasure mix;
    mix.dimension = 1;
    mix.resolution = res;
    for (auto [k, w] : prod.weights) mix.weights.emplace_back(k, (1.0 - t) * w);
    for (auto [k, w] : diag.weights) mix.weights.emplace_back(k, t * w);
    mix.normalize_storage();
    seq.push_back(std::move(mix));
  }
  std::vector<double> f = sampled_cos(1, res);
  auto rep = validate_measure_sequence(seq, {IntMatrix::from_rows({{1}})}, f, f, {});
  CHECK(rep.correlation_gap_decreasing);
}
