#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "toract/bigint.hpp"
#include "toract/errors.hpp"
#include "toract/int_matrix.hpp"

namespace toract {

// Probability measure on (T^m x T^m) discretized to a grid of `resolution`
// cells per torus factor. Weights are sparse over pairs of flattened grid
// indices; total mass must be 1 within 1e-10.
struct DiscreteMeasure {
  std::size_t dimension = 1;
  std::size_t resolution = 0;
  std::vector<std::pair<std::uint64_t, double>> weights;  // key = x * R^m + y, sorted

  std::uint64_t cells() const {
    std::uint64_t c = 1;
    for (std::size_t i = 0; i < dimension; ++i) c *= resolution;
    return c;
  }

  static std::uint64_t pair_key(std::uint64_t x, std::uint64_t y, std::uint64_t cells) {
    return x * cells + y;
  }

  void normalize_storage() {
    std::sort(weights.begin(), weights.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<std::uint64_t, double>> merged;
    for (const auto& [k, w] : weights) {
      if (!merged.empty() && merged.back().first == k)
        merged.back().second += w;
      else
        merged.emplace_back(k, w);
    }
    weights = std::move(merged);
  }

  double total_mass() const {
    double s = 0;
    for (const auto& [k, w] : weights) s += w;
    return s;
  }

  void validate() const {
    if (resolution == 0) throw domain_error("DiscreteMeasure: resolution must be positive");
    if (dimension == 0) throw domain_error("DiscreteMeasure: dimension must be positive");
    std::uint64_t c = cells();
    for (const auto& [k, w] : weights) {
      if (w < 0) throw precondition_error("DiscreteMeasure: negative weight");
      if (k >= c * c) throw dimension_error("DiscreteMeasure: key out of range");
    }
    if (std::abs(total_mass() - 1.0) > 1e-10)
      throw precondition_error("DiscreteMeasure: total mass differs from 1 beyond 1e-10");
  }
};

// Uniform product measure mu x mu on the grid.
inline DiscreteMeasure product_of_uniforms(std::size_t dimension, std::size_t resolution) {
  DiscreteMeasure m;
  m.dimension = dimension;
  m.resolution = resolution;
  std::uint64_t c = m.cells();
  double w = 1.0 / (static_cast<double>(c) * static_cast<double>(c));
  m.weights.reserve(c * c);
  for (std::uint64_t x = 0; x < c; ++x)
    for (std::uint64_t y = 0; y < c; ++y) m.weights.emplace_back(x * c + y, w);
  return m;
}

inline DiscreteMeasure diagonal_measure(std::size_t dimension, std::size_t resolution) {
  DiscreteMeasure m;
  m.dimension = dimension;
  m.resolution = resolution;
  std::uint64_t c = m.cells();
  double w = 1.0 / static_cast<double>(c);
  for (std::uint64_t x = 0; x < c; ++x) m.weights.emplace_back(x * c + x, w);
  return m;
}

// Grid permutation induced by an integer matrix acting modulo the
// resolution. Fails if the reduced matrix is not invertible mod R.
class GridAction {
 public:
  GridAction(const IntMatrix& g, std::size_t dimension, std::size_t resolution)
      : dim_(dimension), res_(resolution) {
    if (!g.is_square() || g.rows() != dimension)
      throw dimension_error("GridAction: matrix size does not match the torus dimension");
    Int d = det(g);
    Int r(static_cast<long>(resolution));
    if (gcd(abs(d), r) != 1)
      throw precondition_error(
          "GridAction: generator determinant shares a factor with the grid resolution, the "
          "reduced map is not a permutation");
    std::uint64_t c = 1;
    for (std::size_t i = 0; i < dim_; ++i) c *= res_;
    map_.resize(c);
    std::vector<long> x(dim_);
    for (std::uint64_t flat = 0; flat < c; ++flat) {
      std::uint64_t rem = flat;
      for (std::size_t i = dim_; i-- > 0;) {
        x[i] = static_cast<long>(rem % res_);
        rem /= res_;
      }
      std::uint64_t out = 0;
      for (std::size_t i = 0; i < dim_; ++i) {
        Int acc = 0;
        for (std::size_t j = 0; j < dim_; ++j) acc += g.at(i, j) * Int(x[j]);
        Int m = acc % static_cast<long>(res_);
        if (m < 0) m += static_cast<long>(res_);
        out = out * res_ + m.get_ui();
      }
      map_[flat] = out;
    }
  }

  std::uint64_t operator()(std::uint64_t flat) const { return map_[flat]; }
  std::uint64_t cells() const { return map_.size(); }

 private:
  std::size_t dim_, res_;
  std::vector<std::uint64_t> map_;
};

struct MeasureTolerances {
  double marginal = 1e-9;    // bullet 1: distance of each marginal from uniform
  double diagonal = 1e-9;    // bullet 2: admissible diagonal mass
  double correlation = 1e-6; // bullet 3: admissible correlation gap
  double pushforward = 1e-9; // bullet 4: admissible total-variation distance
};

struct MeasureBulletReport {
  // bullet 1
  double marginal_max_dev = 0;
  bool marginals_uniform = false;
  double marginal_total_1 = 0, marginal_total_2 = 0;
  // bullet 2
  double diagonal_mass = 0;
  bool diagonal_null = false;
  // bullet 3
  double correlation_gap = 0;
  bool correlation_ok = false;
  // bullet 4, one distance per generator
  std::vector<double> pushforward_tv;
  bool asymptotically_invariant = false;
};

struct MeasureValidationReport {
  std::vector<MeasureBulletReport> per_measure;
  // trend diagnostics across the sequence
  bool correlation_gap_decreasing = false;
  bool pushforward_tv_decreasing = false;
  std::string summary;
};

// Checks a candidate sequence of coupling measures against the four bullets
// of the rigidity-obstruction criterion: uniform marginals, null diagonal,
// decorrelation toward the diagonal integral, and asymptotic invariance
// under g x g. Validates candidates only; never claims rigidity or its
// failure.
inline MeasureValidationReport validate_measure_sequence(
    const std::vector<DiscreteMeasure>& measures, const std::vector<IntMatrix>& generators,
    const std::vector<double>& f, const std::vector<double>& g,
    const MeasureTolerances& tol = {}) {
  if (measures.empty()) throw domain_error("validate_measure_sequence: no measures");
  const std::size_t dim = measures[0].dimension;
  const std::size_t res = measures[0].resolution;
  for (const DiscreteMeasure& m : measures) {
    if (m.dimension != dim || m.resolution != res)
      throw dimension_error("validate_measure_sequence: measures do not share one grid");
    m.validate();
  }
  const std::uint64_t cells = measures[0].cells();
  if (f.size() != cells || g.size() != cells)
    throw dimension_error("validate_measure_sequence: test functions are not grid-sampled");

  std::vector<GridAction> actions;
  for (const IntMatrix& mat : generators) actions.emplace_back(mat, dim, res);

  // reference integral of f*g against the uniform measure
  double fg_mu = 0;
  for (std::uint64_t x = 0; x < cells; ++x) fg_mu += f[x] * g[x];
  fg_mu /= static_cast<double>(cells);
  const double uniform = 1.0 / static_cast<double>(cells);

  MeasureValidationReport rep;
  for (const DiscreteMeasure& m : measures) {
    MeasureBulletReport b;

    std::vector<double> marg1(cells, 0.0), marg2(cells, 0.0);
    double diag = 0, corr = 0;
    for (const auto& [key, w] : m.weights) {
      std::uint64_t x = key / cells, y = key % cells;
      marg1[x] += w;
      marg2[y] += w;
      if (x == y) diag += w;
      corr += f[x] * g[y] * w;
    }
    for (std::uint64_t x = 0; x < cells; ++x) {
      b.marginal_max_dev = std::max(b.marginal_max_dev, std::abs(marg1[x] - uniform));
      b.marginal_max_dev = std::max(b.marginal_max_dev, std::abs(marg2[x] - uniform));
      b.marginal_total_1 += marg1[x];
      b.marginal_total_2 += marg2[x];
    }
    b.marginals_uniform = b.marginal_max_dev <= tol.marginal;
    b.diagonal_mass = diag;
    b.diagonal_null = diag <= tol.diagonal;
    b.correlation_gap = std::abs(corr - fg_mu);
    b.correlation_ok = b.correlation_gap <= tol.correlation;

    b.asymptotically_invariant = true;
    for (const GridAction& act : actions) {
      // pushforward under g x g permutes pair keys exactly
      std::map<std::uint64_t, double> diff;
      for (const auto& [key, w] : m.weights) {
        std::uint64_t x = key / cells, y = key % cells;
        diff[act(x) * cells + act(y)] += w;
        diff[key] -= w;
      }
      double tv = 0;
      for (const auto& [k, d] : diff) tv += std::abs(d);
      b.pushforward_tv.push_back(tv);
      if (tv > tol.pushforward) b.asymptotically_invariant = false;
    }
    rep.per_measure.push_back(std::move(b));
  }

  rep.correlation_gap_decreasing = true;
  rep.pushforward_tv_decreasing = true;
  for (std::size_t i = 1; i < rep.per_measure.size(); ++i) {
    if (rep.per_measure[i].correlation_gap > rep.per_measure[i - 1].correlation_gap + 1e-12)
      rep.correlation_gap_decreasing = false;
    double prev = 0, cur = 0;
    for (double t : rep.per_measure[i - 1].pushforward_tv) prev = std::max(prev, t);
    for (double t : rep.per_measure[i].pushforward_tv) cur = std::max(cur, t);
    if (cur > prev + 1e-12) rep.pushforward_tv_decreasing = false;
  }
  std::size_t passing = 0;
  for (const auto& b : rep.per_measure)
    if (b.marginals_uniform && b.diagonal_null && b.correlation_ok && b.asymptotically_invariant)
      ++passing;
  rep.summary = std::to_string(passing) + "/" + std::to_string(rep.per_measure.size()) +
                " measures satisfy all four bullets at the stated tolerances";
  return rep;
}

}  // namespace toract
