#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "toract/bigint.hpp"
#include "toract/dual_dynamics.hpp"
#include "toract/errors.hpp"
#include "toract/families.hpp"
#include "toract/group_model.hpp"
#include "toract/int_matrix.hpp"
#include "toract/int_polynomial.hpp"

namespace toract {

struct GeneratorDeviation {
  std::string label;
  Rat deviation_sq;  // exact when the generator permutes the character set
  double deviation = 0.0;
};

// Almost-invariant unit vector built from finitely many torus characters:
// a = (1/sqrt(N)) sum_j c_j chi_{p_j} with rational weights c_j, N = sum c_j^2.
// The mean is zero because no p_j is the zero frequency, and squared
// deviations under lattice maps are exact rationals.
struct ASIWitness {
  std::string family;
  Vec seed;
  std::size_t window = 0;
  std::vector<Vec> points;
  std::vector<Rat> weights;  // unnormalized profile
  Rat norm_sq;               // sum of squared weights
  Rat deviation_sq;          // under the defining generator, when exact
  bool deviation_sq_exact = true;
  double deviation = 0.0;
  double mean = 0.0;     // exact 0 by construction
  double l2_norm = 1.0;  // exact 1 after normalization
  std::vector<GeneratorDeviation> per_generator;
};

// || sum c_j chi_{map(p_j)} - sum c_j chi_{p_j} ||^2 / N, exactly. Characters
// are orthonormal, so the value is a finite sum of squared weight
// differences over the union of the two supports.
inline Rat character_sum_deviation_sq(const std::vector<Vec>& points,
                                      const std::vector<Rat>& weights, const IntMatrix& map) {
  if (points.size() != weights.size())
    throw dimension_error("character_sum_deviation_sq: points/weights mismatch");
  std::map<std::string, Rat> delta;
  Rat norm_sq = 0;
  for (std::size_t j = 0; j < points.size(); ++j) {
    norm_sq += weights[j] * weights[j];
    delta[encode_vec(map.apply(points[j]))] += weights[j];
    delta[encode_vec(points[j])] -= weights[j];
  }
  if (norm_sq == 0) throw domain_error("character_sum_deviation_sq: zero profile");
  Rat sum = 0;
  for (const auto& [key, d] : delta) sum += d * d;
  return sum / norm_sq;
}

// Fejer window weights 1 - |j|/(L+1) for j = -L..L.
inline std::vector<Rat> fejer_weights(std::size_t window) {
  std::vector<Rat> w;
  long l = static_cast<long>(window);
  for (long j = -l; j <= l; ++j) {
    Rat c = Rat(1) - Rat(std::abs(j), l + 1);
    c.canonicalize();
    w.push_back(c);
  }
  return w;
}

// Closed form of the squared shift deviation of the normalized Fejer window:
// 6 / (2 L^2 + 4 L + 3).
inline Rat fejer_shift_deviation_sq(std::size_t window) {
  long l = static_cast<long>(window);
  Rat r(6, 2 * l * l + 4 * l + 3);
  r.canonicalize();
  return r;
}

// Almost-invariant witness for the dual action of A^Z on the k-torus: Fejer
// weights along the transpose orbit (A^t)^j xi. The action shifts the orbit
// index, so the deviation is the exact shifted-difference sum. A fixed seed
// character (period one) degenerates to an exactly invariant single
// character; any other collision inside the window would alias coefficients
// and is rejected.
inline ASIWitness asi_witness(const IntMatrix& a, const Vec& xi, std::size_t window) {
  if (!a.is_square() || a.rows() != xi.size())
    throw dimension_error("asi_witness: matrix and seed sizes differ");
  if (is_zero_vec(xi)) throw domain_error("asi_witness: seed character must be nonzero");
  if (det(a) != 1 && det(a) != -1)
    throw precondition_error("asi_witness: generator must be unimodular");

  IntMatrix at = a.transpose();
  ASIWitness w;
  w.family = "cyclic dual action";
  w.seed = xi;
  w.window = window;

  if (at.apply(xi) == xi) {
    // invariant seed character: the witness is exactly invariant
    w.points = {xi};
    w.weights = {Rat(1)};
    w.norm_sq = 1;
    w.deviation_sq = 0;
    w.deviation = 0.0;
    w.per_generator.push_back({"A", Rat(0), 0.0});
    return w;
  }

  long l = static_cast<long>(window);
  // distinctness over |j| <= L+1: the shifted window touches one extra orbit
  // point on each side
  std::map<std::string, long> seen;
  IntMatrix at_inv = inverse_unimodular(at);
  Vec fwd = xi, bwd = xi;
  seen[encode_vec(xi)] = 0;
  for (long j = 1; j <= l + 1; ++j) {
    fwd = at.apply(fwd);
    bwd = at_inv.apply(bwd);
    if (!seen.emplace(encode_vec(fwd), j).second || !seen.emplace(encode_vec(bwd), -j).second)
      throw precondition_error(
          "asi_witness: transpose-orbit collision inside the window would alias coefficients");
  }

  w.weights = fejer_weights(window);
  w.points.resize(w.weights.size());
  Vec cur = pow(at, -l).apply(xi);
  for (long j = -l; j <= l; ++j) {
    w.points[static_cast<std::size_t>(j + l)] = cur;
    if (j < l) cur = at.apply(cur);
  }
  w.norm_sq = 0;
  for (const Rat& c : w.weights) w.norm_sq += c * c;
  w.deviation_sq = character_sum_deviation_sq(w.points, w.weights, at);
  w.deviation = std::sqrt(w.deviation_sq.get_d());
  w.per_generator.push_back({"A", w.deviation_sq, w.deviation});
  return w;
}

// Exactly invariant mean-zero unit vector supported on a finite dual orbit;
// the witness exhibited when the cyclic action is not even ergodic.
inline ASIWitness invariant_orbit_witness(const IntMatrix& a) {
  auto rou = has_root_of_unity_eigenvalue(a);
  if (!rou.yes)
    throw precondition_error("invariant_orbit_witness: generator has no finite dual orbit");
  IntMatrix at = a.transpose();
  IntMatrix fixed = pow(at, static_cast<long>(rou.order)) - IntMatrix::identity(a.rows());
  auto basis = integer_kernel_basis(fixed);
  if (basis.empty()) throw inconsistency_error("invariant_orbit_witness: empty kernel");
  OrbitReport orbit = orbit_bfs(basis.front(), {at}, detail::kMaxTorsionOrder);
  if (orbit.status != OrbitStatus::finite)
    throw inconsistency_error("invariant_orbit_witness: orbit did not close");
  ASIWitness w;
  w.family = "finite dual orbit";
  w.seed = basis.front();
  w.window = 0;
  w.points = orbit.orbit;
  w.weights.assign(w.points.size(), Rat(1));
  w.norm_sq = static_cast<long>(w.points.size());
  w.deviation_sq = character_sum_deviation_sq(w.points, w.weights, at);
  w.deviation = std::sqrt(w.deviation_sq.get_d());
  if (w.deviation_sq != 0)
    throw inconsistency_error("invariant_orbit_witness: uniform orbit sum is not invariant");
  w.per_generator.push_back({"A", w.deviation_sq, w.deviation});
  return w;
}

// Places the witness profile along the conjugation orbit inside the
// invariant sublattice Z^k x {0} and measures the deviation under every
// Gamma generator. Generators with trivial lambda block fix the sublattice
// pointwise, so their deviation vanishes; the lambda generator shifts the
// orbit index and reproduces the base deviation exactly.
inline std::vector<GeneratorDeviation> lifted_witness_deviations(const ASIWitness& w,
                                                                 const GroupPresentation& p) {
  const BlockSpec s = p.spec;
  if (w.seed.size() != s.k)
    throw dimension_error("lifted_witness_deviations: witness lives on Z^k");
  IntMatrix a = p.cyclic_lambda();

  std::vector<Vec> lifted;
  if (w.window == 0) {
    for (const Vec& q : w.points) {
      Vec full(s.dim());
      for (std::size_t i = 0; i < s.k; ++i) full[i] = q[i];
      lifted.push_back(std::move(full));
    }
  } else {
    long l = static_cast<long>(w.window);
    // fresh distinctness check for the conjugation orbit of the seed
    std::map<std::string, long> seen;
    IntMatrix a_inv = inverse_unimodular(a);
    Vec fwd = w.seed, bwd = w.seed;
    seen[encode_vec(w.seed)] = 0;
    for (long j = 1; j <= l + 1; ++j) {
      fwd = a.apply(fwd);
      bwd = a_inv.apply(bwd);
      if (!seen.emplace(encode_vec(fwd), j).second || !seen.emplace(encode_vec(bwd), -j).second)
        throw precondition_error("lifted_witness_deviations: orbit collision inside the window");
    }
    Vec cur = pow(a, -l).apply(w.seed);
    for (long j = -l; j <= l; ++j) {
      Vec full(s.dim());
      for (std::size_t i = 0; i < s.k; ++i) full[i] = cur[i];
      lifted.push_back(full);
      if (j < l) cur = a.apply(cur);
    }
  }

  std::vector<GeneratorDeviation> out;
  for (std::size_t t = 0; t < p.gamma_generators.size(); ++t) {
    GeneratorDeviation d;
    d.label = describe_gamma_generator(p, t);
    d.deviation_sq =
        character_sum_deviation_sq(lifted, w.weights, p.gamma_generators[t].linear_part());
    d.deviation = std::sqrt(d.deviation_sq.get_d());
    out.push_back(std::move(d));
  }
  return out;
}

// Witness for the affine family: Fejer-weighted characters in the first
// coordinate only. Linear generators fix such functions exactly; the
// rotation part shifts each character phase by exp(2 pi i q alpha).
inline ASIWitness affine_asi_witness(const RemarkFourFamily& fam, std::size_t window) {
  if (window < 1) throw domain_error("affine_asi_witness: window must be >= 1");
  std::size_t n = fam.n;
  ASIWitness w;
  w.family = "affine lower-triangular family";
  w.window = window;
  w.seed = Vec(n);
  w.seed[0] = 1;

  long l = static_cast<long>(window);
  for (long q = 1; q <= l; ++q) {
    Vec p(n);
    p[0] = q;
    w.points.push_back(std::move(p));
    Rat c = Rat(1) - Rat(q, l + 1);
    c.canonicalize();
    w.weights.push_back(c);
  }
  w.norm_sq = 0;
  for (const Rat& c : w.weights) w.norm_sq += c * c;

  // linear generators act on frequencies by the inverse transpose
  for (std::size_t b = 0; b < fam.linear_generators.size(); ++b) {
    GeneratorDeviation d;
    d.label = "linear[" + std::to_string(b) + "]";
    d.deviation_sq =
        character_sum_deviation_sq(w.points, w.weights, transpose_dual(fam.linear_generators[b]));
    d.deviation = std::sqrt(d.deviation_sq.get_d());
    w.per_generator.push_back(std::move(d));
  }

  // rotation by alpha e_t multiplies chi_{q e_1} by exp(-2 pi i q alpha) when
  // t = 0 and fixes it otherwise
  double alpha = fam.alpha.as_double();
  double dev0_sq = 0.0;
  for (std::size_t i = 0; i < w.points.size(); ++i) {
    double c = w.weights[i].get_d();
    double q = w.points[i][0].get_d();
    double s = std::sin(M_PI * q * alpha);
    dev0_sq += c * c * 4.0 * s * s;
  }
  dev0_sq /= w.norm_sq.get_d();
  for (std::size_t t = 0; t < n; ++t) {
    GeneratorDeviation d;
    d.label = "rotation[" + std::to_string(t) + "]";
    d.deviation_sq = 0;  // exact only for t > 0; slot unused for t = 0
    d.deviation = t == 0 ? std::sqrt(dev0_sq) : 0.0;
    w.per_generator.push_back(std::move(d));
  }
  w.deviation_sq = 0;
  w.deviation_sq_exact = false;  // the rotation deviation rests on the float surrogate
  w.deviation = std::sqrt(dev0_sq);
  return w;
}

}  // namespace toract
