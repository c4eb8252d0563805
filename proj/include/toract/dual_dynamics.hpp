#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "toract/bigint.hpp"
#include "toract/errors.hpp"
#include "toract/group_model.hpp"
#include "toract/int_matrix.hpp"
#include "toract/int_polynomial.hpp"

namespace toract {

enum class OrbitStatus { finite, exceeded_bound };

struct OrbitReport {
  Vec seed;
  OrbitStatus status = OrbitStatus::exceeded_bound;
  std::vector<Vec> orbit;  // full orbit in canonical sorted order, finite case
  std::size_t visited = 0;
  std::size_t bound = 0;
  std::size_t generator_count = 0;
};

inline bool vec_less(const Vec& a, const Vec& b) {
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return a.size() < b.size();
}

namespace detail {

// A torsion element of GL(s,Z) for s <= 16 has order at most 840, so any
// finite orbit of a single unimodular generator returns to its seed within
// this many forward steps. Used by the single-generator fast path.
constexpr std::size_t kMaxTorsionOrder = 2520;

// Single unimodular generator: the forward iteration either returns to the
// seed within kMaxTorsionOrder steps (finite orbit, purely periodic because
// the map is invertible) or provably never returns, in which case the first
// bound+1 breadth-first nodes are pairwise distinct and the bound is
// exceeded. Outcome-equivalent to the generic search, without materializing
// huge iterates.
inline OrbitReport orbit_single_unimodular(const Vec& seed, const IntMatrix& gen,
                                           std::size_t bound) {
  OrbitReport rep;
  rep.seed = seed;
  rep.bound = bound;
  rep.generator_count = 1;
  std::vector<Vec> points{seed};
  Vec x = seed;
  std::size_t limit = std::min(kMaxTorsionOrder, bound + 1);
  for (std::size_t j = 1; j <= limit; ++j) {
    x = gen.apply(x);
    if (x == seed) {
      // period j; the group orbit is exactly the forward cycle
      if (points.size() <= bound) {
        rep.status = OrbitStatus::finite;
        rep.orbit = points;
        std::sort(rep.orbit.begin(), rep.orbit.end(), vec_less);
        rep.visited = rep.orbit.size();
        return rep;
      }
      rep.status = OrbitStatus::exceeded_bound;
      rep.visited = bound + 1;
      return rep;
    }
    points.push_back(x);
  }
  rep.status = OrbitStatus::exceeded_bound;
  rep.visited = bound + 1;
  return rep;
}

}  // namespace detail

// Breadth-first closure of the seed under the generators and their inverses.
// Stops as soon as the visited set would exceed `bound`.
inline OrbitReport orbit_bfs(const Vec& seed, const std::vector<IntMatrix>& generators,
                             std::size_t bound) {
  if (is_zero_vec(seed))
    throw domain_error("orbit_bfs: zero seed is a fixed point, excluded by the criterion");
  if (bound < 1) throw domain_error("orbit_bfs: bound must be at least 1");
  if (generators.empty()) throw precondition_error("orbit_bfs: no generators");
  for (const IntMatrix& g : generators) {
    if (!g.is_square() || g.rows() != seed.size())
      throw dimension_error("orbit_bfs: generator size does not match seed");
  }

  // Deduplicate generators by value; drop identities.
  std::vector<IntMatrix> gens;
  {
    std::unordered_set<std::string> seen;
    for (const IntMatrix& g : generators)
      if (!g.is_identity() && seen.insert(g.encode()).second) gens.push_back(g);
  }
  if (gens.empty()) {
    // Only identity generators: the orbit is the seed alone.
    OrbitReport rep;
    rep.seed = seed;
    rep.bound = bound;
    rep.status = OrbitStatus::finite;
    rep.orbit = {seed};
    rep.visited = 1;
    rep.generator_count = generators.size();
    return rep;
  }

  if (gens.size() == 1 && seed.size() <= 16) {
    Int d = det(gens[0]);
    if (d == 1 || d == -1) {
      OrbitReport rep = detail::orbit_single_unimodular(seed, gens[0], bound);
      rep.generator_count = generators.size();
      return rep;
    }
  }

  std::vector<IntMatrix> step = gens;
  for (const IntMatrix& g : gens) {
    Int d = det(g);
    if (d == 1 || d == -1) step.push_back(inverse_unimodular(g));
  }

  OrbitReport rep;
  rep.seed = seed;
  rep.bound = bound;
  rep.generator_count = generators.size();

  std::unordered_set<std::string> visited;
  std::deque<Vec> frontier;
  std::vector<Vec> collected;
  visited.insert(encode_vec(seed));
  frontier.push_back(seed);
  collected.push_back(seed);
  while (!frontier.empty()) {
    Vec x = std::move(frontier.front());
    frontier.pop_front();
    for (const IntMatrix& g : step) {
      Vec y = g.apply(x);
      if (visited.insert(encode_vec(y)).second) {
        if (visited.size() > bound) {
          rep.status = OrbitStatus::exceeded_bound;
          rep.visited = visited.size();
          return rep;
        }
        collected.push_back(y);
        frontier.push_back(std::move(y));
      }
    }
  }
  rep.status = OrbitStatus::finite;
  rep.orbit = std::move(collected);
  std::sort(rep.orbit.begin(), rep.orbit.end(), vec_less);
  rep.visited = rep.orbit.size();
  return rep;
}

// Exact verification that a finite orbit list is closed under every
// generator and inverse.
inline bool orbit_closed(const std::vector<Vec>& orbit, const std::vector<IntMatrix>& generators) {
  std::unordered_set<std::string> set;
  for (const Vec& x : orbit) set.insert(encode_vec(x));
  for (const IntMatrix& g : generators) {
    IntMatrix gi = inverse_unimodular(g);
    for (const Vec& x : orbit) {
      if (!set.count(encode_vec(g.apply(x)))) return false;
      if (!set.count(encode_vec(gi.apply(x)))) return false;
    }
  }
  return true;
}

enum class ErgodicityOutcome { ergodic, not_ergodic, inconclusive };

inline const char* outcome_name(ErgodicityOutcome o) {
  switch (o) {
    case ErgodicityOutcome::ergodic: return "ergodic";
    case ErgodicityOutcome::not_ergodic: return "not_ergodic";
    case ErgodicityOutcome::inconclusive: return "inconclusive";
  }
  return "?";
}

struct ErgodicityVerdict {
  ErgodicityOutcome outcome = ErgodicityOutcome::inconclusive;
  std::string certificate;  // what the verdict rests on
  bool exact = false;       // true when a finite computation certifies the outcome
  unsigned long rou_order = 0;
  std::optional<Vec> witness;
  std::optional<OrbitReport> witness_orbit;
  std::size_t bound = 0;
  std::size_t radius = 0;
};

// Ergodicity of the dual action of a cyclic group A^Z on Z^k, decided
// exactly: ergodic iff A has no root-of-unity eigenvalue; otherwise a
// witness is a primitive kernel vector of A^d - I, whose orbit is finite.
inline ErgodicityVerdict cyclic_lambda_ergodicity(const IntMatrix& a) {
  if (!a.is_square()) throw dimension_error("cyclic_lambda_ergodicity: matrix not square");
  if (det(a) != 1)
    throw precondition_error("cyclic_lambda_ergodicity: generator must be in SL(k,Z), det = " +
                             det(a).get_str());
  ErgodicityVerdict v;
  v.exact = true;
  auto rou = has_root_of_unity_eigenvalue(a);
  if (!rou.yes) {
    v.outcome = ErgodicityOutcome::ergodic;
    v.certificate =
        "no eigenvalue of the generator is a root of unity, so A^m - I is nonsingular for all "
        "m >= 1 and every nonzero orbit is infinite";
    return v;
  }
  v.outcome = ErgodicityOutcome::not_ergodic;
  v.rou_order = rou.order;
  IntMatrix ad = pow(a, static_cast<long>(rou.order)) - IntMatrix::identity(a.rows());
  auto basis = integer_kernel_basis(ad);
  if (basis.empty())
    throw inconsistency_error("cyclic_lambda_ergodicity: kernel of A^d - I is unexpectedly zero");
  v.witness = basis.front();
  std::size_t orbit_bound = std::max<std::size_t>(rou.order, 8) + 4;
  v.witness_orbit = orbit_bfs(*v.witness, {a}, orbit_bound);
  if (v.witness_orbit->status != OrbitStatus::finite)
    throw inconsistency_error("cyclic_lambda_ergodicity: witness orbit did not close");
  v.certificate = "primitive vector fixed by A^" + std::to_string(rou.order) +
                  " has a finite dual orbit";
  return v;
}

// All primitive integer vectors of max-norm <= radius, canonical order.
// With up_to_sign, one representative per antipodal pair (orbits of x and -x
// have identical structure).
inline std::vector<Vec> primitive_vectors_in_ball(std::size_t dim, long radius,
                                                  bool up_to_sign = false) {
  std::vector<Vec> out;
  if (dim == 0) return out;
  std::vector<long> x(dim, -radius);
  while (true) {
    Vec v(dim);
    for (std::size_t i = 0; i < dim; ++i) v[i] = x[i];
    if (!is_zero_vec(v) && content(v) == 1) {
      bool keep = true;
      if (up_to_sign) {
        for (const Int& e : v) {
          if (e != 0) {
            keep = e > 0;
            break;
          }
        }
      }
      if (keep) out.push_back(std::move(v));
    }
    std::size_t i = dim;
    while (i > 0) {
      --i;
      if (x[i] < radius) {
        ++x[i];
        break;
      }
      x[i] = -radius;
      if (i == 0) return out;
    }
  }
}

// Full-action ergodicity via the dual-orbit criterion. The reduction from
// Z^(k+n)-orbits to Z^k-orbits is re-verified at runtime on sampled points
// with nonzero w-part; if one of those orbits unexpectedly closes it is
// itself a non-ergodicity witness and is returned as such.
inline ErgodicityVerdict ergodicity_check(const GroupPresentation& p, std::size_t bound,
                                          long sample_radius) {
  if (p.family != FamilyTag::theorem1)
    throw precondition_error("ergodicity_check: theorem1 presentation required");
  const BlockSpec s = p.spec;

  ErgodicityVerdict v;
  v.bound = bound;
  v.radius = static_cast<std::size_t>(sample_radius);

  if (s.k == 0) {
    v.outcome = ErgodicityOutcome::ergodic;
    v.exact = true;
    v.certificate = "k = 0: the orbit criterion quantifies over Z^0 - {0}, which is empty";
    return v;
  }

  // Reduction re-verification on sampled (v, w), w != 0.
  std::vector<IntMatrix> gamma_linear;
  for (const GroupElement& g : p.gamma_generators) gamma_linear.push_back(g.linear_part());
  std::size_t sampled = 0;
  for (const Vec& x : primitive_vectors_in_ball(s.dim(), std::min<long>(sample_radius, 2))) {
    bool w_nonzero = false;
    for (std::size_t i = s.k; i < s.dim(); ++i)
      if (x[i] != 0) w_nonzero = true;
    if (!w_nonzero) continue;
    if (++sampled > 12) break;
    OrbitReport r = orbit_bfs(x, gamma_linear, bound);
    if (r.status == OrbitStatus::finite) {
      v.outcome = ErgodicityOutcome::not_ergodic;
      v.exact = true;
      v.certificate = "sampled dual-lattice point with nonzero SL-part has a finite orbit";
      v.witness = x;
      v.witness_orbit = std::move(r);
      return v;
    }
  }

  if (p.lambda_kind == LambdaKind::trivial || p.lambda_kind == LambdaKind::cyclic) {
    ErgodicityVerdict lam = cyclic_lambda_ergodicity(p.cyclic_lambda());
    if (lam.outcome == ErgodicityOutcome::ergodic) {
      lam.certificate += "; full-action criterion reduces to the lambda block";
      lam.bound = bound;
      lam.radius = v.radius;
      return lam;
    }
    // Lift the lambda witness x to (x, 0); its Gamma-orbit is the lambda
    // orbit in the invariant sublattice.
    Vec full(s.dim());
    for (std::size_t i = 0; i < s.k; ++i) full[i] = (*lam.witness)[i];
    ErgodicityVerdict out;
    out.outcome = ErgodicityOutcome::not_ergodic;
    out.exact = true;
    out.rou_order = lam.rou_order;
    out.bound = bound;
    out.radius = v.radius;
    out.witness = full;
    out.witness_orbit = orbit_bfs(full, gamma_linear, bound);
    if (out.witness_orbit->status != OrbitStatus::finite)
      throw inconsistency_error("ergodicity_check: lifted witness orbit did not close");
    out.certificate = lam.certificate + "; lifted to the invariant sublattice Z^k x {0}";
    return out;
  }

  // General Lambda: sweep primitive seeds in the ball.
  for (const Vec& x : primitive_vectors_in_ball(s.k, sample_radius, /*up_to_sign=*/true)) {
    OrbitReport r = orbit_bfs(x, p.lambda_generators, bound);
    if (r.status == OrbitStatus::finite) {
      Vec full(s.dim());
      for (std::size_t i = 0; i < s.k; ++i) full[i] = x[i];
      ErgodicityVerdict out;
      out.outcome = ErgodicityOutcome::not_ergodic;
      out.exact = true;
      out.bound = bound;
      out.radius = v.radius;
      out.witness = full;
      out.witness_orbit = std::move(r);
      out.certificate = "finite lambda-orbit found by the primitive-seed sweep";
      return out;
    }
  }
  v.outcome = ErgodicityOutcome::inconclusive;
  v.certificate =
      "every sampled primitive seed exceeded the exploration bound; no exact certificate for a "
      "non-cyclic lambda";
  return v;
}

struct FreenessReport {
  std::size_t word_length = 0;
  std::size_t elements_checked = 0;  // distinct nonidentity products
  std::size_t max_fixed_dim = 0;     // largest fixed-subtorus dimension seen
  std::size_t full_dim = 0;
  bool all_proper = false;  // every fixed subtorus has positive codimension
  bool truncated = false;   // element cap hit before the requested length
};

// Sweeps all distinct nonidentity products of up to `word_length` generators
// (and inverses) and verifies each fixes only a proper subtorus: the kernel
// of g - I has rank < k + n, so the fixed-point set has measure zero.
inline FreenessReport freeness_check(const GroupPresentation& p, std::size_t word_length,
                                     std::size_t max_elements = 4000000) {
  if (word_length < 1) throw domain_error("freeness_check: word_length must be >= 1");
  std::size_t d = p.spec.dim();
  FreenessReport rep;
  rep.word_length = word_length;
  rep.full_dim = d;

  std::vector<IntMatrix> step;
  {
    std::unordered_set<std::string> seen;
    for (const GroupElement& g : p.gamma_generators) {
      IntMatrix m = g.linear_part();
      if (!m.is_identity() && seen.insert(m.encode()).second) step.push_back(m);
    }
    std::size_t base = step.size();
    for (std::size_t i = 0; i < base; ++i) {
      IntMatrix inv = inverse_unimodular(step[i]);
      if (!inv.is_identity() && seen.insert(inv.encode()).second) step.push_back(inv);
    }
  }

  IntMatrix id = IntMatrix::identity(d);
  std::unordered_set<std::string> visited;
  visited.insert(id.encode());
  std::vector<IntMatrix> frontier{id};
  rep.all_proper = true;
  for (std::size_t layer = 1; layer <= word_length && !frontier.empty(); ++layer) {
    std::vector<IntMatrix> next;
    for (const IntMatrix& x : frontier) {
      for (const IntMatrix& g : step) {
        IntMatrix y = x * g;
        if (!visited.insert(y.encode()).second) continue;
        std::size_t fixed = kernel_rank_over_rationals(y - id);
        ++rep.elements_checked;
        rep.max_fixed_dim = std::max(rep.max_fixed_dim, fixed);
        if (fixed >= d) rep.all_proper = false;
        if (visited.size() > max_elements) {
          rep.truncated = true;
          return rep;
        }
        next.push_back(std::move(y));
      }
    }
    frontier = std::move(next);
  }
  return rep;
}

struct CrossValidationResult {
  ErgodicityVerdict verdict;
  std::size_t seeds_checked = 0;
  bool consistent = false;
  std::string detail;
};

// Cross-validates the eigenvalue-based cyclic verdict against orbit
// enumeration on every primitive seed in the ball (up to sign; the orbits of
// x and -x coincide up to negation).
inline CrossValidationResult cross_validate_cyclic(const IntMatrix& a, long max_norm,
                                                   std::size_t bound) {
  CrossValidationResult res;
  res.verdict = cyclic_lambda_ergodicity(a);
  res.consistent = true;
  if (res.verdict.outcome == ErgodicityOutcome::ergodic) {
    for (const Vec& seed : primitive_vectors_in_ball(a.rows(), max_norm, /*up_to_sign=*/true)) {
      OrbitReport r = orbit_bfs(seed, {a}, bound);
      ++res.seeds_checked;
      if (r.status != OrbitStatus::exceeded_bound) {
        res.consistent = false;
        res.detail = "ergodic verdict contradicted: finite orbit from seed " + encode_vec(seed);
        return res;
      }
    }
  } else {
    const OrbitReport& wo = *res.verdict.witness_orbit;
    ++res.seeds_checked;
    if (wo.status != OrbitStatus::finite || !orbit_closed(wo.orbit, {a})) {
      res.consistent = false;
      res.detail = "not_ergodic witness orbit is not finite and closed";
      return res;
    }
  }
  res.detail = "verdict and orbit enumeration agree";
  return res;
}

}  // namespace toract
