#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "toract/bigint.hpp"
#include "toract/dual_dynamics.hpp"
#include "toract/errors.hpp"
#include "toract/int_matrix.hpp"

namespace toract {

// A primitive integer vector w with B w = sign(B) w for every generator B.
// Eigenvalues of unimodular integer matrices on primitive integer
// eigenvectors are units, so the sign pattern takes values in {+1, -1}.
struct EigenvectorCertificate {
  std::vector<IntMatrix> generators;
  Vec w;
  std::vector<int> signs;  // one per generator
};

// Searches the 2^g sign patterns in lexicographic order (all +1 first) and
// returns a primitive vector in the first nonzero exact kernel intersection
// of the stacked matrices B - sign * I, or nothing. n <= 3 only: in larger
// dimensions no such dichotomy holds.
inline std::optional<EigenvectorCertificate> detect_common_eigenvector(
    const std::vector<IntMatrix>& generators) {
  if (generators.empty()) throw domain_error("detect_common_eigenvector: no generators");
  std::size_t n = generators[0].rows();
  if (n > 3)
    throw out_of_scope_error("detect_common_eigenvector: the argument is specific to n <= 3");
  if (generators.size() > 20)
    throw out_of_scope_error(
        "detect_common_eigenvector: more than 20 generators, the sign-pattern sweep explodes; "
        "pass a generating subset");
  for (const IntMatrix& b : generators) {
    if (!b.is_square() || b.rows() != n)
      throw dimension_error("detect_common_eigenvector: generators of mixed size");
    if (det(b) != 1)
      throw precondition_error("detect_common_eigenvector: generator determinant is " +
                               det(b).get_str() + ", expected 1");
  }

  std::size_t g = generators.size();
  for (std::size_t mask = 0; mask < (static_cast<std::size_t>(1) << g); ++mask) {
    IntMatrix stacked(g * n, n);
    for (std::size_t t = 0; t < g; ++t) {
      int sign = (mask >> t) & 1 ? -1 : 1;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          Int v = generators[t].at(i, j);
          if (i == j) v -= sign;
          stacked.at(t * n + i, j) = v;
        }
    }
    auto basis = integer_kernel_basis(stacked);
    if (basis.empty()) continue;
    EigenvectorCertificate cert;
    cert.generators = generators;
    cert.w = basis.front();
    for (std::size_t t = 0; t < g; ++t) {
      int sign = (mask >> t) & 1 ? -1 : 1;
      cert.signs.push_back(sign);
      Vec img = generators[t].apply(cert.w);
      for (std::size_t i = 0; i < n; ++i)
        if (img[i] != sign * cert.w[i])
          throw inconsistency_error("detect_common_eigenvector: kernel vector fails B w = s w");
    }
    return cert;
  }
  return std::nullopt;
}

// Conjugation of the generators into the block form
// ( +-1  Z^{n-1} ; 0  GL(n-1,Z) ) by a matrix A with A e_1 = w, det A = 1.
struct ConjugationResult {
  IntMatrix conjugator;
  std::vector<IntMatrix> conjugated;
};

inline ConjugationResult conjugate_into_K(const std::vector<IntMatrix>& generators,
                                          const EigenvectorCertificate& cert) {
  if (generators.size() != cert.signs.size())
    throw dimension_error("conjugate_into_K: certificate does not match the generators");
  std::size_t n = cert.w.size();
  ConjugationResult res;
  res.conjugator = unimodular_completion(cert.w);
  IntMatrix inv = inverse_unimodular(res.conjugator);
  for (std::size_t t = 0; t < generators.size(); ++t) {
    IntMatrix c = inv * generators[t] * res.conjugator;
    // first column must be sign * e_1
    if (c.at(0, 0) != cert.signs[t])
      throw inconsistency_error("conjugate_into_K: generator " + std::to_string(t) +
                                " does not have the certified corner sign");
    for (std::size_t i = 1; i < n; ++i)
      if (c.at(i, 0) != 0)
        throw inconsistency_error("conjugate_into_K: generator " + std::to_string(t) +
                                  " is not block triangular after conjugation");
    // lower-right block is integral with determinant +-1
    IntMatrix lower(n - 1, n - 1);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 1; j < n; ++j) lower.at(i - 1, j - 1) = c.at(i, j);
    Int d = det(lower);
    if (d != 1 && d != -1)
      throw inconsistency_error("conjugate_into_K: generator " + std::to_string(t) +
                                " has a non-unimodular lower block");
    res.conjugated.push_back(std::move(c));
  }
  return res;
}

enum class ClassifySide { direct, transpose, none };

inline const char* side_name(ClassifySide s) {
  switch (s) {
    case ClassifySide::direct: return "direct";
    case ClassifySide::transpose: return "transpose";
    case ClassifySide::none: return "none";
  }
  return "?";
}

struct NarrativeLine {
  std::string text;
  std::string status;  // "verified" for mechanical steps, "cited" for analytic ones
};

struct ClassificationReport {
  std::size_t n = 0;
  ClassifySide side = ClassifySide::none;
  bool degenerate = false;  // all generators are the identity
  std::optional<EigenvectorCertificate> certificate;
  std::optional<ConjugationResult> conjugation;
  std::optional<OrbitReport> nonergodicity_witness;
  std::vector<NarrativeLine> narrative;
};

// The n <= 3 dichotomy sweep: look for a common eigenvector of the
// generators and of their transposes; conjugate the side that has one into
// the block form, and on the transpose side exhibit the finite dual orbit
// that kills ergodicity. Mechanically checked steps are marked "verified";
// the analytic inputs of the dichotomy are only "cited".
inline ClassificationReport classify_small_n(const std::vector<IntMatrix>& generators) {
  ClassificationReport rep;
  if (generators.empty()) throw domain_error("classify_small_n: no generators");
  rep.n = generators[0].rows();
  if (rep.n > 3)
    throw out_of_scope_error("classify_small_n: only n <= 3 carries the dichotomy");

  rep.degenerate = true;
  for (const IntMatrix& b : generators) rep.degenerate = rep.degenerate && b.is_identity();
  if (rep.degenerate)
    rep.narrative.push_back(
        {"every generator is the identity; the group is amenable and outside the "
         "non-amenability hypothesis of the dichotomy",
         "verified"});

  rep.narrative.push_back(
      {"a rigid, non-strongly-ergodic torus action of a non-amenable subgroup in dimension at "
       "most 3 forces a one-dimensional invariant subspace for the group or its transpose",
       "cited"});

  auto direct = detect_common_eigenvector(generators);
  if (direct) {
    rep.side = ClassifySide::direct;
    rep.certificate = direct;
    rep.narrative.push_back(
        {"common eigenvector " + encode_vec(direct->w) + " of the generators", "verified"});
    rep.conjugation = conjugate_into_K(generators, *direct);
    rep.narrative.push_back(
        {"conjugated into the block form (+-1, row; 0, GL(n-1,Z)) by a unimodular matrix with "
         "first column " + encode_vec(direct->w),
         "verified"});
    rep.narrative.push_back(
        {"the coordinate projection extends to a homomorphism onto Z x| Z/2Z, so the "
         "translation lattice does not sit rigidly over this block group: a rigid action cannot "
         "live inside it",
         "cited"});
    return rep;
  }

  std::vector<IntMatrix> transposed;
  for (const IntMatrix& b : generators) transposed.push_back(b.transpose());
  auto dual = detect_common_eigenvector(transposed);
  if (dual) {
    rep.side = ClassifySide::transpose;
    rep.certificate = dual;
    rep.narrative.push_back(
        {"common eigenvector " + encode_vec(dual->w) + " of the transposed generators",
         "verified"});
    rep.conjugation = conjugate_into_K(transposed, *dual);
    rep.narrative.push_back(
        {"transposed generators conjugated into the block form", "verified"});
    // the dual orbit of w under the transposed generators is {w, -w}
    rep.nonergodicity_witness = orbit_bfs(dual->w, transposed, 4);
    if (rep.nonergodicity_witness->status != OrbitStatus::finite)
      throw inconsistency_error("classify_small_n: certified dual orbit did not close");
    rep.narrative.push_back(
        {"the eigendirection has a finite dual orbit, so the torus action is not ergodic",
         "verified"});
    return rep;
  }

  rep.side = ClassifySide::none;
  rep.narrative.push_back(
      {"no common eigenvector on either side: assuming the cited invariant-subspace step, the "
       "action is either strongly ergodic or not rigid",
       "verified"});
  return rep;
}

}  // namespace toract
