#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "toract/bigint.hpp"
#include "toract/errors.hpp"
#include "toract/group_model.hpp"
#include "toract/int_matrix.hpp"
#include "toract/testing_random.hpp"

namespace toract {

// Constructive factorization h = k1 l1 k2 l2 with k factors in K and l
// factors in L; recomposition is exact by construction.
struct KLKLWitness {
  GroupElement target;
  GroupElement k1, l1, k2, l2;
};

// Writes h in H1 with blocks (M, u, w) as k1 l1 k2 l2. Under the H1
// composition law (M1,u1,w1)(M2,u2,w2) = (M1+M2, u1 + M1 w2 + u2, w1+w2) the
// choice w1 = e1, w2 = w - e1, M1 = (u - M(w - e1) | 0 ... 0), M2 = M - M1
// recomposes exactly; e1 is fixed for determinism.
inline KLKLWitness klkl_decompose(const GroupElement& h) {
  if (!membership(h, SubgroupTag::H1))
    throw membership_error("klkl_decompose: element is not in H1");
  const BlockSpec s = h.spec;
  IntMatrix m = h.m_block();
  Vec u = h.u_col();
  Vec w = h.w_col();

  Vec w1(s.n), w2 = w;
  w1[0] = 1;
  w2[0] -= 1;

  IntMatrix m1(s.k, s.n);
  Vec mw2 = m.apply(w2);
  for (std::size_t i = 0; i < s.k; ++i) m1.at(i, 0) = u[i] - mw2[i];
  IntMatrix m2 = m - m1;

  IntMatrix id_k = IntMatrix::identity(s.k);
  IntMatrix id_n = IntMatrix::identity(s.n);
  Vec zu(s.k), zw(s.n);
  KLKLWitness out;
  out.target = h;
  out.k1 = element_from_blocks(s, id_k, m1, id_n, zu, zw);
  out.l1 = element_from_blocks(s, id_k, IntMatrix(s.k, s.n), id_n, zu, w1);
  out.k2 = element_from_blocks(s, id_k, m2, id_n, zu, zw);
  out.l2 = element_from_blocks(s, id_k, IntMatrix(s.k, s.n), id_n, zu, w2);
  if (out.k1 * out.l1 * out.k2 * out.l2 != h)
    throw inconsistency_error("klkl_decompose: recomposition failed");
  return out;
}

// Splits g in K into the row factors g_1 ... g_k, the i-th carrying exactly
// row i of the M block. The factors commute, so the order is immaterial.
inline std::vector<GroupElement> k_row_decompose(const GroupElement& g) {
  if (!membership(g, SubgroupTag::K))
    throw membership_error("k_row_decompose: element is not in K");
  const BlockSpec s = g.spec;
  IntMatrix m = g.m_block();
  std::vector<GroupElement> factors;
  GroupElement acc = GroupElement::identity(s);
  for (std::size_t i = 0; i < s.k; ++i) {
    IntMatrix mi(s.k, s.n);
    for (std::size_t j = 0; j < s.n; ++j) mi.at(i, j) = m.at(i, j);
    GroupElement f = element_from_blocks(s, IntMatrix::identity(s.k), mi,
                                         IntMatrix::identity(s.n), Vec(s.k), Vec(s.n));
    acc = acc * f;
    factors.push_back(std::move(f));
  }
  if (acc != g) throw inconsistency_error("k_row_decompose: recomposition failed");
  return factors;
}

enum class StepKind { axiom, embedding, bounded_generation, monotonicity, conclusion };

inline const char* step_kind_name(StepKind k) {
  switch (k) {
    case StepKind::axiom: return "axiom";
    case StepKind::embedding: return "embedding";
    case StepKind::bounded_generation: return "bounded_generation";
    case StepKind::monotonicity: return "monotonicity";
    case StepKind::conclusion: return "conclusion";
  }
  return "?";
}

// Image data of the pair homomorphism Z^n x| SL(n,Z) -> H2. The lattice
// images are the images of the standard basis of the distinguished Z^n; the
// sl images are the images of the positive transvections E_ij(+1) in
// transvection_positions(n) order.
struct EmbeddingStep {
  SubgroupTag target_small = SubgroupTag::L;
  std::size_t row_index = 0;  // for Ki
  std::vector<GroupElement> lattice_images;
  std::vector<GroupElement> sl_images;
};

struct BoundedGenerationStep {
  std::size_t product_length = 0;  // k + 1 + k + 1
  std::vector<KLKLWitness> samples;
};

struct MonotonicityStep {
  SubgroupTag from_small, from_large;
  SubgroupTag to_small, to_large;
};

struct CertStep {
  StepKind kind = StepKind::conclusion;
  std::vector<std::size_t> premises;
  std::string statement;
  std::optional<EmbeddingStep> embedding;
  std::optional<BoundedGenerationStep> bounded_generation;
  std::optional<MonotonicityStep> monotonicity;
};

// Structural certificate for relative property (T) of H1 < H2 and its
// monotone consequences. Axiom steps are trusted leaves and marked as such;
// everything else is mechanically checkable.
struct RelTCertificate {
  BlockSpec spec;
  std::vector<CertStep> steps;
  std::string conclusion;
};

// Element of the abstract pair Z^n x| SL(n,Z), law
// (z1, s1)(z2, s2) = (z1 + s1 z2, s1 s2).
struct AbstractPairElement {
  Vec z;
  IntMatrix s;

  static AbstractPairElement identity(std::size_t n) {
    return {Vec(n), IntMatrix::identity(n)};
  }

  AbstractPairElement operator*(const AbstractPairElement& o) const {
    AbstractPairElement r;
    r.z = z;
    Vec sz = s.apply(o.z);
    for (std::size_t i = 0; i < r.z.size(); ++i) r.z[i] += sz[i];
    r.s = s * o.s;
    return r;
  }
};

// phi(z, s) evaluated through the stored generator images only: the lattice
// part as a product of lattice-image powers, the SL part along a canonical
// transvection word recomputed from the value of s. Corrupting any stored
// image breaks the homomorphism identity on some generator pair.
inline GroupElement evaluate_embedding(const EmbeddingStep& e, const BlockSpec& spec,
                                       const AbstractPairElement& x) {
  auto positions = transvection_positions(spec.n);
  GroupElement acc = GroupElement::identity(spec);
  for (std::size_t j = 0; j < x.z.size(); ++j) {
    if (x.z[j] == 0) continue;
    if (!x.z[j].fits_slong_p())
      throw out_of_scope_error("evaluate_embedding: lattice exponent too large");
    acc = acc * GroupElement(spec, pow(e.lattice_images.at(j).mat, x.z[j].get_si()));
  }
  for (const TransvectionLetter& letter : transvection_word(x.s)) {
    std::size_t idx = 0;
    while (idx < positions.size() &&
           (positions[idx].first != letter.i || positions[idx].second != letter.j))
      ++idx;
    if (idx == positions.size())
      throw inconsistency_error("evaluate_embedding: unknown transvection position");
    if (!letter.exponent.fits_slong_p())
      throw out_of_scope_error("evaluate_embedding: transvection exponent too large");
    acc = acc * GroupElement(spec, pow(e.sl_images.at(idx).mat, letter.exponent.get_si()));
  }
  return acc;
}

namespace detail {

inline GroupElement sl_block_embed(const BlockSpec& s, const IntMatrix& b) {
  return element_from_blocks(s, IntMatrix::identity(s.k), IntMatrix(s.k, s.n), b, Vec(s.k),
                             Vec(s.n));
}

inline EmbeddingStep make_l_embedding(const BlockSpec& s) {
  EmbeddingStep e;
  e.target_small = SubgroupTag::L;
  for (std::size_t j = 0; j < s.n; ++j) {
    Vec w(s.n);
    w[j] = 1;
    e.lattice_images.push_back(element_from_blocks(s, IntMatrix::identity(s.k),
                                                   IntMatrix(s.k, s.n), IntMatrix::identity(s.n),
                                                   Vec(s.k), w));
  }
  for (auto [i, j] : transvection_positions(s.n))
    e.sl_images.push_back(sl_block_embed(s, transvection(s.n, i, j, 1)));
  return e;
}

// (z, s) -> (M = e_i (s^-1 z)^t, S = s^-t): the twist keeps the map a
// homomorphism because the M block picks up right factors of S.
inline EmbeddingStep make_ki_embedding(const BlockSpec& s, std::size_t row) {
  EmbeddingStep e;
  e.target_small = SubgroupTag::Ki;
  e.row_index = row;
  for (std::size_t j = 0; j < s.n; ++j) {
    IntMatrix m(s.k, s.n);
    m.at(row, j) = 1;
    e.lattice_images.push_back(element_from_blocks(s, IntMatrix::identity(s.k), m,
                                                   IntMatrix::identity(s.n), Vec(s.k), Vec(s.n)));
  }
  for (auto [i, j] : transvection_positions(s.n))
    e.sl_images.push_back(sl_block_embed(s, transpose_dual(transvection(s.n, i, j, 1))));
  return e;
}

}  // namespace detail

inline RelTCertificate build_certificate(const GroupPresentation& p) {
  if (p.family != FamilyTag::theorem1)
    throw precondition_error("build_certificate: theorem1 presentation required");
  if (p.spec.n < 2)
    throw hypothesis_error(
        "build_certificate: the relative property (T) axiom needs n >= 2; refusing to build");
  const BlockSpec s = p.spec;

  RelTCertificate cert;
  cert.spec = s;

  CertStep axiom;
  axiom.kind = StepKind::axiom;
  axiom.statement =
      "trusted leaf: Z^n inside Z^n x| SL(n,Z) has relative property (T) for n >= 2";
  cert.steps.push_back(std::move(axiom));

  CertStep l_embed;
  l_embed.kind = StepKind::embedding;
  l_embed.premises = {0};
  l_embed.statement =
      "the translation column Z^n and the SL block realize the axiom pair inside H2, so L < H2 "
      "has relative property (T)";
  l_embed.embedding = detail::make_l_embedding(s);
  cert.steps.push_back(std::move(l_embed));

  for (std::size_t i = 0; i < s.k; ++i) {
    CertStep ki;
    ki.kind = StepKind::embedding;
    ki.premises = {0};
    ki.statement = "row " + std::to_string(i) +
                   " of the M block and the inverse-transposed SL block realize the axiom pair "
                   "inside H2, so K" +
                   std::to_string(i + 1) + " < H2 has relative property (T)";
    ki.embedding = detail::make_ki_embedding(s, i);
    cert.steps.push_back(std::move(ki));
  }

  CertStep bg;
  bg.kind = StepKind::bounded_generation;
  bg.statement = "H1 = K L K L with K = K1 ... Kk: every element factors through the "
                 "(T)-small subgroups with product length " +
                 std::to_string(2 * s.k + 2);
  BoundedGenerationStep bgs;
  bgs.product_length = 2 * s.k + 2;
  bgs.samples.push_back(klkl_decompose(GroupElement::identity(s)));
  Rng rng(0);
  for (int t = 0; t < 5; ++t) {
    GroupElement h = element_from_blocks(
        s, IntMatrix::identity(s.k), testing::random_matrix(rng, s.k, s.n, 1000),
        IntMatrix::identity(s.n), testing::random_vector(rng, s.k, 1000),
        testing::random_vector(rng, s.n, 1000));
    bgs.samples.push_back(klkl_decompose(h));
  }
  bg.bounded_generation = std::move(bgs);
  cert.steps.push_back(std::move(bg));

  CertStep concl1;
  concl1.kind = StepKind::conclusion;
  concl1.premises = {};
  for (std::size_t i = 0; i <= s.k; ++i) concl1.premises.push_back(1 + i);
  concl1.premises.push_back(1 + s.k + 1);
  concl1.statement =
      "bounded generation transfers relative property (T) from the factors: H1 < H2";
  cert.steps.push_back(std::move(concl1));

  std::size_t concl1_idx = cert.steps.size() - 1;
  CertStep mono1;
  mono1.kind = StepKind::monotonicity;
  mono1.premises = {concl1_idx};
  mono1.statement = "shrinking the small side preserves relative property (T): H < H2";
  mono1.monotonicity = MonotonicityStep{SubgroupTag::H1, SubgroupTag::H2, SubgroupTag::H,
                                        SubgroupTag::H2};
  cert.steps.push_back(std::move(mono1));

  CertStep mono2;
  mono2.kind = StepKind::monotonicity;
  mono2.premises = {concl1_idx + 1};
  mono2.statement = "enlarging the ambient side preserves relative property (T): H < G";
  mono2.monotonicity = MonotonicityStep{SubgroupTag::H, SubgroupTag::H2, SubgroupTag::H,
                                        SubgroupTag::G};
  cert.steps.push_back(std::move(mono2));

  CertStep final_step;
  final_step.kind = StepKind::conclusion;
  final_step.premises = {concl1_idx + 2};
  final_step.statement =
      "interpretive step: relative property (T) of the translation lattice inside the full "
      "block group is the group-level form of rigidity of the dual action";
  cert.steps.push_back(std::move(final_step));

  cert.conclusion = "the dual action of Gamma on the (k+n)-torus is rigid";
  return cert;
}

struct StepCheck {
  std::size_t index = 0;
  std::string kind;
  bool pass = false;
  std::string detail;
};

struct CertificateCheckReport {
  bool all_pass = false;
  std::vector<StepCheck> steps;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

namespace detail {

inline const std::vector<GroupElement>& generators_for_tag(const GroupPresentation& p,
                                                           SubgroupTag tag) {
  switch (tag) {
    case SubgroupTag::G:
    case SubgroupTag::Gamma: return p.gamma_generators;
    case SubgroupTag::H: return p.h_generators;
    case SubgroupTag::H1: return p.h1_generators;
    case SubgroupTag::H2: return p.h2_generators;
    case SubgroupTag::K: return p.k_generators;
    case SubgroupTag::L: return p.l_generators;
    default: throw domain_error("generators_for_tag: unsupported tag");
  }
}

inline AbstractPairElement random_abstract_element(Rng& rng, std::size_t n) {
  AbstractPairElement x = AbstractPairElement::identity(n);
  for (std::size_t j = 0; j < n; ++j) x.z[j] = rng.range(-20, 20);
  std::vector<IntMatrix> sl = sl_generators(n);
  int len = static_cast<int>(rng.range(0, 6));
  for (int t = 0; t < len; ++t) {
    std::size_t idx = static_cast<std::size_t>(rng.range(0, static_cast<long>(sl.size()) - 1));
    x.s = x.s * sl[idx];
  }
  return x;
}

inline bool check_embedding(const EmbeddingStep& e, const GroupPresentation& p,
                            std::size_t samples, Rng& rng, std::string& detail) {
  const BlockSpec s = p.spec;
  std::vector<IntMatrix> sl = sl_generators(s.n);
  if (e.lattice_images.size() != s.n || e.sl_images.size() != transvection_positions(s.n).size()) {
    detail = "stored image lists have the wrong arity";
    return false;
  }

  // distinguished Z^n maps onto the claimed subgroup generators
  const std::vector<GroupElement>& expected =
      e.target_small == SubgroupTag::L ? p.l_generators : p.ki_generators.at(e.row_index);
  for (std::size_t j = 0; j < s.n; ++j) {
    if (!membership(e.lattice_images[j], e.target_small, e.row_index)) {
      detail = "lattice image " + std::to_string(j) + " leaves the claimed subgroup";
      return false;
    }
    if (e.lattice_images[j] != expected.at(j)) {
      detail = "lattice image " + std::to_string(j) +
               " differs from the subgroup generator it must hit";
      return false;
    }
  }
  for (const GroupElement& g : e.sl_images) {
    if (!membership(g, SubgroupTag::H2)) {
      detail = "an SL image leaves H2";
      return false;
    }
  }

  // abstract generator list: (e_j, e) then (0, E_ij(+-1))
  std::vector<AbstractPairElement> gens;
  for (std::size_t j = 0; j < s.n; ++j) {
    AbstractPairElement a = AbstractPairElement::identity(s.n);
    a.z[j] = 1;
    gens.push_back(std::move(a));
  }
  for (const IntMatrix& b : sl) {
    AbstractPairElement a = AbstractPairElement::identity(s.n);
    a.s = b;
    gens.push_back(std::move(a));
  }

  auto hom_pair_ok = [&](const AbstractPairElement& a, const AbstractPairElement& b) {
    GroupElement lhs = evaluate_embedding(e, s, a) * evaluate_embedding(e, s, b);
    GroupElement rhs = evaluate_embedding(e, s, a * b);
    return lhs == rhs;
  };

  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = 0; j < gens.size(); ++j)
      if (!hom_pair_ok(gens[i], gens[j])) {
        detail = "homomorphism fails on the generator pair (" + std::to_string(i) + ", " +
                 std::to_string(j) + ")";
        return false;
      }

  std::unordered_set<std::string> images;
  std::unordered_set<std::string> arguments;
  for (std::size_t t = 0; t < samples; ++t) {
    AbstractPairElement a = random_abstract_element(rng, s.n);
    AbstractPairElement b = random_abstract_element(rng, s.n);
    if (!hom_pair_ok(a, b)) {
      detail = "homomorphism fails on a sampled pair (first element z = " + encode_vec(a.z) + ")";
      return false;
    }
    // sampled injectivity: distinct abstract elements map to distinct images
    std::string arg_key = encode_vec(a.z) + "|" + a.s.encode();
    if (arguments.insert(arg_key).second) {
      if (!images.insert(evaluate_embedding(e, s, a).mat.encode()).second) {
        detail = "sampled injectivity fails: two elements share an image";
        return false;
      }
    }
  }
  detail = "homomorphism exact on all generator pairs and " + std::to_string(samples) +
           " sampled pairs; injectivity sampled";
  return true;
}

}  // namespace detail

// Re-verifies every step of a certificate against the presentation:
// embeddings are homomorphisms landing where claimed, bounded generation
// recomposes exactly on stored and fresh samples, monotonicity containments
// hold on generators, and the premise graph is acyclic.
inline CertificateCheckReport check_certificate(const RelTCertificate& cert,
                                                const GroupPresentation& p, std::size_t samples,
                                                std::uint64_t seed) {
  if (!(cert.spec == p.spec))
    throw dimension_error("check_certificate: certificate and presentation specs differ");
  CertificateCheckReport rep;
  rep.samples = samples;
  rep.seed = seed;
  rep.all_pass = true;
  Rng rng(seed);

  for (std::size_t idx = 0; idx < cert.steps.size(); ++idx) {
    const CertStep& st = cert.steps[idx];
    StepCheck sc;
    sc.index = idx;
    sc.kind = step_kind_name(st.kind);
    sc.pass = true;

    for (std::size_t pr : st.premises) {
      if (pr >= idx) {
        sc.pass = false;
        sc.detail = "premise " + std::to_string(pr) + " is not an earlier step (cycle)";
      }
    }

    if (sc.pass) switch (st.kind) {
        case StepKind::axiom: {
          if (p.spec.n < 2) {
            sc.pass = false;
            sc.detail = "axiom unavailable for n < 2";
          } else {
            sc.detail = "trusted leaf, not mechanically checkable";
          }
          break;
        }
        case StepKind::embedding: {
          if (!st.embedding) {
            sc.pass = false;
            sc.detail = "missing embedding data";
            break;
          }
          sc.pass = detail::check_embedding(*st.embedding, p, samples, rng, sc.detail);
          break;
        }
        case StepKind::bounded_generation: {
          if (!st.bounded_generation) {
            sc.pass = false;
            sc.detail = "missing bounded generation data";
            break;
          }
          const BoundedGenerationStep& bg = *st.bounded_generation;
          if (bg.product_length != 2 * p.spec.k + 2) {
            sc.pass = false;
            sc.detail = "product length differs from k + 1 + k + 1";
            break;
          }
          for (std::size_t t = 0; t < bg.samples.size() && sc.pass; ++t) {
            const KLKLWitness& w = bg.samples[t];
            if (w.k1 * w.l1 * w.k2 * w.l2 != w.target) {
              sc.pass = false;
              sc.detail = "stored witness " + std::to_string(t) +
                          " does not recompose to its target";
            } else if (!membership(w.k1, SubgroupTag::K) || !membership(w.k2, SubgroupTag::K) ||
                       !membership(w.l1, SubgroupTag::L) || !membership(w.l2, SubgroupTag::L)) {
              sc.pass = false;
              sc.detail = "stored witness " + std::to_string(t) +
                          " has a factor outside its subgroup";
            }
          }
          for (std::size_t t = 0; t < samples && sc.pass; ++t) {
            GroupElement h = element_from_blocks(
                p.spec, IntMatrix::identity(p.spec.k),
                testing::random_matrix(rng, p.spec.k, p.spec.n, 1000000),
                IntMatrix::identity(p.spec.n), testing::random_vector(rng, p.spec.k, 1000000),
                testing::random_vector(rng, p.spec.n, 1000000));
            KLKLWitness w = klkl_decompose(h);
            for (const GroupElement* f : {&w.k1, &w.k2})
              for (const GroupElement& row : k_row_decompose(*f)) (void)row;
            if (w.k1 * w.l1 * w.k2 * w.l2 != h) {
              sc.pass = false;
              sc.detail = "fresh decomposition failed to recompose (element " +
                          encode_vec(h.u_col()) + ")";
            }
          }
          if (sc.pass)
            sc.detail = "stored witnesses verified; " + std::to_string(samples) +
                        " fresh elements with entries up to 10^6 decompose exactly";
          break;
        }
        case StepKind::monotonicity: {
          if (!st.monotonicity) {
            sc.pass = false;
            sc.detail = "missing monotonicity data";
            break;
          }
          const MonotonicityStep& mo = *st.monotonicity;
          bool small_shrinks = mo.from_large == mo.to_large;
          bool large_grows = mo.from_small == mo.to_small;
          if (!small_shrinks && !large_grows) {
            sc.pass = false;
            sc.detail = "neither side is fixed; not a monotonicity move";
            break;
          }
          if (small_shrinks) {
            const auto& gens = detail::generators_for_tag(p, mo.to_small);
            for (std::size_t t = 0; t < gens.size(); ++t)
              if (!membership(gens[t], mo.from_small)) {
                sc.pass = false;
                sc.detail = std::string("containment fails: generator ") + std::to_string(t) +
                            " of " + tag_name(mo.to_small) + " is not in " +
                            tag_name(mo.from_small);
                break;
              }
          }
          if (sc.pass && large_grows) {
            const auto& gens = detail::generators_for_tag(p, mo.from_large);
            for (std::size_t t = 0; t < gens.size(); ++t)
              if (!membership(gens[t], mo.to_large)) {
                sc.pass = false;
                sc.detail = std::string("containment fails: generator ") + std::to_string(t) +
                            " of " + tag_name(mo.from_large) + " is not in " +
                            tag_name(mo.to_large);
                break;
              }
          }
          if (sc.pass) sc.detail = "containments hold on generators";
          break;
        }
        case StepKind::conclusion: {
          sc.detail = "combines premises " + std::to_string(st.premises.size());
          break;
        }
      }

    rep.all_pass = rep.all_pass && sc.pass;
    rep.steps.push_back(std::move(sc));
  }
  return rep;
}

}  // namespace toract
