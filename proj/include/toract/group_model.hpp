#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "toract/bigint.hpp"
#include "toract/errors.hpp"
#include "toract/int_matrix.hpp"

namespace toract {

// Block template for the upper-triangular construction
//
//   ( lambda  M      Z^k )
//   ( 0       SL(n)  Z^n )          lambda-block k x k, SL-block n x n,
//   ( 0       0      1   )          translation column k + n entries.
//
// k may be zero (no lambda block), n >= 2 for the theorem-level families.
struct BlockSpec {
  std::size_t k = 0;
  std::size_t n = 2;

  std::size_t dim() const { return k + n; }        // lattice the group acts on
  std::size_t matrix_size() const { return k + n + 1; }

  bool operator==(const BlockSpec& o) const { return k == o.k && n == o.n; }
};

// Element of the ambient group, stored as its full (k+n+1)^2 matrix. Block
// views are derived; one multiplication routine serves every subgroup.
struct GroupElement {
  BlockSpec spec;
  IntMatrix mat;

  GroupElement() = default;
  GroupElement(BlockSpec s, IntMatrix m) : spec(s), mat(std::move(m)) {
    if (mat.rows() != spec.matrix_size() || mat.cols() != spec.matrix_size())
      throw dimension_error("GroupElement: matrix size does not match the block spec");
  }

  static GroupElement identity(BlockSpec s) {
    return GroupElement(s, IntMatrix::identity(s.matrix_size()));
  }

  IntMatrix lambda_block() const {
    IntMatrix b(spec.k, spec.k);
    for (std::size_t i = 0; i < spec.k; ++i)
      for (std::size_t j = 0; j < spec.k; ++j) b.at(i, j) = mat.at(i, j);
    return b;
  }

  IntMatrix m_block() const {
    IntMatrix b(spec.k, spec.n);
    for (std::size_t i = 0; i < spec.k; ++i)
      for (std::size_t j = 0; j < spec.n; ++j) b.at(i, j) = mat.at(i, spec.k + j);
    return b;
  }

  IntMatrix s_block() const {
    IntMatrix b(spec.n, spec.n);
    for (std::size_t i = 0; i < spec.n; ++i)
      for (std::size_t j = 0; j < spec.n; ++j) b.at(i, j) = mat.at(spec.k + i, spec.k + j);
    return b;
  }

  Vec u_col() const {  // Z^k part of the translation column
    Vec v(spec.k);
    for (std::size_t i = 0; i < spec.k; ++i) v[i] = mat.at(i, spec.dim());
    return v;
  }

  Vec w_col() const {  // Z^n part of the translation column
    Vec v(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) v[i] = mat.at(spec.k + i, spec.dim());
    return v;
  }

  // The (k+n) x (k+n) linear part (lambda and M and SL blocks).
  IntMatrix linear_part() const {
    std::size_t d = spec.dim();
    IntMatrix b(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) b.at(i, j) = mat.at(i, j);
    return b;
  }

  GroupElement operator*(const GroupElement& o) const {
    if (!(spec == o.spec)) throw dimension_error("group product: block specs differ");
    return GroupElement(spec, mat * o.mat);
  }

  GroupElement inverse() const { return GroupElement(spec, inverse_unimodular(mat)); }

  bool operator==(const GroupElement& o) const { return spec == o.spec && mat == o.mat; }
  bool operator!=(const GroupElement& o) const { return !(*this == o); }
};

// Assembles an element from blocks; absent blocks default to identity/zero.
inline GroupElement element_from_blocks(BlockSpec s, const IntMatrix& lambda,
                                        const IntMatrix& m, const IntMatrix& sl,
                                        const Vec& u, const Vec& w) {
  if (lambda.rows() != s.k || lambda.cols() != s.k)
    throw dimension_error("element_from_blocks: lambda block size");
  if (m.rows() != s.k || m.cols() != s.n)
    throw dimension_error("element_from_blocks: M block size");
  if (sl.rows() != s.n || sl.cols() != s.n)
    throw dimension_error("element_from_blocks: SL block size");
  if (u.size() != s.k || w.size() != s.n)
    throw dimension_error("element_from_blocks: translation sizes");
  IntMatrix full(s.matrix_size(), s.matrix_size());
  for (std::size_t i = 0; i < s.k; ++i) {
    for (std::size_t j = 0; j < s.k; ++j) full.at(i, j) = lambda.at(i, j);
    for (std::size_t j = 0; j < s.n; ++j) full.at(i, s.k + j) = m.at(i, j);
    full.at(i, s.dim()) = u[i];
  }
  for (std::size_t i = 0; i < s.n; ++i) {
    for (std::size_t j = 0; j < s.n; ++j) full.at(s.k + i, s.k + j) = sl.at(i, j);
    full.at(s.k + i, s.dim()) = w[i];
  }
  full.at(s.dim(), s.dim()) = 1;
  return GroupElement(s, std::move(full));
}

namespace detail {

inline bool lower_blocks_zero(const GroupElement& g) {
  const BlockSpec& s = g.spec;
  for (std::size_t i = s.k; i < s.dim(); ++i)
    for (std::size_t j = 0; j < s.k; ++j)
      if (g.mat.at(i, j) != 0) return false;
  for (std::size_t j = 0; j < s.dim(); ++j)
    if (g.mat.at(s.dim(), j) != 0) return false;
  return g.mat.at(s.dim(), s.dim()) == 1;
}

inline bool block_is_identity(const IntMatrix& b) { return b.is_identity() || b.rows() == 0; }

}  // namespace detail

enum class SubgroupTag { G, Gamma, H, H1, H2, K, L, Ki };

inline const char* tag_name(SubgroupTag t) {
  switch (t) {
    case SubgroupTag::G: return "G";
    case SubgroupTag::Gamma: return "Gamma";
    case SubgroupTag::H: return "H";
    case SubgroupTag::H1: return "H1";
    case SubgroupTag::H2: return "H2";
    case SubgroupTag::K: return "K";
    case SubgroupTag::L: return "L";
    case SubgroupTag::Ki: return "Ki";
  }
  return "?";
}

// Exact block-pattern membership. The lambda position admits any element of
// SL(k,Z) and the SL position any element of SL(n,Z); both determinants are
// checked exactly. `row` selects i for the Ki test (0-based).
inline bool membership(const GroupElement& g, SubgroupTag tag, std::size_t row = 0) {
  const BlockSpec& s = g.spec;
  if (!detail::lower_blocks_zero(g)) return false;
  IntMatrix lambda = g.lambda_block();
  IntMatrix m = g.m_block();
  IntMatrix sl = g.s_block();
  bool u_zero = is_zero_vec(g.u_col());
  bool w_zero = is_zero_vec(g.w_col());
  bool lambda_id = detail::block_is_identity(lambda);
  bool sl_id = sl.is_identity();
  bool m_zero = m.is_zero();

  switch (tag) {
    case SubgroupTag::G:
      return det(lambda) == 1 && det(sl) == 1;
    case SubgroupTag::Gamma:
      return det(lambda) == 1 && det(sl) == 1 && u_zero && w_zero;
    case SubgroupTag::H:
      return lambda_id && sl_id && m_zero;
    case SubgroupTag::H1:
      return lambda_id && sl_id;
    case SubgroupTag::H2:
      return lambda_id && det(sl) == 1;
    case SubgroupTag::K:
      return lambda_id && sl_id && u_zero && w_zero;
    case SubgroupTag::L:
      return lambda_id && sl_id && m_zero && u_zero;
    case SubgroupTag::Ki: {
      if (!(lambda_id && sl_id && u_zero && w_zero)) return false;
      if (row >= s.k) throw dimension_error("membership: Ki row index out of range");
      for (std::size_t i = 0; i < s.k; ++i) {
        if (i == row) continue;
        for (std::size_t j = 0; j < s.n; ++j)
          if (m.at(i, j) != 0) return false;
      }
      return true;
    }
  }
  return false;
}

// Lattice point of H, identified with Z^k x Z^n.
struct HPoint {
  Vec v;  // Z^k part
  Vec w;  // Z^n part

  bool operator==(const HPoint& o) const { return v == o.v && w == o.w; }

  Vec flat() const {
    Vec f = v;
    f.insert(f.end(), w.begin(), w.end());
    return f;
  }

  static HPoint from_flat(const BlockSpec& s, const Vec& f) {
    if (f.size() != s.dim()) throw dimension_error("HPoint: flat vector length");
    HPoint p;
    p.v.assign(f.begin(), f.begin() + static_cast<long>(s.k));
    p.w.assign(f.begin() + static_cast<long>(s.k), f.end());
    return p;
  }
};

// Conjugation action of Gamma on the translation lattice H ~ Z^(k+n):
// gamma h gamma^-1 translates by (lambda v + M w, S w). This is also the
// index action on torus characters used by the dual orbit criterion.
inline HPoint conj_action(const GroupElement& gamma, const HPoint& p) {
  const BlockSpec& s = gamma.spec;
  if (p.v.size() != s.k || p.w.size() != s.n)
    throw dimension_error("conj_action: point dimensions do not match the spec");
  IntMatrix lambda = gamma.lambda_block();
  IntMatrix m = gamma.m_block();
  IntMatrix sl = gamma.s_block();
  HPoint out;
  out.v = lambda.apply(p.v);
  Vec mw = m.apply(p.w);
  for (std::size_t i = 0; i < s.k; ++i) out.v[i] += mw[i];
  out.w = sl.apply(p.w);
  return out;
}

// g = h * gamma with h the translation part and gamma the linear part.
inline std::pair<GroupElement, GroupElement> semidirect_split(const GroupElement& g) {
  const BlockSpec& s = g.spec;
  if (!membership(g, SubgroupTag::G))
    throw membership_error("semidirect_split: element is not in G");
  GroupElement h = element_from_blocks(s, IntMatrix::identity(s.k), IntMatrix(s.k, s.n),
                                       IntMatrix::identity(s.n), g.u_col(), g.w_col());
  GroupElement gamma = element_from_blocks(s, g.lambda_block(), g.m_block(), g.s_block(),
                                           Vec(s.k), Vec(s.n));
  if (h * gamma != g) throw inconsistency_error("semidirect_split: recomposition failed");
  return {h, gamma};
}

// Natural quotient Gamma -> Lambda: the upper-left block.
inline IntMatrix quotient_pi(const GroupElement& gamma) { return gamma.lambda_block(); }

// Inverse transpose of a unimodular matrix: the torus-side transform of a
// lattice automorphism.
inline IntMatrix transpose_dual(const IntMatrix& a) {
  Int d = det(a);
  if (d != 1 && d != -1)
    throw precondition_error("transpose_dual: matrix is not unimodular (det = " + d.get_str() +
                             ")");
  return inverse_unimodular(a).transpose();
}

enum class LambdaKind { empty, trivial, cyclic, general };

enum class FamilyTag { theorem1, remark4, quotient, diagonal };

inline const char* family_name(FamilyTag f) {
  switch (f) {
    case FamilyTag::theorem1: return "theorem1";
    case FamilyTag::remark4: return "remark4";
    case FamilyTag::quotient: return "quotient";
    case FamilyTag::diagonal: return "diagonal";
  }
  return "?";
}

// Generators for the ambient group and all the named subgroups, derived from
// the block spec and a finite generator list for the lambda block.
struct GroupPresentation {
  BlockSpec spec;
  FamilyTag family = FamilyTag::theorem1;
  LambdaKind lambda_kind = LambdaKind::general;

  std::vector<IntMatrix> lambda_generators;  // k x k, det 1

  std::vector<GroupElement> gamma_generators;
  std::vector<GroupElement> h_generators;
  std::vector<GroupElement> h1_generators;
  std::vector<GroupElement> h2_generators;
  std::vector<GroupElement> k_generators;
  std::vector<GroupElement> l_generators;
  std::vector<std::vector<GroupElement>> ki_generators;  // one list per row i

  std::vector<std::string> gamma_labels;

  // For cyclic Lambda = A^Z, the generator A (identity when Lambda is trivial).
  IntMatrix cyclic_lambda() const {
    if (lambda_kind == LambdaKind::trivial || lambda_generators.empty())
      return IntMatrix::identity(spec.k);
    return lambda_generators.front();
  }
};

// Elementary transvection I + c * E_ij acting on n coordinates (i != j).
inline IntMatrix transvection(std::size_t n, std::size_t i, std::size_t j, long c) {
  if (i == j || i >= n || j >= n) throw dimension_error("transvection: bad index pair");
  IntMatrix m = IntMatrix::identity(n);
  m.at(i, j) = c;
  return m;
}

// Standard generating set of SL(n,Z): all transvections E_ij(+1), E_ij(-1).
inline std::vector<IntMatrix> sl_generators(std::size_t n) {
  std::vector<IntMatrix> out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      out.push_back(transvection(n, i, j, 1));
      out.push_back(transvection(n, i, j, -1));
    }
  return out;
}

// Index pairs (i, j), i != j, in the order used for transvection words.
inline std::vector<std::pair<std::size_t, std::size_t>> transvection_positions(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) out.emplace_back(i, j);
  return out;
}

// One letter of a transvection word: E_ij(exponent).
struct TransvectionLetter {
  std::size_t i = 0, j = 0;
  Int exponent;
};

// Writes s in SL(n,Z) as a product of elementary transvections, by reducing
// s to the identity with row operations and reversing them. Row "rotations"
// (swap with a sign) are themselves spelled as three transvections, so the
// output uses nothing beyond E_ij(m).
inline std::vector<TransvectionLetter> transvection_word(IntMatrix s) {
  if (!s.is_square()) throw dimension_error("transvection_word: matrix not square");
  std::size_t n = s.rows();
  if (det(s) != 1)
    throw precondition_error("transvection_word: determinant must be 1, got " +
                             det(s).get_str());
  if (n <= 1) return {};

  // ops applied on the left, in order; the word is their reversed inverses
  std::vector<TransvectionLetter> ops;
  auto row_add = [&](std::size_t i, std::size_t j, const Int& m) {
    if (m == 0) return;
    for (std::size_t c = 0; c < n; ++c) s.at(i, c) += m * s.at(j, c);
    ops.push_back({i, j, m});
  };

  for (std::size_t c = 0; c + 1 < n; ++c) {
    // Euclid on column c over rows c..n-1
    while (true) {
      std::size_t best = n;
      for (std::size_t r = c; r < n; ++r) {
        if (s.at(r, c) == 0) continue;
        if (best == n || abs(s.at(r, c)) < abs(s.at(best, c))) best = r;
      }
      if (best == n)
        throw inconsistency_error("transvection_word: zero column in a unimodular matrix");
      if (best != c) {
        // rotate rows (c, best): (x, y) -> (y, -x) as three transvections
        row_add(c, best, 1);
        row_add(best, c, -1);
        row_add(c, best, 1);
        continue;
      }
      bool reduced = true;
      for (std::size_t r = c + 1; r < n; ++r) {
        if (s.at(r, c) == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), s.at(r, c).get_mpz_t(), s.at(c, c).get_mpz_t());
        row_add(r, c, -q);
        if (s.at(r, c) != 0) reduced = false;
      }
      if (reduced) break;
    }
    if (s.at(c, c) < 0) {
      // pivot is -1 (the column gcd is 1): flip it with a lower row
      std::size_t r = c + 1;
      row_add(r, c, 1);   // s[r][c] = -1
      row_add(c, r, -2);  // s[c][c] = +1
      row_add(r, c, 1);   // s[r][c] = 0
    }
    // pivot is +1: clear the column above
    for (std::size_t r = 0; r < c; ++r) row_add(r, c, -s.at(r, c));
  }
  // bottom-right entry is +1 by the determinant; clear the last column above
  if (s.at(n - 1, n - 1) != 1)
    throw inconsistency_error("transvection_word: reduction left a nonunit corner");
  for (std::size_t r = 0; r + 1 < n; ++r) row_add(r, n - 1, -s.at(r, n - 1));
  if (!s.is_identity()) throw inconsistency_error("transvection_word: reduction failed");

  // ops[T-1] ... ops[0] s = I, so s = ops[0]^-1 ops[1]^-1 ... ops[T-1]^-1
  std::vector<TransvectionLetter> word;
  word.reserve(ops.size());
  for (const TransvectionLetter& op : ops) word.push_back({op.i, op.j, -op.exponent});
  return word;
}

inline GroupPresentation build_theorem1_family(std::size_t k, std::size_t n,
                                               std::vector<IntMatrix> lambda_generators) {
  if (n < 2) throw hypothesis_error("build_theorem1_family: n >= 2 is required");
  if (k == 0 && !lambda_generators.empty())
    throw precondition_error("build_theorem1_family: k = 0 admits no lambda generators");
  for (const IntMatrix& a : lambda_generators) {
    if (a.rows() != k || a.cols() != k)
      throw precondition_error("build_theorem1_family: lambda generator is not k x k");
    if (det(a) != 1)
      throw precondition_error("build_theorem1_family: lambda generator has det " +
                               det(a).get_str() + ", expected 1");
  }

  GroupPresentation p;
  p.spec = BlockSpec{k, n};
  p.family = FamilyTag::theorem1;
  p.lambda_generators = std::move(lambda_generators);
  if (k == 0)
    p.lambda_kind = LambdaKind::empty;
  else if (p.lambda_generators.empty() ||
           (p.lambda_generators.size() == 1 && p.lambda_generators[0].is_identity()))
    p.lambda_kind = LambdaKind::trivial;
  else if (p.lambda_generators.size() == 1)
    p.lambda_kind = LambdaKind::cyclic;
  else
    p.lambda_kind = LambdaKind::general;

  const BlockSpec s = p.spec;
  IntMatrix id_k = IntMatrix::identity(k);
  IntMatrix id_n = IntMatrix::identity(n);
  IntMatrix zero_m(k, n);
  Vec zero_u(k), zero_w(n);

  auto lambda_embed = [&](const IntMatrix& a) {
    return element_from_blocks(s, a, zero_m, id_n, zero_u, zero_w);
  };
  auto sl_embed = [&](const IntMatrix& b) {
    return element_from_blocks(s, id_k, zero_m, b, zero_u, zero_w);
  };
  auto m_unit = [&](std::size_t i, std::size_t j) {
    IntMatrix m = zero_m;
    m.at(i, j) = 1;
    return element_from_blocks(s, id_k, m, id_n, zero_u, zero_w);
  };
  auto translation = [&](const Vec& u, const Vec& w) {
    return element_from_blocks(s, id_k, zero_m, id_n, u, w);
  };

  // Gamma: lambda embeds, M units, SL transvections.
  for (std::size_t t = 0; t < p.lambda_generators.size(); ++t) {
    p.gamma_generators.push_back(lambda_embed(p.lambda_generators[t]));
    p.gamma_labels.push_back("lambda[" + std::to_string(t) + "]");
  }
  p.ki_generators.assign(k, {});
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      GroupElement e = m_unit(i, j);
      p.gamma_generators.push_back(e);
      p.gamma_labels.push_back("M(" + std::to_string(i) + "," + std::to_string(j) + ")");
      p.k_generators.push_back(e);
      p.ki_generators[i].push_back(e);
      p.h1_generators.push_back(e);
      p.h2_generators.push_back(e);
    }
  std::vector<IntMatrix> sl = sl_generators(n);
  for (std::size_t t = 0; t < sl.size(); ++t) {
    GroupElement e = sl_embed(sl[t]);
    p.gamma_generators.push_back(e);
    p.gamma_labels.push_back("E[" + std::to_string(t) + "]");
    p.h2_generators.push_back(e);
  }

  // Translations: H, and the w-part for L.
  for (std::size_t i = 0; i < k; ++i) {
    Vec u = zero_u;
    u[i] = 1;
    GroupElement e = translation(u, zero_w);
    p.h_generators.push_back(e);
    p.h1_generators.push_back(e);
    p.h2_generators.push_back(e);
  }
  for (std::size_t i = 0; i < n; ++i) {
    Vec w = zero_w;
    w[i] = 1;
    GroupElement e = translation(zero_u, w);
    p.h_generators.push_back(e);
    p.h1_generators.push_back(e);
    p.h2_generators.push_back(e);
    p.l_generators.push_back(e);
  }
  return p;
}

// Human-readable name of gamma generator `index`, for diagnostics.
inline std::string describe_gamma_generator(const GroupPresentation& p, std::size_t index) {
  if (index < p.gamma_labels.size()) return p.gamma_labels[index];
  return "gamma[" + std::to_string(index) + "]";
}

}  // namespace toract
