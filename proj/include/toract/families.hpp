#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "toract/bigint.hpp"
#include "toract/errors.hpp"
#include "toract/group_model.hpp"
#include "toract/int_matrix.hpp"

namespace toract {

// Exact rational stand-in for an irrational rotation number, with a stated
// error bound. Witness sums only need the surrogate; the bound documents how
// far it may sit from the intended irrational.
struct AlphaSurrogate {
  Rat value;
  double error_bound = 0.0;

  double as_double() const { return value.get_d(); }
};

// Continued-fraction convergent of the golden mean with denominator at least
// min_denominator; the error of a convergent p/q is below 1/q^2.
inline AlphaSurrogate golden_mean_surrogate(unsigned long min_denominator = 1000000) {
  Int a = 0, b = 1;  // consecutive Fibonacci numbers: a/b -> (sqrt(5)-1)/2
  while (b < static_cast<long>(min_denominator)) {
    Int next = a + b;
    a = b;
    b = next;
  }
  AlphaSurrogate s;
  s.value = Rat(a) / Rat(b);
  double q = b.get_d();
  s.error_bound = 1.0 / (q * q);
  return s;
}

// Affine torus map theta -> B theta + alpha * t with B integral and t an
// integer vector; the alpha scale stays symbolic (t is stored exactly).
struct AffineElement {
  IntMatrix linear;  // n x n
  Vec shift;         // integer vector, scaled by alpha in the action

  AffineElement compose(const AffineElement& o) const {
    // (B1, t1) . (B2, t2): theta -> B1 B2 theta + alpha (B1 t2 + t1)
    AffineElement r;
    r.linear = linear * o.linear;
    r.shift = linear.apply(o.shift);
    for (std::size_t i = 0; i < shift.size(); ++i) r.shift[i] += shift[i];
    return r;
  }

  bool operator==(const AffineElement& o) const {
    return linear == o.linear && shift == o.shift;
  }
};

// Exact commutation record: linear generator B carries the alpha-translation
// by basis vector x to the alpha-translation by the integer vector B x.
struct AffineCommutationFact {
  std::size_t linear_index = 0;
  std::size_t translation_index = 0;
  Vec image;  // B * e_translation_index
};

// The lower-triangular affine family on T^n (n >= 3): linear maps fixing the
// first coordinate combined with rotation by alpha in every coordinate.
struct RemarkFourFamily {
  std::size_t n = 0;
  AlphaSurrogate alpha;
  std::vector<IntMatrix> linear_generators;  // in SL(n,Z), shape (1 0; m S)
  std::vector<Vec> translation_generators;   // standard basis of Z^n
  std::vector<AffineCommutationFact> commutation_facts;

  AffineElement linear_as_affine(std::size_t i) const {
    return AffineElement{linear_generators.at(i), Vec(n)};
  }
  AffineElement translation_as_affine(std::size_t i) const {
    return AffineElement{IntMatrix::identity(n), translation_generators.at(i)};
  }
};

inline RemarkFourFamily build_remark4_family(std::size_t n, AlphaSurrogate alpha) {
  if (n < 3) throw hypothesis_error("build_remark4_family: n >= 3 is required");
  RemarkFourFamily fam;
  fam.n = n;
  fam.alpha = std::move(alpha);

  // Column units below the fixed first coordinate.
  for (std::size_t i = 1; i < n; ++i) fam.linear_generators.push_back(transvection(n, i, 0, 1));
  // SL(n-1,Z) transvections in the lower block, one sign each; inverses are
  // available as group inverses.
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 1; j < n; ++j) {
      if (i == j) continue;
      fam.linear_generators.push_back(transvection(n, i, j, 1));
    }

  for (std::size_t i = 0; i < n; ++i) {
    Vec e(n);
    e[i] = 1;
    fam.translation_generators.push_back(e);
  }

  for (std::size_t b = 0; b < fam.linear_generators.size(); ++b)
    for (std::size_t t = 0; t < n; ++t) {
      AffineCommutationFact f;
      f.linear_index = b;
      f.translation_index = t;
      f.image = fam.linear_generators[b].apply(fam.translation_generators[t]);
      fam.commutation_facts.push_back(std::move(f));
    }
  return fam;
}

enum class DerivedActionKind { quotient, diagonal, mixed };

inline const char* derived_action_name(DerivedActionKind k) {
  switch (k) {
    case DerivedActionKind::quotient: return "quotient";
    case DerivedActionKind::diagonal: return "diagonal";
    case DerivedActionKind::mixed: return "mixed";
  }
  return "?";
}

// Gamma acting on a concatenated lattice, componentwise through the quotient
// map and/or the conjugation action.
struct DerivedAction {
  DerivedActionKind kind = DerivedActionKind::quotient;
  BlockSpec spec;

  std::size_t dimension() const {
    switch (kind) {
      case DerivedActionKind::quotient: return spec.k;
      case DerivedActionKind::diagonal: return 2 * spec.dim();
      case DerivedActionKind::mixed: return spec.k + spec.dim();
    }
    return 0;
  }

  Vec apply(const GroupElement& gamma, const Vec& x) const {
    if (x.size() != dimension()) throw dimension_error("DerivedAction::apply: vector length");
    switch (kind) {
      case DerivedActionKind::quotient:
        return quotient_pi(gamma).apply(x);
      case DerivedActionKind::diagonal: {
        std::size_t d = spec.dim();
        Vec a(x.begin(), x.begin() + static_cast<long>(d));
        Vec b(x.begin() + static_cast<long>(d), x.end());
        Vec ra = conj_action(gamma, HPoint::from_flat(spec, a)).flat();
        Vec rb = conj_action(gamma, HPoint::from_flat(spec, b)).flat();
        ra.insert(ra.end(), rb.begin(), rb.end());
        return ra;
      }
      case DerivedActionKind::mixed: {
        Vec a(x.begin(), x.begin() + static_cast<long>(spec.k));
        Vec b(x.begin() + static_cast<long>(spec.k), x.end());
        Vec ra = quotient_pi(gamma).apply(a);
        Vec rb = conj_action(gamma, HPoint::from_flat(spec, b)).flat();
        ra.insert(ra.end(), rb.begin(), rb.end());
        return ra;
      }
    }
    throw inconsistency_error("DerivedAction::apply: bad kind");
  }
};

struct DerivedActions {
  DerivedAction quotient;
  DerivedAction diagonal;
  DerivedAction mixed;
};

inline DerivedActions build_quotient_and_diagonal(const GroupPresentation& p) {
  if (p.family != FamilyTag::theorem1)
    throw precondition_error("build_quotient_and_diagonal: theorem1 presentation required");
  DerivedActions d;
  d.quotient = DerivedAction{DerivedActionKind::quotient, p.spec};
  d.diagonal = DerivedAction{DerivedActionKind::diagonal, p.spec};
  d.mixed = DerivedAction{DerivedActionKind::mixed, p.spec};
  return d;
}

}  // namespace toract
