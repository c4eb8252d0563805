#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "toract/bigint.hpp"
#include "toract/errors.hpp"
#include "toract/int_matrix.hpp"

namespace toract {

// Polynomial over Z, coefficients stored lowest degree first. The zero
// polynomial is the empty coefficient vector.
class IntPolynomial {
 public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<Int> coeffs) : c_(std::move(coeffs)) { normalize(); }

  static IntPolynomial from_coeffs(std::initializer_list<long> lowest_first) {
    std::vector<Int> c;
    for (long x : lowest_first) c.emplace_back(x);
    return IntPolynomial(std::move(c));
  }

  // x^d with coefficient a.
  static IntPolynomial monomial(std::size_t d, Int a = 1) {
    std::vector<Int> c(d + 1);
    c[d] = std::move(a);
    return IntPolynomial(std::move(c));
  }

  bool is_zero() const { return c_.empty(); }
  // Degree of the zero polynomial is reported as 0 alongside is_zero().
  std::size_t degree() const { return c_.empty() ? 0 : c_.size() - 1; }
  const std::vector<Int>& coeffs() const { return c_; }
  const Int& leading() const { return c_.back(); }

  Int coeff(std::size_t d) const { return d < c_.size() ? c_[d] : Int(0); }

  bool operator==(const IntPolynomial& o) const { return c_ == o.c_; }
  bool operator!=(const IntPolynomial& o) const { return !(*this == o); }

  IntPolynomial operator+(const IntPolynomial& o) const {
    std::vector<Int> r(std::max(c_.size(), o.c_.size()));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = coeff(i) + o.coeff(i);
    return IntPolynomial(std::move(r));
  }

  IntPolynomial operator-(const IntPolynomial& o) const {
    std::vector<Int> r(std::max(c_.size(), o.c_.size()));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = coeff(i) - o.coeff(i);
    return IntPolynomial(std::move(r));
  }

  IntPolynomial operator*(const IntPolynomial& o) const {
    if (is_zero() || o.is_zero()) return IntPolynomial();
    std::vector<Int> r(c_.size() + o.c_.size() - 1);
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == 0) continue;
      for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    }
    return IntPolynomial(std::move(r));
  }

  // Quotient and remainder against a divisor with leading coefficient +-1;
  // exact over Z in that case.
  std::pair<IntPolynomial, IntPolynomial> divmod_monic(const IntPolynomial& d) const {
    if (d.is_zero()) throw domain_error("polynomial division by zero");
    if (d.leading() != 1 && d.leading() != -1)
      throw precondition_error("divmod_monic: divisor leading coefficient is not a unit");
    std::vector<Int> rem = c_;
    std::vector<Int> quot(c_.size() > d.c_.size() ? c_.size() - d.c_.size() + 1 : 1);
    while (rem.size() >= d.c_.size() && !rem.empty()) {
      // strip top zeros
      if (rem.back() == 0) {
        rem.pop_back();
        continue;
      }
      std::size_t shift = rem.size() - d.c_.size();
      Int factor = d.leading() == 1 ? rem.back() : Int(-rem.back());
      quot[shift] = factor;
      for (std::size_t i = 0; i < d.c_.size(); ++i) rem[shift + i] -= factor * d.c_[i];
    }
    return {IntPolynomial(std::move(quot)), IntPolynomial(std::move(rem))};
  }

  // Pseudo-remainder: lc(d)^(deg f - deg d + 1) * f mod d, content-normalized.
  // Zero iff d divides f over Q; used for divisibility by non-monic divisors.
  IntPolynomial pseudo_remainder(const IntPolynomial& d) const {
    if (d.is_zero()) throw domain_error("polynomial division by zero");
    std::vector<Int> rem = c_;
    const Int& lc = d.leading();
    while (true) {
      while (!rem.empty() && rem.back() == 0) rem.pop_back();
      if (rem.size() < d.c_.size()) break;
      std::size_t shift = rem.size() - d.c_.size();
      Int top = rem.back();
      for (Int& x : rem) x *= lc;
      for (std::size_t i = 0; i < d.c_.size(); ++i) rem[shift + i] -= top * d.c_[i];
    }
    IntPolynomial r(std::move(rem));
    // content normalization keeps coefficients small across chained calls
    Int g = content(r.c_);
    if (g > 1)
      for (Int& x : r.c_) x /= g;
    return r;
  }

  bool divides(const IntPolynomial& f) const {
    if (is_zero()) return f.is_zero();
    return f.pseudo_remainder(*this).is_zero();
  }

  std::string pretty(const std::string& var = "x") const {
    if (is_zero()) return "0";
    std::string s;
    for (std::size_t d = c_.size(); d-- > 0;) {
      const Int& a = c_[d];
      if (a == 0) continue;
      if (!s.empty()) s += a > 0 ? " + " : " - ";
      else if (a < 0) s += "-";
      Int m = abs(a);
      bool show_coeff = (m != 1) || d == 0;
      if (show_coeff) s += m.get_str();
      if (d > 0) {
        if (show_coeff) s += "*";
        s += var;
        if (d > 1) s += "^" + std::to_string(d);
      }
    }
    return s;
  }

 private:
  void normalize() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<Int> c_;
};

// Monic characteristic polynomial det(xI - m) by the Faddeev-LeVerrier
// recurrence; every division is exact over Z.
inline IntPolynomial char_poly(const IntMatrix& m) {
  if (!m.is_square()) throw dimension_error("char_poly: matrix is not square");
  std::size_t n = m.rows();
  std::vector<Int> c(n + 1);
  c[n] = 1;
  IntMatrix acc = IntMatrix::identity(n);
  for (std::size_t i = 1; i <= n; ++i) {
    acc = m * acc;
    Int tr = 0;
    for (std::size_t j = 0; j < n; ++j) tr += acc.at(j, j);
    Int coeff;
    Int divisor(static_cast<long>(i));
    mpz_divexact(coeff.get_mpz_t(), tr.get_mpz_t(), divisor.get_mpz_t());
    coeff = -coeff;
    c[n - i] = coeff;
    for (std::size_t j = 0; j < n; ++j) acc.at(j, j) += coeff;
  }
  return IntPolynomial(std::move(c));
}

inline unsigned long euler_totient(unsigned long d) {
  unsigned long result = d;
  for (unsigned long p = 2; p * p <= d; ++p) {
    if (d % p == 0) {
      while (d % p == 0) d /= p;
      result -= result / p;
    }
  }
  if (d > 1) result -= result / d;
  return result;
}

// d-th cyclotomic polynomial, by exact division of x^d - 1 by the product of
// the cyclotomic polynomials of the proper divisors.
inline IntPolynomial cyclotomic_poly(unsigned long d) {
  if (d == 0) throw domain_error("cyclotomic_poly: d must be positive");
  std::map<unsigned long, IntPolynomial> memo;
  // Iterative bottom-up over divisors of d.
  std::vector<unsigned long> divs;
  for (unsigned long e = 1; e <= d; ++e)
    if (d % e == 0) divs.push_back(e);
  for (unsigned long e : divs) {
    IntPolynomial num = IntPolynomial::monomial(e) - IntPolynomial::from_coeffs({1});
    IntPolynomial den = IntPolynomial::from_coeffs({1});
    for (unsigned long f : divs) {
      if (f >= e || e % f != 0) continue;
      den = den * memo.at(f);
    }
    auto [q, r] = num.divmod_monic(den);
    if (!r.is_zero()) throw inconsistency_error("cyclotomic_poly: inexact division");
    memo.emplace(e, std::move(q));
  }
  return memo.at(d);
}

// All orders d whose primitive roots of unity can be eigenvalues of an s x s
// integer matrix, i.e. totient(d) <= s. Desk-scale table: s <= 16 gives
// d <= 60; larger sizes are rejected rather than risking an unbounded sweep.
inline std::vector<unsigned long> root_of_unity_orders(std::size_t s) {
  if (s == 0) throw domain_error("root_of_unity_orders: size must be positive");
  if (s > 16)
    throw out_of_scope_error(
        "root_of_unity_orders: matrix size > 16 is outside the precomputed totient table");
  std::vector<unsigned long> out;
  // totient(d) >= sqrt(d/2), so totient(d) <= 16 forces d <= 512.
  for (unsigned long d = 1; d <= 512; ++d)
    if (euler_totient(d) <= s) out.push_back(d);
  return out;
}

struct RootOfUnityVerdict {
  bool yes = false;
  unsigned long order = 0;  // smallest d with a primitive d-th root of unity eigenvalue
};

// Does m have an eigenvalue that is a root of unity? Tests divisibility of
// the characteristic polynomial by each candidate cyclotomic polynomial.
inline RootOfUnityVerdict has_root_of_unity_eigenvalue(const IntMatrix& m) {
  if (!m.is_square()) throw dimension_error("has_root_of_unity_eigenvalue: matrix not square");
  if (m.rows() == 0) return {false, 0};
  IntPolynomial cp = char_poly(m);
  for (unsigned long d : root_of_unity_orders(m.rows())) {
    if (cyclotomic_poly(d).divides(cp)) return {true, d};
  }
  return {false, 0};
}

}  // namespace toract
