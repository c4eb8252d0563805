#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "toract/bigint.hpp"
#include "toract/errors.hpp"

namespace toract {

// Dense matrix over arbitrary-precision integers, row-major. The 0x0 matrix
// is a valid degenerate value (empty block of a k=0 construction); its
// determinant is 1 by the usual convention.
class IntMatrix {
 public:
  IntMatrix() : rows_(0), cols_(0) {}
  IntMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols) {}

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  static IntMatrix from_rows(std::initializer_list<std::initializer_list<long>> rows) {
    std::size_t r = rows.size();
    std::size_t c = r == 0 ? 0 : rows.begin()->size();
    IntMatrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != c) throw dimension_error("from_rows: ragged row lengths");
      std::size_t j = 0;
      for (long x : row) m.at(i, j++) = x;
      ++i;
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Int& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Int& at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  bool operator==(const IntMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }
  bool operator!=(const IntMatrix& o) const { return !(*this == o); }

  bool is_zero() const {
    for (const Int& x : a_)
      if (x != 0) return false;
    return true;
  }

  bool is_identity() const {
    if (!is_square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (at(i, j) != (i == j ? 1 : 0)) return false;
    return true;
  }

  IntMatrix transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
  }

  IntMatrix operator*(const IntMatrix& o) const {
    if (cols_ != o.rows_) throw dimension_error("matrix product: inner dimensions differ");
    IntMatrix p(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const Int& aik = at(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) {
          if (o.at(k, j) == 0) continue;
          p.at(i, j) += aik * o.at(k, j);
        }
      }
    return p;
  }

  IntMatrix operator+(const IntMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw dimension_error("matrix sum: shapes differ");
    IntMatrix s(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) s.a_[i] = a_[i] + o.a_[i];
    return s;
  }

  IntMatrix operator-(const IntMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw dimension_error("matrix difference: shapes differ");
    IntMatrix s(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) s.a_[i] = a_[i] - o.a_[i];
    return s;
  }

  IntMatrix operator-() const {
    IntMatrix s(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) s.a_[i] = -a_[i];
    return s;
  }

  Vec apply(const Vec& v) const {
    if (v.size() != cols_) throw dimension_error("matrix apply: vector length mismatch");
    Vec r(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (at(i, j) != 0) r[i] += at(i, j) * v[j];
    return r;
  }

  std::string encode() const {
    std::string s;
    s.reserve(a_.size() * 4);
    for (const Int& x : a_) {
      s += x.get_str();
      s += ',';
    }
    return s;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<Int> a_;
};

// Exact determinant by Bareiss fraction-free elimination. All intermediate
// divisions are exact, no rationals appear.
inline Int det(IntMatrix m) {
  if (!m.is_square()) throw dimension_error("det: matrix is not square");
  std::size_t n = m.rows();
  if (n == 0) return 1;
  Int prev = 1;
  int sign = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m.at(p, c) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m.at(p, j), m.at(c, j));
      sign = -sign;
    }
    for (std::size_t i = c + 1; i < n; ++i) {
      for (std::size_t j = c + 1; j < n; ++j) {
        Int num = m.at(c, c) * m.at(i, j) - m.at(i, c) * m.at(c, j);
        mpz_divexact(m.at(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
      }
      m.at(i, c) = 0;
    }
    prev = m.at(c, c);
  }
  return sign < 0 ? Int(-prev) : prev;
}

// Rank over the rationals, same elimination with column skips.
inline std::size_t rank(IntMatrix m) {
  std::size_t n = m.rows(), w = m.cols();
  std::size_t r = 0;
  Int prev = 1;
  for (std::size_t c = 0; c < w && r < n; ++c) {
    std::size_t p = r;
    while (p < n && m.at(p, c) == 0) ++p;
    if (p == n) continue;
    if (p != r)
      for (std::size_t j = 0; j < w; ++j) std::swap(m.at(p, j), m.at(r, j));
    for (std::size_t i = r + 1; i < n; ++i) {
      for (std::size_t j = c + 1; j < w; ++j) {
        Int num = m.at(r, c) * m.at(i, j) - m.at(i, c) * m.at(r, j);
        mpz_divexact(m.at(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
      }
      m.at(i, c) = 0;
    }
    prev = m.at(r, c);
    ++r;
  }
  return r;
}

// Dimension of the rational null space.
inline std::size_t kernel_rank_over_rationals(const IntMatrix& m) {
  return m.cols() - rank(m);
}

// Integer basis of the rational kernel. Reduces [m^T | I] by unimodular row
// operations; rows whose left part vanishes carry kernel vectors on the
// right. Each basis vector is returned in primitive form, and the basis size
// equals the rational nullity.
inline std::vector<Vec> integer_kernel_basis(const IntMatrix& m) {
  std::size_t r = m.rows(), c = m.cols();
  // Augmented rows: (column i of m)^T | e_i, for i = 0..c-1.
  std::vector<Vec> left(c, Vec(r)), right(c, Vec(c));
  for (std::size_t i = 0; i < c; ++i) {
    for (std::size_t j = 0; j < r; ++j) left[i][j] = m.at(j, i);
    right[i][i] = 1;
  }
  std::size_t pivot_row = 0;
  for (std::size_t col = 0; col < r && pivot_row < c; ++col) {
    // Euclidean reduction of this column among rows >= pivot_row.
    while (true) {
      std::size_t best = c;
      for (std::size_t i = pivot_row; i < c; ++i) {
        if (left[i][col] == 0) continue;
        if (best == c || abs(left[i][col]) < abs(left[best][col])) best = i;
      }
      if (best == c) break;
      std::swap(left[best], left[pivot_row]);
      std::swap(right[best], right[pivot_row]);
      bool done = true;
      for (std::size_t i = pivot_row + 1; i < c; ++i) {
        if (left[i][col] == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), left[i][col].get_mpz_t(), left[pivot_row][col].get_mpz_t());
        for (std::size_t j = 0; j < r; ++j) left[i][j] -= q * left[pivot_row][j];
        for (std::size_t j = 0; j < c; ++j) right[i][j] -= q * right[pivot_row][j];
        if (left[i][col] != 0) done = false;
      }
      if (done) break;
    }
    if (left[pivot_row][col] != 0) ++pivot_row;
  }
  std::vector<Vec> basis;
  for (std::size_t i = 0; i < c; ++i)
    if (is_zero_vec(left[i])) basis.push_back(primitive_part(right[i]));
  return basis;
}

// Exact inverse of a matrix with determinant +-1, via the adjugate.
inline IntMatrix inverse_unimodular(const IntMatrix& m) {
  if (!m.is_square()) throw dimension_error("inverse: matrix is not square");
  std::size_t n = m.rows();
  if (n == 0) return m;
  Int d = det(m);
  if (d != 1 && d != -1)
    throw precondition_error("inverse: matrix is not unimodular (det = " + d.get_str() + ")");
  IntMatrix inv(n, n);
  if (n == 1) {
    inv.at(0, 0) = d;
    return inv;
  }
  IntMatrix minor(n - 1, n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t a = 0, ai = 0; a < n; ++a) {
        if (a == i) continue;
        for (std::size_t b = 0, bj = 0; b < n; ++b) {
          if (b == j) continue;
          minor.at(ai, bj) = m.at(a, b);
          ++bj;
        }
        ++ai;
      }
      Int cof = det(minor);
      if ((i + j) % 2 == 1) cof = -cof;
      inv.at(j, i) = d == 1 ? cof : Int(-cof);
    }
  }
  return inv;
}

// m^e for signed exponents; negative exponents require |det| = 1.
inline IntMatrix pow(const IntMatrix& m, long e) {
  if (!m.is_square()) throw dimension_error("pow: matrix is not square");
  IntMatrix base = e < 0 ? inverse_unimodular(m) : m;
  unsigned long k = e < 0 ? static_cast<unsigned long>(-(e + 1)) + 1 : static_cast<unsigned long>(e);
  IntMatrix acc = IntMatrix::identity(m.rows());
  while (k) {
    if (k & 1) acc = acc * base;
    base = base * base;
    k >>= 1;
  }
  return acc;
}

// Completes a primitive vector w to a matrix A with det A = 1 and A e_1 = w.
// Row-reduces w to e_1 by elementary operations while accumulating their
// inverses as column operations on A, then repairs the sign on a column
// other than the first.
inline IntMatrix unimodular_completion(const Vec& w) {
  std::size_t n = w.size();
  if (n == 0) throw dimension_error("unimodular_completion: empty vector");
  Int g = content(w);
  if (g != 1)
    throw precondition_error("unimodular_completion: vector is not primitive (gcd = " +
                             g.get_str() + ")");
  IntMatrix a = IntMatrix::identity(n);
  Vec u = w;
  int sign = 1;
  // Invariant: a * u == w throughout.
  while (true) {
    std::size_t best = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (u[i] == 0) continue;
      if (best == n || abs(u[i]) < abs(u[best])) best = i;
    }
    if (best != 0) {
      // swap u[0] <-> u[best]; mirror as column swap on a.
      std::swap(u[0], u[best]);
      for (std::size_t r = 0; r < n; ++r) std::swap(a.at(r, 0), a.at(r, best));
      sign = -sign;
    }
    bool reduced = true;
    for (std::size_t i = 1; i < n; ++i) {
      if (u[i] == 0) continue;
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), u[i].get_mpz_t(), u[0].get_mpz_t());
      // u[i] -= q*u[0]; inverse column op: col_0 += q * col_i.
      u[i] -= q * u[0];
      for (std::size_t r = 0; r < n; ++r) a.at(r, 0) += q * a.at(r, i);
      if (u[i] != 0) reduced = false;
    }
    if (reduced) break;
  }
  if (u[0] < 0) {
    u[0] = -u[0];
    for (std::size_t r = 0; r < n; ++r) a.at(r, 0) = -a.at(r, 0);
    sign = -sign;
  }
  // u is now e_1 (gcd was 1), so a * e_1 = w already holds.
  if (sign < 0) {
    if (n == 1)
      throw precondition_error("unimodular_completion: no det 1 completion in dimension 1");
    for (std::size_t r = 0; r < n; ++r) a.at(r, 1) = -a.at(r, 1);
  }
  return a;
}

}  // namespace toract
