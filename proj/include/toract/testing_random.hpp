#pragma once

// Deterministic random generators shared by tests and sampling-based
// verification (certificate checking). Everything is seeded explicitly.

#include <cstddef>

#include "toract/bigint.hpp"
#include "toract/int_matrix.hpp"

namespace toract::testing {

inline IntMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, long bound) {
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = rng.range(-bound, bound);
  return m;
}

// Random element of SL(n,Z) as a product of elementary transvections with
// small offsets; entry growth is kept in check by the entry_cap retry.
inline IntMatrix random_unimodular(Rng& rng, std::size_t n, int steps = 12,
                                   long coeff_bound = 2, long entry_cap = 1000000) {
  if (n == 0) return IntMatrix();
  if (n == 1) return IntMatrix::identity(1);
  while (true) {
    IntMatrix m = IntMatrix::identity(n);
    for (int s = 0; s < steps; ++s) {
      std::size_t i = static_cast<std::size_t>(rng.range(0, static_cast<long>(n) - 1));
      std::size_t j = static_cast<std::size_t>(rng.range(0, static_cast<long>(n) - 1));
      if (i == j) continue;
      long c = rng.range(-coeff_bound, coeff_bound);
      if (c == 0) continue;
      // row_i += c * row_j
      for (std::size_t t = 0; t < n; ++t) m.at(i, t) += Int(c) * m.at(j, t);
    }
    bool ok = true;
    for (std::size_t i = 0; ok && i < n; ++i)
      for (std::size_t j = 0; ok && j < n; ++j)
        if (abs(m.at(i, j)) > entry_cap) ok = false;
    if (ok) return m;
  }
}

inline Vec random_vector(Rng& rng, std::size_t n, long bound) {
  Vec v(n);
  for (Int& x : v) x = rng.range(-bound, bound);
  return v;
}

inline Vec random_primitive_vector(Rng& rng, std::size_t n, long bound) {
  while (true) {
    Vec v = random_vector(rng, n, bound);
    if (content(v) == 1) return v;
  }
}

}  // namespace toract::testing
