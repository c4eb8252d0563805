#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace toract {

// Exact arbitrary-precision integers and rationals. All verdict-producing
// arithmetic in this library runs on these types; doubles appear only in the
// spectral / witness evidence layer.
using Int = mpz_class;
using Rat = mpq_class;
using Vec = std::vector<Int>;

inline Int gcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Int abs(const Int& a) {
  Int r;
  mpz_abs(r.get_mpz_t(), a.get_mpz_t());
  return r;
}

// gcd of all entries; 0 for the empty or zero vector.
inline Int content(const Vec& v) {
  Int g = 0;
  for (const Int& x : v) g = gcd(g, x);
  return g;
}

inline bool is_zero_vec(const Vec& v) {
  for (const Int& x : v)
    if (x != 0) return false;
  return true;
}

inline bool is_primitive(const Vec& v) { return content(v) == 1; }

// Divides out the content and fixes the sign so the first nonzero entry is
// positive. Canonical representative of the rational line through v.
inline Vec primitive_part(Vec v) {
  Int g = content(v);
  if (g == 0) return v;
  for (Int& x : v) x /= g;
  for (const Int& x : v) {
    if (x != 0) {
      if (x < 0)
        for (Int& y : v) y = -y;
      break;
    }
  }
  return v;
}

// Canonical byte encoding of a vector, used as set/map key. Decimal digits
// are unique per value, so the encoding is injective.
inline std::string encode_vec(const Vec& v) {
  std::string s;
  s.reserve(v.size() * 4);
  for (const Int& x : v) {
    s += x.get_str();
    s += ',';
  }
  return s;
}

inline std::string to_string(const Int& x) { return x.get_str(); }

// Deterministic RNG with a portable bounded-draw (uniform_int_distribution is
// implementation-defined; we avoid it so seeded runs are reproducible).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform integer in [lo, hi], inclusive.
  long range(long lo, long hi) {
    std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t r;
    do {
      r = eng_();
    } while (r >= limit);
    return lo + static_cast<long>(r % span);
  }

  double unit() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace toract
