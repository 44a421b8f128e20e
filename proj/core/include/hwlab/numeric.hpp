#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace hwlab {

using Int = boost::multiprecision::cpp_int;

// x mod m normalized into [0, m), m > 0.
inline Int modnorm(Int x, const Int& m) {
  x %= m;
  if (x < 0) x += m;
  return x;
}

inline std::int64_t modnorm64(std::int64_t x, std::int64_t m) {
  x %= m;
  if (x < 0) x += m;
  return x;
}

inline Int ipow(Int b, unsigned e) {
  Int r = 1;
  while (e) {
    if (e & 1u) r *= b;
    b *= b;
    e >>= 1u;
  }
  return r;
}

inline std::int64_t ipow64(std::int64_t b, unsigned e) {
  std::int64_t r = 1;
  for (unsigned i = 0; i < e; ++i) {
    if (b != 0 && (r > INT64_MAX / (b < 0 ? -b : b))) throw std::overflow_error("ipow64 overflow");
    r *= b;
  }
  return r;
}

inline Int modpow(Int b, Int e, const Int& m) {
  Int r = 1;
  b = modnorm(std::move(b), m);
  while (e > 0) {
    if ((e & 1) != 0) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return r;
}

// Inverse of a mod m for gcd(a, m) = 1.
inline Int modinv(const Int& a, const Int& m) {
  Int old_r = modnorm(a, m), r = m;
  Int old_s = 1, s = 0;
  while (r != 0) {
    Int q = old_r / r;
    Int tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
  }
  if (old_r != 1) throw std::domain_error("modinv: not invertible");
  return modnorm(old_s, m);
}

inline std::int64_t modinv64(std::int64_t a, std::int64_t m) {
  return static_cast<std::int64_t>(modinv(Int(a), Int(m)));
}

// Exact division; throws IntegralityFailure-style error when remainder is nonzero.
inline Int divexact(const Int& a, const Int& b) {
  Int q = a / b, r = a % b;
  if (r != 0) throw std::domain_error("IntegralityFailure: exact division has remainder");
  return q;
}

// p-adic valuation of n != 0; returns {val, unit part}.
inline std::pair<unsigned, Int> pval(Int n, const Int& p) {
  if (n == 0) throw std::domain_error("pval of zero");
  unsigned v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return {v, n};
}

// Deterministic RNG facade used across the library so seeded runs reproduce.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  // Uniform in [0, n).
  std::int64_t below(std::int64_t n) {
    return static_cast<std::int64_t>(std::uniform_int_distribution<std::uint64_t>(
        0, static_cast<std::uint64_t>(n) - 1)(eng_));
  }
  std::int64_t range(std::int64_t lo, std::int64_t hi) {  // inclusive
    return lo + below(hi - lo + 1);
  }
  bool coin() { return below(2) == 1; }

 private:
  std::mt19937_64 eng_;
};

inline unsigned smallest_primitive_root(unsigned p) {
  if (p == 2) return 1;
  auto ord_is_full = [&](unsigned g) {
    unsigned m = p - 1;
    // Check g^((p-1)/q) != 1 for each prime q | p-1.
    std::vector<unsigned> qs;
    unsigned t = m;
    for (unsigned q = 2; q * q <= t; ++q)
      if (t % q == 0) {
        qs.push_back(q);
        while (t % q == 0) t /= q;
      }
    if (t > 1) qs.push_back(t);
    for (unsigned q : qs)
      if (modpow(g, (p - 1) / q, p) == 1) return false;
    return true;
  };
  for (unsigned g = 2; g < p; ++g)
    if (ord_is_full(g)) return g;
  throw std::logic_error("no primitive root");
}

}  // namespace hwlab
