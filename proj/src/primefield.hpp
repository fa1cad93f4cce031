#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

#include "rational.hpp"

namespace taut {

namespace detail {
inline uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>((static_cast<__uint128_t>(a) * b) % m);
}
inline uint64_t powmod_u64(uint64_t a, uint64_t e, uint64_t m) {
  uint64_t r = 1 % m;
  a %= m;
  while (e > 0) {
    if (e & 1) r = mulmod_u64(r, a, m);
    a = mulmod_u64(a, a, m);
    e >>= 1;
  }
  return r;
}
}  // namespace detail

/// Deterministic Miller-Rabin for 64-bit inputs.
inline bool is_prime_u64(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) { d >>= 1; ++s; }
  for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    uint64_t x = detail::powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 0; i < s - 1; ++i) {
      x = detail::mulmod_u64(x, x, n);
      if (x == n - 1) { composite = false; break; }
    }
    if (composite) return false;
  }
  return true;
}

/// Random prime in [2^61, 2^62). Deterministic for a fixed seed.
inline uint64_t random_prime_62(uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<uint64_t> dist(1ull << 61, (1ull << 62) - 1);
  for (;;) {
    uint64_t c = dist(rng) | 1;
    if (is_prime_u64(c)) return c;
  }
}

struct BadPrime : std::runtime_error {
  explicit BadPrime(const std::string& what) : std::runtime_error(what) {}
};

/// Element of F_p for a 62-bit prime p. Carries its modulus so values from
/// different fields cannot be mixed silently.
class Fp64 {
public:
  Fp64() : v_(0), p_(0) {}
  Fp64(uint64_t v, uint64_t p) : v_(v % p), p_(p) {}

  static Fp64 zero(uint64_t p) { return Fp64(0, p); }
  static Fp64 one(uint64_t p) { return Fp64(1, p); }

  /// Image of an exact rational; BadPrime when p divides the denominator.
  static Fp64 from_rational(const Rational& q, uint64_t p) {
    mpz_class num = q.num() % p;
    if (num < 0) num += p;
    mpz_class den = q.den() % p;
    if (den == 0) throw BadPrime("denominator divisible by p");
    uint64_t n = num.get_ui();
    uint64_t d = den.get_ui();
    Fp64 r(n, p);
    return r * Fp64(d, p).inv();
  }

  uint64_t value() const { return v_; }
  uint64_t modulus() const { return p_; }
  bool is_zero() const { return v_ == 0; }
  bool is_one() const { return v_ == 1; }

  Fp64 operator-() const { return Fp64(v_ == 0 ? 0 : p_ - v_, p_); }
  Fp64& operator+=(const Fp64& o) {
    check(o);
    v_ += o.v_;
    if (v_ >= p_) v_ -= p_;
    return *this;
  }
  Fp64& operator-=(const Fp64& o) {
    check(o);
    v_ = (v_ >= o.v_) ? v_ - o.v_ : v_ + p_ - o.v_;
    return *this;
  }
  Fp64& operator*=(const Fp64& o) {
    check(o);
    v_ = detail::mulmod_u64(v_, o.v_, p_);
    return *this;
  }
  Fp64& operator/=(const Fp64& o) { return *this *= o.inv(); }

  friend Fp64 operator+(Fp64 a, const Fp64& b) { return a += b; }
  friend Fp64 operator-(Fp64 a, const Fp64& b) { return a -= b; }
  friend Fp64 operator*(Fp64 a, const Fp64& b) { return a *= b; }
  friend Fp64 operator/(Fp64 a, const Fp64& b) { return a /= b; }
  friend bool operator==(const Fp64& a, const Fp64& b) { return a.v_ == b.v_ && a.p_ == b.p_; }
  friend bool operator!=(const Fp64& a, const Fp64& b) { return !(a == b); }

  Fp64 inv() const {
    if (v_ == 0) throw std::domain_error("Fp64: inverse of zero");
    return Fp64(detail::powmod_u64(v_, p_ - 2, p_), p_);
  }

private:
  void check(const Fp64& o) const {
    if (p_ != o.p_) throw std::logic_error("Fp64: mixed moduli");
  }
  uint64_t v_;
  uint64_t p_;
};

}  // namespace taut
