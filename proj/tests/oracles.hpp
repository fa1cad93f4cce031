// Test-side oracles, independent of the library's operator/jet machinery:
// plain truncated power-series arithmetic used to produce known-good jets.
#pragma once

#include <map>
#include <vector>

#include "rational.hpp"
#include "weyl.hpp"

namespace oracle {

using taut::Rational;
using Poly = std::map<std::vector<int>, Rational>;

inline int degree_of(const std::vector<int>& e) {
  int t = 0;
  for (int v : e) t += v;
  return t;
}

inline void poly_add(Poly& a, const std::vector<int>& e, const Rational& c) {
  if (c.is_zero()) return;
  auto it = a.find(e);
  if (it == a.end()) {
    a.emplace(e, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) a.erase(it);
  }
}

inline Poly poly_mul_trunc(const Poly& a, const Poly& b, int order) {
  Poly out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      std::vector<int> e(ea.size());
      int deg = 0;
      for (size_t i = 0; i < ea.size(); ++i) {
        e[i] = ea[i] + eb[i];
        deg += e[i];
      }
      if (deg > order) continue;
      poly_add(out, e, ca * cb);
    }
  return out;
}

/// Rational binomial coefficient C(alpha, k) for rational alpha.
inline Rational rational_binomial(const Rational& alpha, int k) {
  Rational r(1);
  for (int i = 0; i < k; ++i) r *= (alpha - Rational(i)) / Rational(i + 1);
  return r;
}

/// Jet of (c0 + delta)^alpha at a point where the polynomial `shifted`
/// (in centered coordinates, constant term c0) has rational c0^alpha given
/// by `lead`.  Uses the binomial series, truncated at `order`.
inline taut::weyl::Jet power_series_jet(int nvars, const std::vector<Rational>& base,
                                        const Poly& shifted, const Rational& alpha,
                                        const Rational& lead, int order) {
  std::vector<int> zero(nvars, 0);
  Rational c0 = shifted.count(zero) ? shifted.at(zero) : Rational(0);
  Poly delta = shifted;
  delta.erase(zero);

  Poly acc;  // (1 + delta/c0)^alpha
  poly_add(acc, zero, Rational(1));
  Poly delta_pow;
  poly_add(delta_pow, zero, Rational(1));
  for (int k = 1; k <= order; ++k) {
    delta_pow = poly_mul_trunc(delta_pow, delta, order);
    if (delta_pow.empty()) break;
    Rational coef = rational_binomial(alpha, k) / c0.pow(k);
    for (const auto& [e, c] : delta_pow) poly_add(acc, e, coef * c);
  }
  taut::weyl::Jet j;
  j.num_vars = nvars;
  j.order = order;
  j.base = base;
  for (const auto& [e, c] : acc) j.set(e, lead * c);
  return j;
}

/// Order-N jet of (a1^2 - 4 a0 a2)^alpha at a base point with positive
/// square discriminant (lead = disc(base)^alpha must be rational).
inline taut::weyl::Jet discriminant_power_jet(const std::vector<Rational>& base,
                                              const Rational& alpha, const Rational& lead,
                                              int order) {
  // D(base + t) as a polynomial in t
  Poly d;
  auto E = [](int a, int b, int c) { return std::vector<int>{a, b, c}; };
  const Rational b0 = base[0], b1 = base[1], b2 = base[2];
  poly_add(d, E(0, 0, 0), b1 * b1 - Rational(4) * b0 * b2);
  poly_add(d, E(0, 1, 0), Rational(2) * b1);
  poly_add(d, E(0, 2, 0), Rational(1));
  poly_add(d, E(1, 0, 0), Rational(-4) * b2);
  poly_add(d, E(0, 0, 1), Rational(-4) * b0);
  poly_add(d, E(1, 0, 1), Rational(-4));
  return power_series_jet(3, base, d, alpha, lead, order);
}

}  // namespace oracle
