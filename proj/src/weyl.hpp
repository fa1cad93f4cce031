#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rational.hpp"

namespace taut::weyl {

/// Exponent vector; one entry per variable.
using Expo = std::vector<int>;

inline int total_degree(const Expo& e) {
  int t = 0;
  for (int v : e) t += v;
  return t;
}

struct DimensionMismatch : std::invalid_argument {
  explicit DimensionMismatch(const std::string& what) : std::invalid_argument(what) {}
};

/// Element of the Weyl algebra Q<x_1..x_r, d_1..d_r>, stored in normal order
/// (all x's to the left of all d's). Keys are (x-exponent, d-exponent); no
/// zero coefficients are kept.
class WeylOperator {
public:
  using Key = std::pair<Expo, Expo>;
  using TermMap = std::map<Key, Rational>;

  explicit WeylOperator(int num_vars) : n_(num_vars) {}

  static WeylOperator zero(int n) { return WeylOperator(n); }
  static WeylOperator constant(int n, const Rational& c) {
    WeylOperator w(n);
    w.add_term(Expo(n, 0), Expo(n, 0), c);
    return w;
  }
  static WeylOperator coordinate(int n, int i) {
    WeylOperator w(n);
    Expo x(n, 0);
    x[i] = 1;
    w.add_term(x, Expo(n, 0), Rational(1));
    return w;
  }
  static WeylOperator derivative(int n, int i) {
    WeylOperator w(n);
    Expo d(n, 0);
    d[i] = 1;
    w.add_term(Expo(n, 0), d, Rational(1));
    return w;
  }

  int num_vars() const { return n_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Expo& xexp, const Expo& dexp, const Rational& c);

  /// max over terms of |d-exponent|; 0 for the zero operator.
  int max_d_order() const;
  int max_x_degree() const;

  WeylOperator operator-() const;
  WeylOperator& operator+=(const WeylOperator& o);
  WeylOperator& operator-=(const WeylOperator& o);
  friend WeylOperator operator+(WeylOperator a, const WeylOperator& b) { return a += b; }
  friend WeylOperator operator-(WeylOperator a, const WeylOperator& b) { return a -= b; }
  friend WeylOperator operator*(const Rational& c, const WeylOperator& o);
  friend bool operator==(const WeylOperator& a, const WeylOperator& b) {
    return a.n_ == b.n_ && a.terms_ == b.terms_;
  }

  /// Text form "c * x^[a,..] * d^[b,..] + ...", terms in canonical map order.
  /// Zero prints as "0". Round-trips exactly through parse().
  std::string str() const;
  static WeylOperator parse(const std::string& s, int num_vars);

private:
  int n_;
  TermMap terms_;
};

/// Normally ordered product, via the Leibniz expansion of d^b x^c.
WeylOperator weyl_mul(const WeylOperator& a, const WeylOperator& b);

inline WeylOperator commutator(const WeylOperator& a, const WeylOperator& b) {
  return weyl_mul(a, b) - weyl_mul(b, a);
}

/// Ring homomorphism x_i -> -d_i, d_i -> x_i, applied to each normally
/// ordered term as a product of generators and then renormalized.
WeylOperator fourier(const WeylOperator& a);

/// Truncated Taylor expansion at a rational base point. Coefficients are
/// indexed by exponents in coordinates centered at the base point; only
/// total degrees <= order are meaningful. order == -1 means "no guaranteed
/// coefficients".
struct Jet {
  int num_vars = 0;
  int order = -1;
  std::vector<Rational> base;
  std::map<Expo, Rational> coef;

  static Jet zero(int num_vars, int order, std::vector<Rational> base) {
    Jet j;
    j.num_vars = num_vars;
    j.order = order;
    j.base = std::move(base);
    return j;
  }

  void set(const Expo& e, const Rational& c) {
    if (c.is_zero()) coef.erase(e);
    else coef[e] = c;
  }
  Rational get(const Expo& e) const {
    auto it = coef.find(e);
    return it == coef.end() ? Rational(0) : it->second;
  }
  bool is_zero() const { return coef.empty(); }
};

/// A applied to the germ represented by j. The result is guaranteed correct
/// up to order j.order - max_d_order(A); differentiation and the polynomial
/// coefficients x^a act in coordinates centered at j.base.
Jet apply_to_jet(const WeylOperator& a, const Jet& j);

}  // namespace taut::weyl
