#include "weyl.hpp"

#include <sstream>

namespace taut::weyl {

void WeylOperator::add_term(const Expo& xexp, const Expo& dexp, const Rational& c) {
  if (static_cast<int>(xexp.size()) != n_ || static_cast<int>(dexp.size()) != n_)
    throw DimensionMismatch("WeylOperator term has wrong variable count");
  if (c.is_zero()) return;
  Key k{xexp, dexp};
  auto it = terms_.find(k);
  if (it == terms_.end()) {
    terms_.emplace(std::move(k), c);
  } else {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

int WeylOperator::max_d_order() const {
  int m = 0;
  for (const auto& [k, c] : terms_) m = std::max(m, total_degree(k.second));
  return m;
}

int WeylOperator::max_x_degree() const {
  int m = 0;
  for (const auto& [k, c] : terms_) m = std::max(m, total_degree(k.first));
  return m;
}

WeylOperator WeylOperator::operator-() const {
  WeylOperator r(n_);
  for (const auto& [k, c] : terms_) r.terms_.emplace(k, -c);
  return r;
}

WeylOperator& WeylOperator::operator+=(const WeylOperator& o) {
  if (n_ != o.n_) throw DimensionMismatch("operator+: variable counts differ");
  for (const auto& [k, c] : o.terms_) add_term(k.first, k.second, c);
  return *this;
}

WeylOperator& WeylOperator::operator-=(const WeylOperator& o) {
  if (n_ != o.n_) throw DimensionMismatch("operator-: variable counts differ");
  for (const auto& [k, c] : o.terms_) add_term(k.first, k.second, -c);
  return *this;
}

WeylOperator operator*(const Rational& c, const WeylOperator& o) {
  WeylOperator r(o.n_);
  if (c.is_zero()) return r;
  for (const auto& [k, v] : o.terms_) r.terms_.emplace(k, c * v);
  return r;
}

namespace {

// Iterates all k with 0 <= k <= bound componentwise.
bool next_in_box(Expo& k, const Expo& bound) {
  for (size_t i = 0; i < k.size(); ++i) {
    if (k[i] < bound[i]) {
      ++k[i];
      for (size_t j = 0; j < i; ++j) k[j] = 0;
      return true;
    }
  }
  return false;
}

Expo min_expo(const Expo& a, const Expo& b) {
  Expo m(a.size());
  for (size_t i = 0; i < a.size(); ++i) m[i] = std::min(a[i], b[i]);
  return m;
}

// Product over variables of C(b_i,k_i) * C(c_i,k_i) * k_i!   (Leibniz weight)
Rational leibniz_weight(const Expo& b, const Expo& c, const Expo& k) {
  Rational w(1);
  for (size_t i = 0; i < k.size(); ++i) {
    if (k[i] == 0) continue;
    w *= binomial(b[i], k[i]) * binomial(c[i], k[i]) * factorial(k[i]);
  }
  return w;
}

void expo_to_stream(std::ostringstream& os, const Expo& e) {
  os << '[';
  for (size_t i = 0; i < e.size(); ++i) {
    if (i) os << ',';
    os << e[i];
  }
  os << ']';
}

Expo parse_expo(const std::string& s, size_t& pos, int n) {
  if (pos >= s.size() || s[pos] != '[') throw std::invalid_argument("weyl parse: expected '['");
  ++pos;
  Expo e;
  while (pos < s.size() && s[pos] != ']') {
    size_t next = pos;
    while (next < s.size() && s[next] != ',' && s[next] != ']') ++next;
    e.push_back(std::stoi(s.substr(pos, next - pos)));
    pos = next;
    if (pos < s.size() && s[pos] == ',') ++pos;
  }
  if (pos >= s.size()) throw std::invalid_argument("weyl parse: unterminated exponent vector");
  ++pos;  // ']'
  if (static_cast<int>(e.size()) != n)
    throw DimensionMismatch("weyl parse: exponent vector length mismatch");
  return e;
}

}  // namespace

WeylOperator weyl_mul(const WeylOperator& a, const WeylOperator& b) {
  if (a.num_vars() != b.num_vars())
    throw DimensionMismatch("weyl_mul: variable counts differ");
  const int n = a.num_vars();
  WeylOperator out(n);
  for (const auto& [ka, ca] : a.terms()) {
    const Expo& alpha = ka.first;
    const Expo& beta = ka.second;
    for (const auto& [kb, cb] : b.terms()) {
      const Expo& gamma = kb.first;
      const Expo& delta = kb.second;
      // x^alpha d^beta x^gamma d^delta
      //   = sum_k C(beta,k) C(gamma,k) k! x^(alpha+gamma-k) d^(beta+delta-k)
      Expo bound = min_expo(beta, gamma);
      Expo k(n, 0);
      do {
        Rational w = ca * cb * leibniz_weight(beta, gamma, k);
        Expo xe(n), de(n);
        for (int i = 0; i < n; ++i) {
          xe[i] = alpha[i] + gamma[i] - k[i];
          de[i] = beta[i] + delta[i] - k[i];
        }
        out.add_term(xe, de, w);
      } while (next_in_box(k, bound));
    }
  }
  return out;
}

WeylOperator fourier(const WeylOperator& a) {
  const int n = a.num_vars();
  WeylOperator out(n);
  for (const auto& [key, c] : a.terms()) {
    const Expo& alpha = key.first;
    const Expo& beta = key.second;
    // x^alpha d^beta  |->  (-1)^|alpha| d^alpha x^beta, then normal-order:
    // d^a x^b = sum_k C(a,k) C(b,k) k! x^(b-k) d^(a-k)
    Rational sign = (total_degree(alpha) % 2 == 0) ? Rational(1) : Rational(-1);
    Expo bound = min_expo(alpha, beta);
    Expo k(n, 0);
    do {
      Rational w = c * sign * leibniz_weight(alpha, beta, k);
      Expo xe(n), de(n);
      for (int i = 0; i < n; ++i) {
        xe[i] = beta[i] - k[i];
        de[i] = alpha[i] - k[i];
      }
      out.add_term(xe, de, w);
    } while (next_in_box(k, bound));
  }
  return out;
}

std::string WeylOperator::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << c.str() << " * x^";
    expo_to_stream(os, k.first);
    os << " * d^";
    expo_to_stream(os, k.second);
  }
  return os.str();
}

WeylOperator WeylOperator::parse(const std::string& s, int num_vars) {
  WeylOperator out(num_vars);
  if (s == "0") return out;
  size_t pos = 0;
  while (pos < s.size()) {
    size_t star = s.find(" * x^", pos);
    if (star == std::string::npos) throw std::invalid_argument("weyl parse: missing ' * x^'");
    Rational c = Rational::from_string(s.substr(pos, star - pos));
    pos = star + 5;
    Expo xe = parse_expo(s, pos, num_vars);
    if (s.compare(pos, 5, " * d^") != 0) throw std::invalid_argument("weyl parse: missing ' * d^'");
    pos += 5;
    Expo de = parse_expo(s, pos, num_vars);
    out.add_term(xe, de, c);
    if (pos < s.size()) {
      if (s.compare(pos, 3, " + ") != 0) throw std::invalid_argument("weyl parse: missing ' + '");
      pos += 3;
    }
  }
  return out;
}

Jet apply_to_jet(const WeylOperator& a, const Jet& j) {
  if (a.num_vars() != j.num_vars)
    throw DimensionMismatch("apply_to_jet: variable counts differ");
  const int n = j.num_vars;
  Jet out;
  out.num_vars = n;
  out.base = j.base;
  out.order = j.order - a.max_d_order();
  if (out.order < -1) out.order = -1;
  if (out.order < 0) return out;

  for (const auto& [key, c] : a.terms()) {
    const Expo& alpha = key.first;
    const Expo& beta = key.second;
    // d^beta pass: correct up to degree j.order - |beta|
    std::map<Expo, Rational> diff;
    for (const auto& [m, v] : j.coef) {
      Expo t(n);
      bool ok = true;
      Rational fall(1);
      for (int i = 0; i < n; ++i) {
        t[i] = m[i] - beta[i];
        if (t[i] < 0) { ok = false; break; }
        for (int s = 0; s < beta[i]; ++s) fall *= Rational(m[i] - s);
      }
      if (!ok) continue;
      diff[t] = v * fall;
    }
    // multiply by prod_i (base_i + t_i)^alpha_i, truncated at out.order
    Expo sub(n, 0);
    do {
      Rational w = c;
      for (int i = 0; i < n; ++i) {
        if (alpha[i] == 0) continue;
        w *= binomial(alpha[i], sub[i]) * j.base[i].pow(alpha[i] - sub[i]);
      }
      if (w.is_zero()) continue;
      for (const auto& [m, v] : diff) {
        Expo t(n);
        int deg = 0;
        for (int i = 0; i < n; ++i) {
          t[i] = m[i] + sub[i];
          deg += t[i];
        }
        if (deg > out.order) continue;
        out.set(t, out.get(t) + w * v);
      }
    } while (next_in_box(sub, alpha));
  }
  return out;
}

}  // namespace taut::weyl
