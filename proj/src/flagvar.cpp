#include "flagvar.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "json.hpp"

namespace taut::flag {

FlagShape::FlagShape(std::vector<int> d, int ambient) : dims(std::move(d)), n(ambient) {
  if (dims.empty()) throw ShapeMismatch("FlagShape: empty dims");
  int prev = 0;
  for (int di : dims) {
    if (di <= prev) throw ShapeMismatch("FlagShape: dims must be strictly increasing and positive");
    prev = di;
  }
  if (prev >= n) throw ShapeMismatch("FlagShape: d_r must be < n");
}

FlagShape FlagShape::dual() const {
  std::vector<int> d;
  for (int i = steps() - 1; i >= 0; --i) d.push_back(n - dims[i]);
  return FlagShape(d, n);
}

std::string FlagShape::str() const {
  std::ostringstream os;
  os << "F(";
  for (int d : dims) os << d << ",";
  os << n << ")";
  return os.str();
}

std::vector<int> anticanonical_multidegree(const FlagShape& shape) {
  std::vector<int> deg(shape.steps());
  for (int i = 1; i <= shape.steps(); ++i)
    deg[i - 1] = shape.dim_at(i + 1) - shape.dim_at(i - 1);
  return deg;
}

std::pair<PluckerIndex, int> PluckerIndex::from_unordered(int step, std::vector<int> e) {
  int sign = 1;
  // insertion sort, counting transpositions
  for (size_t i = 1; i < e.size(); ++i) {
    int v = e[i];
    size_t j = i;
    while (j > 0 && e[j - 1] > v) {
      e[j] = e[j - 1];
      --j;
      sign = -sign;
    }
    e[j] = v;
  }
  for (size_t i = 1; i < e.size(); ++i)
    if (e[i] == e[i - 1]) return {PluckerIndex(step, std::move(e)), 0};
  return {PluckerIndex(step, std::move(e)), sign};
}

std::string PluckerIndex::str() const {
  std::ostringstream os;
  os << "x[" << step << ";";
  for (size_t i = 0; i < entries.size(); ++i) {
    if (i) os << ",";
    os << entries[i];
  }
  os << "]";
  return os.str();
}

PluckerMonomial sorted_monomial(PluckerMonomial m) {
  std::sort(m.begin(), m.end());
  return m;
}

std::vector<int> monomial_multidegree(const PluckerMonomial& m, int steps) {
  std::vector<int> deg(steps, 0);
  for (const auto& idx : m) ++deg[idx.step - 1];
  return deg;
}

PluckerPolynomial PluckerPolynomial::monomial(const FlagShape& shape, PluckerMonomial m,
                                              const Rational& c) {
  PluckerPolynomial p(shape);
  p.add_term(std::move(m), c);
  return p;
}

void PluckerPolynomial::add_term(PluckerMonomial m, const Rational& c) {
  if (c.is_zero()) return;
  for (const auto& idx : m) {
    if (idx.step < 1 || idx.step > shape_.steps())
      throw ShapeMismatch("PluckerPolynomial: bad step");
    if (static_cast<int>(idx.entries.size()) != shape_.dim_at(idx.step))
      throw ShapeMismatch("PluckerPolynomial: index size != d_step");
  }
  m = sorted_monomial(std::move(m));
  if (!terms_.empty()) {
    if (monomial_multidegree(m, shape_.steps()) !=
        monomial_multidegree(terms_.begin()->first, shape_.steps()))
      throw ShapeMismatch("PluckerPolynomial: mixed multidegrees");
  }
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(std::move(m), c);
  } else {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

std::vector<int> PluckerPolynomial::multidegree() const {
  if (terms_.empty()) return std::vector<int>(shape_.steps(), 0);
  return monomial_multidegree(terms_.begin()->first, shape_.steps());
}

PluckerPolynomial& PluckerPolynomial::operator+=(const PluckerPolynomial& o) {
  if (shape_ != o.shape_) throw ShapeMismatch("PluckerPolynomial+: shapes differ");
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

PluckerPolynomial operator*(const PluckerPolynomial& a, const PluckerPolynomial& b) {
  if (a.shape_ != b.shape_) throw ShapeMismatch("PluckerPolynomial*: shapes differ");
  PluckerPolynomial out(a.shape_);
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) {
      PluckerMonomial m = ma;
      m.insert(m.end(), mb.begin(), mb.end());
      out.add_term(std::move(m), ca * cb);
    }
  return out;
}

PluckerPolynomial operator*(const Rational& c, const PluckerPolynomial& p) {
  PluckerPolynomial out(p.shape_);
  if (c.is_zero()) return out;
  for (const auto& [m, v] : p.terms_) out.add_term(m, c * v);
  return out;
}

namespace {

// removes `divisor` from `m` as a multiset; nullopt when not contained
std::optional<PluckerMonomial> strip_divisor(const PluckerMonomial& m,
                                             const PluckerMonomial& divisor) {
  PluckerMonomial rest = m;
  for (const auto& d : divisor) {
    auto it = std::find(rest.begin(), rest.end(), d);
    if (it == rest.end()) return std::nullopt;
    rest.erase(it);
  }
  return rest;
}

}  // namespace

bool PluckerPolynomial::divisible_by(const PluckerMonomial& divisor) const {
  if (terms_.empty()) return true;
  for (const auto& [m, c] : terms_)
    if (!strip_divisor(m, sorted_monomial(divisor))) return false;
  return true;
}

PluckerPolynomial PluckerPolynomial::divide_exact(const PluckerMonomial& divisor) const {
  PluckerPolynomial out(shape_);
  PluckerMonomial div = sorted_monomial(divisor);
  for (const auto& [m, c] : terms_) {
    auto rest = strip_divisor(m, div);
    if (!rest) throw std::domain_error("divide_exact: divisor not present in every term");
    out.add_term(std::move(*rest), c);
  }
  return out;
}

std::string PluckerPolynomial::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << c.str();
    for (const auto& idx : m) os << "*" << idx.str();
  }
  return os.str();
}

std::string PluckerPolynomial::to_json() const {
  nlohmann::json j;
  j["shape"] = shape_.dims;
  j["shape"].push_back(shape_.n);
  j["terms"] = nlohmann::json::array();
  for (const auto& [m, c] : terms_) {
    nlohmann::json t;
    t["coeff"] = c.str();
    t["monomial"] = nlohmann::json::array();
    for (const auto& idx : m) t["monomial"].push_back({idx.step, idx.entries});
    j["terms"].push_back(std::move(t));
  }
  return j.dump();
}

PluckerPolynomial PluckerPolynomial::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  std::vector<int> dims = j.at("shape").get<std::vector<int>>();
  int n = dims.back();
  dims.pop_back();
  PluckerPolynomial p{FlagShape(dims, n)};
  for (const auto& t : j.at("terms")) {
    PluckerMonomial m;
    for (const auto& f : t.at("monomial"))
      m.emplace_back(f.at(0).get<int>(), f.at(1).get<std::vector<int>>());
    p.add_term(std::move(m), Rational::from_string(t.at("coeff").get<std::string>()));
  }
  return p;
}

StiefelPoint::StiefelPoint(FlagShape s) : shape(std::move(s)) {
  for (int i = 1; i <= shape.steps(); ++i)
    factors.emplace_back(shape.dim_at(i + 1), shape.dim_at(i));
}

QMat StiefelPoint::product_from(int i) const {
  QMat p = factors[shape.steps() - 1];
  for (int j = shape.steps() - 1; j >= i; --j) p = p * factors[j - 1];
  return p;
}

bool StiefelPoint::ranks_ok() const {
  for (int i = 1; i <= shape.steps(); ++i)
    if (product_from(i).rank() != shape.dim_at(i)) return false;
  return true;
}

StiefelPoint coordinate_flag(const FlagShape& shape) {
  StiefelPoint m(shape);
  for (int i = 1; i <= shape.steps(); ++i) {
    QMat id(shape.dim_at(i + 1), shape.dim_at(i));
    for (int k = 0; k < shape.dim_at(i); ++k) id(k, k) = Rational(1);
    m.m(i) = id;
  }
  return m;
}

StiefelPoint random_stiefel(const FlagShape& shape, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-20, 20);
  std::uniform_int_distribution<int> den(1, 5);
  StiefelPoint m(shape);
  for (auto& f : m.factors)
    for (int i = 0; i < f.rows(); ++i)
      for (int j = 0; j < f.cols(); ++j) f(i, j) = Rational(num(rng), den(rng));
  return m;
}

StiefelPoint act_h_inverse(const StiefelPoint& m, const std::vector<QMat>& h) {
  if (static_cast<int>(h.size()) != m.shape.steps())
    throw ShapeMismatch("act_h_inverse: need one h per step");
  StiefelPoint out = m;
  const int r = m.shape.steps();
  for (int i = r; i >= 1; --i) {
    QMat v = m.m(i) * h[i - 1].inverse();
    if (i < r) v = h[i] * v;
    out.m(i) = v;
  }
  return out;
}

Rational plucker_eval(const StiefelPoint& m, const PluckerIndex& J) {
  if (J.step < 1 || J.step > m.shape.steps()) throw ShapeMismatch("plucker_eval: bad step");
  if (static_cast<int>(J.entries.size()) != m.shape.dim_at(J.step))
    throw ShapeMismatch("plucker_eval: |J| != d_step");
  QMat p = m.product_from(J.step);
  std::vector<int> rows;
  for (int e : J.entries) {
    if (e < 1 || e > m.shape.n) throw ShapeMismatch("plucker_eval: index out of range");
    rows.push_back(e - 1);
  }
  return p.select_rows(rows).det();
}

Rational section_eval(const PluckerPolynomial& f, const StiefelPoint& m) {
  if (f.shape() != m.shape) throw ShapeMismatch("section_eval: shapes differ");
  std::map<PluckerIndex, Rational> cache;
  Rational total(0);
  for (const auto& [mono, c] : f.terms()) {
    Rational v = c;
    for (const auto& idx : mono) {
      auto it = cache.find(idx);
      if (it == cache.end()) it = cache.emplace(idx, plucker_eval(m, idx)).first;
      v *= it->second;
      if (v.is_zero()) break;
    }
    total += v;
  }
  return total;
}

std::vector<PluckerPolynomial> grassmannian_plucker_relations(int d, int n) {
  if (d < 1 || d >= n) throw ShapeMismatch("grassmannian_plucker_relations: need 1 <= d < n");
  std::vector<PluckerPolynomial> out;
  if (d == 1 || d == n - 1) return out;
  FlagShape shape({d}, n);
  std::set<std::string> seen;
  for (const auto& I : subsets_of_size(n, d - 1)) {
    for (const auto& J : subsets_of_size(n, d + 1)) {
      PluckerPolynomial rel(shape);
      for (int l = 0; l < d + 1; ++l) {
        std::vector<int> first = I;
        first.push_back(J[l]);
        auto [fi, sign] = PluckerIndex::from_unordered(1, std::move(first));
        if (sign == 0) continue;
        std::vector<int> second;
        for (int t = 0; t < d + 1; ++t)
          if (t != l) second.push_back(J[t]);
        Rational c((l % 2 == 0) ? sign : -sign);
        rel.add_term({fi, PluckerIndex(1, std::move(second))}, c);
      }
      if (rel.is_zero()) continue;
      // canonical sign: leading term positive
      if (rel.terms().begin()->second.sign() < 0) rel = Rational(-1) * rel;
      if (seen.insert(rel.str()).second) out.push_back(std::move(rel));
    }
  }
  return out;
}

std::vector<MonomialQuadric> veronese_toric_ideal(int n, int k) {
  if (n < 1 || k < 1) throw std::invalid_argument("veronese_toric_ideal: need n,k >= 1");
  MonomialIndex basis(monomials_of_degree(n + 1, k));
  // group unordered coordinate pairs by the exponent sum u+v
  std::map<std::vector<int>, std::vector<std::pair<int, int>>> by_sum;
  for (int i = 0; i < basis.size(); ++i)
    for (int j = i; j < basis.size(); ++j) {
      std::vector<int> s(n + 1);
      for (int t = 0; t <= n; ++t) s[t] = basis.at(i)[t] + basis.at(j)[t];
      by_sum[s].emplace_back(i, j);
    }
  std::vector<MonomialQuadric> out;
  for (const auto& [s, pairs] : by_sum)
    for (size_t t = 1; t < pairs.size(); ++t)
      out.push_back({pairs[0].first, pairs[0].second, pairs[t].first, pairs[t].second});
  return out;
}

bool hyperplane_property_check(const PluckerPolynomial& f,
                               const std::vector<PluckerIndex>& J_list) {
  PluckerMonomial div;
  for (const auto& J : J_list) div.push_back(J);
  return f.divisible_by(div);
}

StiefelPoint special_section(const StiefelPoint& m, const std::vector<PluckerIndex>& J_list) {
  const int r = m.shape.steps();
  if (static_cast<int>(J_list.size()) != r)
    throw ShapeMismatch("special_section: need one J per step");
  std::vector<const PluckerIndex*> by_step(r + 1, nullptr);
  for (const auto& J : J_list) {
    if (J.step < 1 || J.step > r) throw ShapeMismatch("special_section: bad step");
    by_step[J.step] = &J;
  }
  for (int i = 1; i <= r; ++i)
    if (!by_step[i]) throw ShapeMismatch("special_section: missing step index");

  StiefelPoint out = m;
  for (int i = r; i >= 1; --i) {
    QMat p = out.product_from(i);
    std::vector<int> rows;
    for (int e : by_step[i]->entries) rows.push_back(e - 1);
    QMat block = p.select_rows(rows);
    if (block.det().is_zero())
      throw SingularBlock("special_section: singular J-block at step " + std::to_string(i));
    QMat binv = block.inverse();
    out.m(i) = out.m(i) * binv;
    if (i >= 2) out.m(i - 1) = block * out.m(i - 1);
  }
  return out;
}

}  // namespace taut::flag
