#include "tautsys.hpp"

#include <sstream>

#include "flagvar.hpp"
#include "json.hpp"
#include "monomials.hpp"

namespace taut::tsys {

std::string VarietyTag::str() const {
  std::ostringstream os;
  if (kind == Kind::ProjectiveSpace)
    os << "pn(" << a << "," << b << ")";
  else
    os << "grassmannian-plucker(" << a << "," << b << ")";
  return os.str();
}

VarietyTag VarietyTag::parse(const std::string& s) {
  auto open = s.find('(');
  auto comma = s.find(',', open);
  auto close = s.find(')', comma);
  if (open == std::string::npos || comma == std::string::npos || close == std::string::npos)
    throw UnsupportedSpec("cannot parse variety spec '" + s + "'");
  VarietyTag t;
  std::string name = s.substr(0, open);
  if (name == "pn")
    t.kind = VarietyTag::Kind::ProjectiveSpace;
  else if (name == "grassmannian-plucker")
    t.kind = VarietyTag::Kind::GrassmannianPlucker;
  else
    throw UnsupportedSpec("unknown variety spec '" + name + "'");
  t.a = std::stoi(s.substr(open + 1, comma - open - 1));
  t.b = std::stoi(s.substr(comma + 1, close - comma - 1));
  return t;
}

LieBasisElement LieBasisElement::parse(const std::string& label) {
  LieBasisElement e;
  if (label == "e") {
    e.kind = Kind::Euler;
    return e;
  }
  if (label.size() >= 2 && label[0] == 'H') {
    e.kind = Kind::Cartan;
    e.i = std::stoi(label.substr(1));
    return e;
  }
  if (label.size() >= 4 && label[0] == 'E') {
    auto us = label.find('_');
    if (us != std::string::npos) {
      e.kind = Kind::MatrixUnit;
      e.i = std::stoi(label.substr(1, us - 1));
      e.j = std::stoi(label.substr(us + 1));
      return e;
    }
  }
  throw UnsupportedLieAlgebra("bad Lie basis label '" + label + "'");
}

std::string LieBasisElement::label() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Euler: return "e";
    case Kind::Cartan: os << "H" << i; break;
    case Kind::MatrixUnit: os << "E" << i << "_" << j; break;
  }
  return os.str();
}

namespace {

// Section basis of Gamma(X, L): for P^n a list of degree-k exponent vectors,
// for G(d,n) a list of d-subsets.  transport(E_ij) collects the coefficients
// of the derivation x_i d/dx_j acting on the basis (index replacement j -> i).
struct SectionBasis {
  std::vector<std::vector<int>> monomials;  // P^n
  std::vector<std::vector<int>> subsets;    // G(d,n)
  bool plucker = false;
  int size() const {
    return static_cast<int>(plucker ? subsets.size() : monomials.size());
  }
};

SectionBasis section_basis(const VarietyTag& tag) {
  SectionBasis b;
  if (tag.kind == VarietyTag::Kind::ProjectiveSpace) {
    b.monomials = monomials_of_degree(tag.a + 1, tag.b);
  } else {
    b.plucker = true;
    b.subsets = subsets_of_size(tag.b, tag.a);
  }
  return b;
}

// entries (source index, target index, coefficient) of the derivation action
// of E_{ij} on the section basis; 1-based i, j in the ambient W.
std::vector<std::tuple<int, int, Rational>> transport_matrix_unit(const SectionBasis& b,
                                                                  int i, int j) {
  std::vector<std::tuple<int, int, Rational>> out;
  if (!b.plucker) {
    MonomialIndex idx(b.monomials);
    for (int s = 0; s < idx.size(); ++s) {
      const auto& u = idx.at(s);
      if (u[j - 1] == 0) continue;
      std::vector<int> v = u;
      --v[j - 1];
      ++v[i - 1];
      int t = idx.find(v);
      out.emplace_back(s, t, Rational(u[j - 1]));
    }
  } else {
    std::map<std::vector<int>, int> pos;
    for (size_t s = 0; s < b.subsets.size(); ++s) pos[b.subsets[s]] = static_cast<int>(s);
    for (size_t s = 0; s < b.subsets.size(); ++s) {
      const auto& J = b.subsets[s];
      bool has_j = std::find(J.begin(), J.end(), j) != J.end();
      if (!has_j) continue;
      if (i == j) {
        out.emplace_back(static_cast<int>(s), static_cast<int>(s), Rational(1));
        continue;
      }
      std::vector<int> repl;
      for (int e : J) repl.push_back(e == j ? i : e);
      auto [sorted, sign] = flag::PluckerIndex::from_unordered(1, std::move(repl));
      if (sign == 0) continue;
      out.emplace_back(static_cast<int>(s), pos.at(sorted.entries), Rational(sign));
    }
  }
  return out;
}

weyl::WeylOperator vector_field_minus_dual(const SectionBasis& b,
                                           const std::vector<std::tuple<int, int, Rational>>& tr) {
  // L = -sum c_(u->v) a_u d_v : the dual of the derivation action on sections.
  const int n = b.size();
  weyl::WeylOperator op(n);
  for (const auto& [src, dst, c] : tr) {
    weyl::Expo x(n, 0), d(n, 0);
    x[src] = 1;
    d[dst] = 1;
    op.add_term(x, d, -c);
  }
  return op;
}

weyl::WeylOperator euler_field(int n) {
  weyl::WeylOperator op(n);
  for (int i = 0; i < n; ++i) {
    weyl::Expo x(n, 0), d(n, 0);
    x[i] = 1;
    d[i] = 1;
    op.add_term(x, d, Rational(1));
  }
  return op;
}

int ambient_w_dim(const VarietyTag& tag) {
  return tag.kind == VarietyTag::Kind::ProjectiveSpace ? tag.a + 1 : tag.b;
}

Rational beta_of(const std::map<std::string, Rational>& beta_g, const std::string& label) {
  auto it = beta_g.find(label);
  return it == beta_g.end() ? Rational(0) : it->second;
}

std::string expo_label(const std::vector<int>& e, bool plucker) {
  std::ostringstream os;
  os << (plucker ? "a{" : "a[");
  for (size_t i = 0; i < e.size(); ++i) {
    if (i) os << ",";
    os << e[i];
  }
  os << (plucker ? "}" : "]");
  return os.str();
}

}  // namespace

weyl::WeylOperator lie_operator(const LieBasisElement& xi, const VarietyTag& tag,
                                const Rational& beta_xi) {
  SectionBasis basis = section_basis(tag);
  const int n = basis.size();
  weyl::WeylOperator op(n);
  const int w = ambient_w_dim(tag);
  switch (xi.kind) {
    case LieBasisElement::Kind::Euler:
      op = euler_field(n);
      break;
    case LieBasisElement::Kind::MatrixUnit:
      if (xi.i < 1 || xi.i > w || xi.j < 1 || xi.j > w)
        throw UnsupportedLieAlgebra("matrix unit out of range for " + tag.str());
      op = vector_field_minus_dual(basis, transport_matrix_unit(basis, xi.i, xi.j));
      break;
    case LieBasisElement::Kind::Cartan: {
      if (xi.i < 1 || xi.i + 1 > w)
        throw UnsupportedLieAlgebra("Cartan index out of range for " + tag.str());
      auto tr = transport_matrix_unit(basis, xi.i, xi.i);
      auto tr2 = transport_matrix_unit(basis, xi.i + 1, xi.i + 1);
      for (auto& [s, t, c] : tr2) c = -c;
      tr.insert(tr.end(), tr2.begin(), tr2.end());
      op = vector_field_minus_dual(basis, tr);
      break;
    }
  }
  op += weyl::WeylOperator::constant(n, beta_xi);
  return op;
}

std::vector<std::string> variable_labels(const VarietyTag& tag) {
  SectionBasis b = section_basis(tag);
  std::vector<std::string> labels;
  if (b.plucker)
    for (const auto& J : b.subsets) labels.push_back(expo_label(J, true));
  else
    for (const auto& u : b.monomials) labels.push_back(expo_label(u, false));
  return labels;
}

namespace {

void append_lie_part(TautSystem& sys, const std::vector<LieBasisElement>& basis,
                     const std::map<std::string, Rational>& beta_g) {
  for (const auto& xi : basis) {
    sys.generators.push_back(lie_operator(xi, sys.tag, beta_of(beta_g, xi.label())));
    sys.kinds.push_back(GenKind::Lie);
    sys.gen_labels.push_back("Z(" + xi.label() + ")");
  }
}

void append_euler(TautSystem& sys) {
  weyl::WeylOperator op = euler_field(sys.num_vars);
  op += weyl::WeylOperator::constant(sys.num_vars, sys.beta_e);
  sys.generators.push_back(op);
  sys.kinds.push_back(GenKind::Euler);
  sys.gen_labels.push_back("Z(e)");
}

}  // namespace

TautSystem build_projective_system(int n, int k, const Rational& beta_e,
                                   const std::map<std::string, Rational>& beta_g) {
  if (n < 1 || k < 2) throw UnsupportedSpec("build_projective_system: need n >= 1, k >= 2");
  TautSystem sys;
  sys.tag = {VarietyTag::Kind::ProjectiveSpace, n, k};
  sys.var_labels = variable_labels(sys.tag);
  sys.num_vars = static_cast<int>(sys.var_labels.size());
  sys.beta_e = beta_e;
  sys.beta_g = beta_g;

  // J(X-hat): Fourier images of the Veronese binomials
  for (const auto& q : flag::veronese_toric_ideal(n, k)) {
    weyl::WeylOperator poly(sys.num_vars);
    weyl::Expo zero(sys.num_vars, 0);
    weyl::Expo m1 = zero, m2 = zero;
    ++m1[q.i];
    ++m1[q.j];
    ++m2[q.k];
    ++m2[q.l];
    poly.add_term(m1, zero, Rational(1));
    poly.add_term(m2, zero, Rational(-1));
    sys.generators.push_back(weyl::fourier(poly));
    sys.kinds.push_back(GenKind::Ideal);
    sys.gen_labels.push_back("J:" + std::to_string(q.i) + "," + std::to_string(q.j) + "-" +
                             std::to_string(q.k) + "," + std::to_string(q.l));
  }

  // sl_{n+1}: off-diagonal matrix units plus traceless Cartan differences
  std::vector<LieBasisElement> basis;
  for (int i = 1; i <= n + 1; ++i)
    for (int j = 1; j <= n + 1; ++j)
      if (i != j) basis.push_back({LieBasisElement::Kind::MatrixUnit, i, j});
  for (int i = 1; i <= n; ++i) basis.push_back({LieBasisElement::Kind::Cartan, i, 0});
  append_lie_part(sys, basis, beta_g);
  append_euler(sys);
  return sys;
}

TautSystem build_grassmannian_plucker_system(int d, int n, const Rational& beta_e,
                                             const std::map<std::string, Rational>& beta_g) {
  if (d < 1 || d >= n)
    throw UnsupportedSpec("build_grassmannian_plucker_system: need 1 <= d < n");
  TautSystem sys;
  sys.tag = {VarietyTag::Kind::GrassmannianPlucker, d, n};
  sys.var_labels = variable_labels(sys.tag);
  sys.num_vars = static_cast<int>(sys.var_labels.size());
  sys.beta_e = beta_e;
  sys.beta_g = beta_g;

  MonomialIndex subsets(subsets_of_size(n, d));
  for (const auto& rel : flag::grassmannian_plucker_relations(d, n)) {
    weyl::WeylOperator poly(sys.num_vars);
    weyl::Expo zero(sys.num_vars, 0);
    for (const auto& [mono, c] : rel.terms()) {
      weyl::Expo m = zero;
      for (const auto& idx : mono) ++m[subsets.find(idx.entries)];
      poly.add_term(m, zero, c);
    }
    sys.generators.push_back(weyl::fourier(poly));
    sys.kinds.push_back(GenKind::Ideal);
    sys.gen_labels.push_back("J:plucker");
  }

  // full gl_n
  std::vector<LieBasisElement> basis;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) basis.push_back({LieBasisElement::Kind::MatrixUnit, i, j});
  append_lie_part(sys, basis, beta_g);
  append_euler(sys);
  return sys;
}

std::string TautSystem::to_json() const {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["variety"] = tag.str();
  j["num_vars"] = num_vars;
  j["variables"] = var_labels;
  j["beta_e"] = beta_e.str();
  nlohmann::json bg = nlohmann::json::object();
  for (const auto& [k, v] : beta_g) bg[k] = v.str();
  j["beta_g"] = bg;
  j["generators"] = nlohmann::json::array();
  for (size_t i = 0; i < generators.size(); ++i) {
    nlohmann::json g;
    g["label"] = gen_labels[i];
    g["kind"] = kinds[i] == GenKind::Ideal ? "ideal" : (kinds[i] == GenKind::Lie ? "lie" : "euler");
    g["op"] = generators[i].str();
    j["generators"].push_back(std::move(g));
  }
  j["counts"] = {{"ideal", count(GenKind::Ideal)},
                 {"lie", count(GenKind::Lie)},
                 {"euler", count(GenKind::Euler)}};
  return j.dump(2);
}

}  // namespace taut::tsys
