#include "cohomology.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace taut::coh {

namespace {

int part_size(const Partition& p) { return std::accumulate(p.begin(), p.end(), 0); }

Partition trim(Partition p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
  return p;
}

}  // namespace

void SchubertClass::add(Partition lambda, long long coeff) {
  if (coeff == 0) return;
  lambda = trim(std::move(lambda));
  for (size_t i = 1; i < lambda.size(); ++i)
    if (lambda[i] > lambda[i - 1]) throw ParameterMismatch("SchubertClass: not a partition");
  if (static_cast<int>(lambda.size()) > d_ || (!lambda.empty() && lambda[0] > n_ - d_))
    return;  // outside the box: zero in H*(G(d,n))
  auto it = terms_.find(lambda);
  if (it == terms_.end()) {
    terms_.emplace(std::move(lambda), coeff);
  } else {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
}

SchubertClass SchubertClass::graded_part(int k) const {
  SchubertClass out(d_, n_);
  for (const auto& [p, c] : terms_)
    if (part_size(p) == k) out.add(p, c);
  return out;
}

SchubertClass& SchubertClass::operator+=(const SchubertClass& o) {
  if (d_ != o.d_ || n_ != o.n_) throw ParameterMismatch("SchubertClass+: parameters differ");
  for (const auto& [p, c] : o.terms_) add(p, c);
  return *this;
}

SchubertClass operator*(long long c, const SchubertClass& a) {
  SchubertClass out(a.d_, a.n_);
  if (c == 0) return out;
  for (const auto& [p, v] : a.terms_) out.add(p, c * v);
  return out;
}

std::string SchubertClass::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [p, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << c << "*s[";
    for (size_t i = 0; i < p.size(); ++i) {
      if (i) os << ",";
      os << p[i];
    }
    os << "]";
  }
  return os.str();
}

SchubertClass pieri(const SchubertClass& a, int k) {
  const int d = a.d(), n = a.n();
  SchubertClass out(d, n);
  if (k == 0) return a;
  if (k < 0 || k > n - d) return out;
  for (const auto& [lam, c] : a.terms()) {
    Partition l = lam;
    l.resize(d, 0);
    // nu >= lambda, horizontal strip: lambda_{i-1} >= nu_i, |nu/lambda| = k
    std::vector<int> nu(d, 0);
    auto rec = [&](auto&& self, int row, int rem) -> void {
      if (row == d) {
        if (rem == 0) out.add(nu, c);
        return;
      }
      int hi = (row == 0) ? n - d : std::min(l[row - 1], n - d);
      for (int v = l[row]; v <= hi && v - l[row] <= rem; ++v) {
        nu[row] = v;
        self(self, row + 1, rem - (v - l[row]));
      }
    };
    rec(rec, 0, k);
  }
  return out;
}

SchubertClass schubert_mul(const SchubertClass& a, const SchubertClass& b) {
  if (a.d() != b.d() || a.n() != b.n())
    throw ParameterMismatch("schubert_mul: parameters differ");
  const int d = a.d(), n = a.n();
  SchubertClass out(d, n);
  for (const auto& [mu, cb] : b.terms()) {
    if (mu.empty()) {
      out += cb * a;
      continue;
    }
    // Giambelli: sigma_mu = det(h_{mu_i - i + j}), h_k = sigma_(k) in the
    // quotient (h_k = 0 beyond n-d); expand and push through Pieri.
    const int m = static_cast<int>(mu.size());
    std::vector<int> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    SchubertClass acc(d, n);
    do {
      int inv = 0;
      for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
          if (perm[i] > perm[j]) ++inv;
      std::vector<int> hs;
      bool zero = false;
      for (int i = 0; i < m; ++i) {
        int k = mu[i] - (i + 1) + (perm[i] + 1);
        if (k < 0 || k > n - d) { zero = true; break; }
        hs.push_back(k);
      }
      if (!zero) {
        SchubertClass term = a;
        for (int k : hs) term = pieri(term, k);
        acc += ((inv % 2 == 0) ? 1 : -1) * term;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    out += cb * acc;
  }
  return out;
}

long long integrate(const SchubertClass& a) {
  Partition box(a.d(), a.n() - a.d());
  return a.coeff(box);
}

PoincarePoly poincare_grassmannian(int d, int n) {
  if (d < 1 || d >= n) throw ParameterMismatch("poincare_grassmannian: need 1 <= d < n");
  // Gaussian recurrence G(n,d) = G(n-1,d-1) + q^d G(n-1,d)
  std::vector<std::vector<std::vector<long long>>> g(n + 1);
  for (int nn = 0; nn <= n; ++nn) {
    g[nn].resize(nn + 1);
    for (int dd = 0; dd <= nn; ++dd) {
      if (dd == 0 || dd == nn) {
        g[nn][dd] = {1};
        continue;
      }
      std::vector<long long> a = g[nn - 1][dd - 1];
      std::vector<long long> b = g[nn - 1][dd];
      std::vector<long long> r(std::max(a.size(), b.size() + dd), 0);
      for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
      for (size_t i = 0; i < b.size(); ++i) r[i + dd] += b[i];
      g[nn][dd] = std::move(r);
    }
  }
  PoincarePoly p;
  p.coefficients = g[n][d];
  return p;
}

std::string PoincarePoly::to_json() const {
  nlohmann::json j;
  j["betti_even"] = coefficients;
  return j.dump();
}

namespace {

// Determinant over the Schubert ring, division-free (mask DP over columns).
SchubertClass ring_det(const std::vector<std::vector<SchubertClass>>& m, int d, int n) {
  const int sz = static_cast<int>(m.size());
  std::map<uint32_t, SchubertClass> memo;
  auto rec = [&](auto&& self, uint32_t mask) -> SchubertClass {
    int row = sz - __builtin_popcount(mask);
    if (row == sz) return SchubertClass::one(d, n);
    auto it = memo.find(mask);
    if (it != memo.end()) return it->second;
    SchubertClass acc(d, n);
    int sign = 1;
    for (int c = 0; c < sz; ++c) {
      if (mask & (1u << c)) continue;
      if (!m[row][c].is_zero())
        acc += sign * schubert_mul(m[row][c], self(self, mask | (1u << c)));
      sign = -sign;
    }
    memo.emplace(mask, acc);
    return acc;
  };
  return rec(rec, 0);
}

}  // namespace

SchubertClass total_chern_tangent(int d, int n) {
  const int e = n - d;
  // G(s) = prod (s - u_i) = sum (-1)^k sigma_{1^k} s^{d-k}, roots = Chern
  // roots of S^dual; F(s) = sum_k sigma_k (1+s)^{e-k}.  Then
  // c(T) = prod_i F(u_i) = Res(G, F), G monic.
  std::vector<SchubertClass> gc, fc;  // coefficient of s^t at index t
  for (int t = 0; t <= d; ++t) gc.push_back(SchubertClass(d, n));
  for (int t = 0; t <= e; ++t) fc.push_back(SchubertClass(d, n));
  for (int k = 0; k <= d; ++k) {
    Partition col(k, 1);
    gc[d - k].add(col, (k % 2 == 0) ? 1 : -1);
  }
  for (int k = 0; k <= e; ++k) {
    // sigma_k (1+s)^{e-k} contributes C(e-k, t) sigma_k to s^t
    for (int t = 0; t <= e - k; ++t) {
      long long bin = 1;
      for (int i = 0; i < t; ++i) bin = bin * (e - k - i) / (i + 1);
      Partition row = k == 0 ? Partition{} : Partition{k};
      fc[t].add(row, bin);
    }
  }
  // Sylvester matrix of (G, F): e rows of G-coeffs, d rows of F-coeffs
  const int sz = d + e;
  std::vector<std::vector<SchubertClass>> syl(sz, std::vector<SchubertClass>(sz, SchubertClass(d, n)));
  for (int i = 0; i < e; ++i)
    for (int t = 0; t <= d; ++t) syl[i][i + (d - t)] = gc[t];
  for (int i = 0; i < d; ++i)
    for (int t = 0; t <= e; ++t) syl[e + i][i + (e - t)] = fc[t];
  return ring_det(syl, d, n);
}

std::vector<SchubertClass> chern_tangent_grassmannian(int d, int n) {
  SchubertClass total = total_chern_tangent(d, n);
  std::vector<SchubertClass> cs;
  for (int k = 1; k <= d * (n - d); ++k) cs.push_back(total.graded_part(k));
  return cs;
}

long long euler_char_hypersurface(int d, int n, int k) {
  const int dim = d * (n - d);
  SchubertClass c = total_chern_tangent(d, n);
  // 1/(1 + k sigma_1) as a geometric series truncated at top degree
  SchubertClass inv(d, n);
  SchubertClass pw = SchubertClass::one(d, n);
  long long sign = 1;
  for (int j = 0; j <= dim; ++j) {
    inv += sign * pw;
    pw = pieri(k * pw, 1);
    sign = -sign;
  }
  SchubertClass integrand = schubert_mul(c, inv);
  integrand = pieri(k * integrand, 1);
  return integrate(integrand);
}

long long generic_rank(int d, int n) {
  const int m = d * (n - d);
  PoincarePoly pp = poincare_grassmannian(d, n);
  auto betti = [&](int deg) -> long long {
    if (deg < 0 || deg % 2 != 0) return 0;
    int i = deg / 2;
    if (i >= static_cast<int>(pp.coefficients.size())) return 0;
    return pp.coefficients[i];
  };
  long long prim = betti(m) - betti(m - 2);
  long long chi_y = euler_char_hypersurface(d, n, n);  // -K = n sigma_1
  long long partial = 0;
  for (int i = 0; i <= m - 2; ++i) partial += (i % 2 == 0 ? 1 : -1) * betti(i);
  long long b_mid_y = (chi_y - 2 * partial);
  if ((m - 1) % 2 != 0) b_mid_y = -b_mid_y;
  return prim + b_mid_y - betti(m + 1);
}

long long complement_rank_special(const ComplementCase& c) {
  switch (c.kind) {
    case ComplementCase::Kind::P1Roots:
      if (c.multiplicities.empty())
        throw UnsupportedCase("P1 case needs root multiplicities");
      return static_cast<long long>(c.multiplicities.size()) - 1;
    case ComplementCase::Kind::PnToric:
      return 1;  // torus complement: dim H_n((C*)^n) = 1
    case ComplementCase::Kind::SmoothAnticanonical:
      return generic_rank(c.d, c.n);
  }
  throw UnsupportedCase("unknown complement case");
}

}  // namespace taut::coh
