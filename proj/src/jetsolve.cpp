#include "jetsolve.hpp"

#include <stdexcept>

#include "json.hpp"
#include "monomials.hpp"
#include "sparse_matrix.hpp"

namespace taut::jets {

namespace {

// Stacked constraint matrix at order N: one row per (generator, output
// monomial up to the generator's guaranteed order), one column per jet
// coefficient of degree <= N.  A row states that the t^q coefficient of
// (generator . u) vanishes; only stored jet coefficients ever enter, so the
// constraints are exactly those implied by truncation-sound application.
SparseMatrix<Rational> constraint_matrix(const tsys::TautSystem& sys,
                                         const std::vector<Rational>& a, int N,
                                         const MonomialIndex& cols) {
  const int r = sys.num_vars;
  if (static_cast<int>(a.size()) != r)
    throw std::invalid_argument("jet_solution_dim: point has wrong dimension");

  std::vector<int> guaranteed;
  long nrows = 0;
  std::vector<MonomialIndex> row_bases;
  for (const auto& g : sys.generators) {
    int G = N - g.max_d_order();
    guaranteed.push_back(G);
    row_bases.emplace_back(G >= 0 ? monomials_up_to_degree(r, G)
                                  : std::vector<std::vector<int>>{});
    nrows += row_bases.back().size();
  }

  SparseMatrix<Rational> m(static_cast<int>(nrows), cols.size());
  long row_off = 0;
  for (size_t gi = 0; gi < sys.generators.size(); ++gi) {
    const auto& g = sys.generators[gi];
    const auto& rows = row_bases[gi];
    const int G = guaranteed[gi];
    if (G < 0) continue;
    for (const auto& [key, c] : g.terms()) {
      const auto& alpha = key.first;
      const auto& beta = key.second;
      // coeff of t^q in c (base+t)^alpha d^beta u
      //   = sum_{s<=alpha, s<=q} c C(alpha,s) base^(alpha-s) fall(q-s+beta) u_(q-s+beta)
      weyl::Expo s(r, 0);
      do {
        Rational w = c;
        for (int i = 0; i < r; ++i) {
          if (alpha[i] == 0) continue;
          w *= binomial(alpha[i], s[i]) * a[i].pow(alpha[i] - s[i]);
        }
        if (w.is_zero()) continue;
        for (size_t qi = 0; qi < rows.size(); ++qi) {
          const auto& q = rows[qi];
          weyl::Expo col(r);
          bool ok = true;
          Rational fall(1);
          for (int i = 0; i < r; ++i) {
            int p = q[i] - s[i];
            if (p < 0) { ok = false; break; }
            col[i] = p + beta[i];
            for (int t = 0; t < beta[i]; ++t) fall *= Rational(col[i] - t);
          }
          if (!ok) continue;
          int ci = cols.find(col);
          if (ci < 0) continue;  // cannot happen when |q| <= G
          m.add(static_cast<int>(row_off + qi), ci, w * fall);
        }
      } while ([&] {
        for (int i = 0; i < r; ++i) {
          if (s[i] < alpha[i]) {
            ++s[i];
            for (int j = 0; j < i; ++j) s[j] = 0;
            return true;
          }
        }
        return false;
      }());
    }
    row_off += static_cast<long>(rows.size());
  }
  return m;
}

template <class F>
int truncated_image_dim(const std::vector<std::vector<F>>& basis, const MonomialIndex& cols,
                        int N) {
  if (basis.empty()) return 0;
  std::vector<int> keep;
  for (int i = 0; i < cols.size(); ++i)
    if (weyl::total_degree(cols.at(i)) <= N) keep.push_back(i);
  SparseMatrix<F> m(static_cast<int>(basis.size()), static_cast<int>(keep.size()));
  for (size_t b = 0; b < basis.size(); ++b)
    for (size_t j = 0; j < keep.size(); ++j) m.add(static_cast<int>(b), static_cast<int>(j), basis[b][keep[j]]);
  return rank(m);
}

}  // namespace

int jet_solution_dim(const tsys::TautSystem& sys, const std::vector<Rational>& a, int N,
                     std::optional<uint64_t> prime) {
  MonomialIndex cols(monomials_up_to_degree(sys.num_vars, N));
  SparseMatrix<Rational> m = constraint_matrix(sys, a, N, cols);
  if (prime) return nullspace_dim(reduce_mod_p(m, *prime));
  return nullspace_dim(m);
}

JetReport rank_estimate(const tsys::TautSystem& sys, const std::vector<Rational>& a, int N_min,
                        int N_max, int window, std::optional<uint64_t> prime) {
  if (N_min < 1 || N_min + window > N_max)
    throw std::invalid_argument("rank_estimate: need N_min >= 1 and N_min + window <= N_max");
  JetReport rep;
  rep.base_point = a;
  rep.prime = prime;

  bool origin = true;
  for (const auto& c : a)
    if (!c.is_zero()) origin = false;
  if (origin)
    rep.caveats.push_back("origin point: !-fiber interpretation, no rank claim");

  for (int N = N_min; N <= N_max; ++N) {
    rep.orders.push_back(N);
    rep.raw_dims.push_back(jet_solution_dim(sys, a, N, prime));
  }

  // nullspace basis at the top order, truncated down to each smaller order
  MonomialIndex cols(monomials_up_to_degree(sys.num_vars, N_max));
  SparseMatrix<Rational> m = constraint_matrix(sys, a, N_max, cols);
  rep.image_dims.assign(rep.orders.size(), 0);
  if (prime) {
    auto basis = nullspace_basis(reduce_mod_p(m, *prime), Fp64::one(*prime));
    for (size_t i = 0; i < rep.orders.size(); ++i)
      rep.image_dims[i] = truncated_image_dim(basis, cols, rep.orders[i]);
  } else {
    auto basis = nullspace_basis(m, Rational(1));
    for (size_t i = 0; i < rep.orders.size(); ++i)
      rep.image_dims[i] = truncated_image_dim(basis, cols, rep.orders[i]);
  }

  // stabilization over the `window` largest orders strictly below N_max
  rep.stabilized = true;
  int v = rep.image_dims[rep.orders.size() - 2];
  for (int k = 2; k <= window + 1; ++k) {
    if (rep.image_dims[rep.orders.size() - k] != v) {
      rep.stabilized = false;
      break;
    }
  }
  if (rep.stabilized && !origin) rep.rank_estimate = v;
  if (!rep.stabilized) rep.caveats.push_back("unstable: image dims disagree over final window");
  return rep;
}

bool verify_annihilation(const tsys::TautSystem& sys, const weyl::Jet& j) {
  for (const auto& g : sys.generators) {
    weyl::Jet out = weyl::apply_to_jet(g, j);
    if (!out.is_zero()) return false;
  }
  return true;
}

std::string JetReport::to_json() const {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["base_point"] = nlohmann::json::array();
  for (const auto& c : base_point) j["base_point"].push_back(c.str());
  j["orders"] = orders;
  j["raw_dims"] = raw_dims;
  j["image_dims"] = image_dims;
  j["stabilized"] = stabilized;
  if (rank_estimate)
    j["rank_estimate"] = *rank_estimate;
  else
    j["rank_estimate"] = "unstable";
  j["caveats"] = caveats;
  if (prime) j["mod_p"] = *prime;
  return j.dump(2);
}

}  // namespace taut::jets
