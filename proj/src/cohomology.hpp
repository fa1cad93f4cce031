#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace taut::coh {

struct ParameterMismatch : std::invalid_argument {
  explicit ParameterMismatch(const std::string& what) : std::invalid_argument(what) {}
};
struct UnsupportedCase : std::invalid_argument {
  explicit UnsupportedCase(const std::string& what) : std::invalid_argument(what) {}
};

/// Partition, weakly decreasing, no trailing zeros.
using Partition = std::vector<int>;

/// Integer combination of Schubert classes sigma_lambda of G(d,n); every
/// partition fits in the d x (n-d) box.
class SchubertClass {
public:
  SchubertClass(int d, int n) : d_(d), n_(n) {
    if (d < 1 || d >= n) throw ParameterMismatch("SchubertClass: need 1 <= d < n");
  }
  static SchubertClass one(int d, int n) {
    SchubertClass c(d, n);
    c.add({}, 1);
    return c;
  }
  static SchubertClass sigma(int d, int n, Partition lambda) {
    SchubertClass c(d, n);
    c.add(std::move(lambda), 1);
    return c;
  }

  int d() const { return d_; }
  int n() const { return n_; }
  const std::map<Partition, long long>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add(Partition lambda, long long coeff);
  long long coeff(const Partition& lambda) const {
    auto it = terms_.find(lambda);
    return it == terms_.end() ? 0 : it->second;
  }

  /// Component of codimension-degree k.
  SchubertClass graded_part(int k) const;

  SchubertClass& operator+=(const SchubertClass& o);
  friend SchubertClass operator+(SchubertClass a, const SchubertClass& b) { return a += b; }
  friend SchubertClass operator*(long long c, const SchubertClass& a);

  std::string str() const;

private:
  int d_, n_;
  std::map<Partition, long long> terms_;
};

/// Cup product via Giambelli + iterated Pieri, truncated to the box.
SchubertClass schubert_mul(const SchubertClass& a, const SchubertClass& b);

/// sigma_lambda . sigma_k (Pieri: horizontal k-strips inside the box).
SchubertClass pieri(const SchubertClass& a, int k);

/// Coefficient of the point class (the full box) in the top-degree part.
long long integrate(const SchubertClass& a);

/// Even Betti numbers b_0, b_2, ... of G(d,n): Gaussian binomial [n d]_q.
struct PoincarePoly {
  std::vector<long long> coefficients;
  std::string to_json() const;
};
PoincarePoly poincare_grassmannian(int d, int n);

/// Chern classes c_1 .. c_dim of T = S^dual tensor Q, via the Whitney/
/// splitting resultant in the Schubert basis.
std::vector<SchubertClass> chern_tangent_grassmannian(int d, int n);

/// Total Chern class (1 + c_1 + ... ).
SchubertClass total_chern_tangent(int d, int n);

/// chi(Y) for a smooth degree-k (in sigma_1) hypersurface section Y of
/// G(d,n): integral of c(T_X) k sigma_1 / (1 + k sigma_1).
long long euler_char_hypersurface(int d, int n, int k);

/// Solution rank at a smooth anticanonical section:
/// dim H^m(X)_prim + b_{m-1}(Y) - b_{m+1}(X), m = dim X, with b_{m-1}(Y)
/// recovered from chi(Y) by Lefschetz and Poincare duality.
long long generic_rank(int d, int n);

/// dim H_n(X - Y_a) for the implemented special cases.
struct ComplementCase {
  enum class Kind { P1Roots, PnToric, SmoothAnticanonical } kind = Kind::P1Roots;
  std::vector<int> multiplicities;  // P1Roots: multiplicities of distinct roots
  int d = 0, n = 0;                 // SmoothAnticanonical: Grassmannian params
};
long long complement_rank_special(const ComplementCase& c);

}  // namespace taut::coh
