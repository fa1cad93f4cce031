#pragma once

#include <map>
#include <string>
#include <vector>

#include "rational.hpp"
#include "weyl.hpp"

namespace taut::tsys {

struct UnsupportedLieAlgebra : std::invalid_argument {
  explicit UnsupportedLieAlgebra(const std::string& what) : std::invalid_argument(what) {}
};
struct UnsupportedSpec : std::invalid_argument {
  explicit UnsupportedSpec(const std::string& what) : std::invalid_argument(what) {}
};

/// Which variety/line-bundle pair the system was built from.
struct VarietyTag {
  enum class Kind { ProjectiveSpace, GrassmannianPlucker } kind =
      Kind::ProjectiveSpace;
  int a = 0, b = 0;  // (n, k) for P^n with O(k); (d, n) for G(d,n) with O(1)

  std::string str() const;
  /// "pn(n,k)" or "grassmannian-plucker(d,n)".
  static VarietyTag parse(const std::string& s);
};

enum class GenKind { Ideal, Lie, Euler };

/// Generators of tau(G, X, L, beta) as operators on V^dual: Fourier images
/// of the cone ideal, the first-order operators Z(xi) + beta(xi), and the
/// Euler operator Z(e) + beta(e).
struct TautSystem {
  int num_vars = 0;
  std::vector<std::string> var_labels;
  std::vector<weyl::WeylOperator> generators;
  std::vector<GenKind> kinds;
  std::vector<std::string> gen_labels;
  Rational beta_e;
  std::map<std::string, Rational> beta_g;
  VarietyTag tag;

  int count(GenKind k) const {
    int c = 0;
    for (GenKind g : kinds)
      if (g == k) ++c;
    return c;
  }
  std::string to_json() const;
};

/// Lie-algebra basis labels: "E1_2" for matrix units (1-based), "H1" for the
/// traceless diagonal E_{ii} - E_{i+1,i+1}, "e" for the homothety.
struct LieBasisElement {
  enum class Kind { MatrixUnit, Cartan, Euler } kind = Kind::MatrixUnit;
  int i = 0, j = 0;  // MatrixUnit: E_{ij}; Cartan: index i
  static LieBasisElement parse(const std::string& label);
  std::string label() const;
};

/// The operator Z(xi) + beta_xi on V^dual for the variety's section basis.
/// The action convention is the dual of the derivation action on sections,
/// normalized so that the P^1 period-annihilation check holds exactly.
weyl::WeylOperator lie_operator(const LieBasisElement& xi, const VarietyTag& tag,
                                const Rational& beta_xi);

/// tau for X = P^n, L = O(k), beta(e) = beta_e, beta on the sl_{n+1} basis
/// from beta_g (missing labels mean 0). Requires n >= 1, k >= 2.
TautSystem build_projective_system(int n, int k, const Rational& beta_e,
                                   const std::map<std::string, Rational>& beta_g = {});

/// tau for X = G(d,n) in the Pluecker embedding (L = O(1)), with the full
/// gl_n action. Degenerates to projective space (empty ideal part) for d = 1
/// or d = n-1.
TautSystem build_grassmannian_plucker_system(int d, int n, const Rational& beta_e,
                                             const std::map<std::string, Rational>& beta_g = {});

/// Variable labels for a tag (monomial exponents or Pluecker subsets).
std::vector<std::string> variable_labels(const VarietyTag& tag);

}  // namespace taut::tsys
