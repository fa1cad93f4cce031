#pragma once

#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "dense_matrix.hpp"
#include "monomials.hpp"
#include "rational.hpp"

namespace taut::flag {

struct ShapeMismatch : std::invalid_argument {
  explicit ShapeMismatch(const std::string& what) : std::invalid_argument(what) {}
};
struct SingularBlock : std::runtime_error {
  explicit SingularBlock(const std::string& what) : std::runtime_error(what) {}
};

/// F(d_1,..,d_r, n) with 0 < d_1 < ... < d_r < n.
struct FlagShape {
  std::vector<int> dims;
  int n = 0;

  FlagShape() = default;
  FlagShape(std::vector<int> d, int ambient);

  int steps() const { return static_cast<int>(dims.size()); }
  /// d_i with the conventions d_0 = 0, d_{r+1} = n. 1-based step.
  int dim_at(int i) const {
    if (i == 0) return 0;
    if (i == steps() + 1) return n;
    return dims[i - 1];
  }
  /// F(n-d_r,..,n-d_1, n).
  FlagShape dual() const;

  std::string str() const;
  friend bool operator==(const FlagShape& a, const FlagShape& b) {
    return a.dims == b.dims && a.n == b.n;
  }
  friend bool operator!=(const FlagShape& a, const FlagShape& b) { return !(a == b); }
};

/// Coefficient vector of -K_X in the lambda_{d_i} basis: step i gets
/// d_{i+1} - d_{i-1}.
std::vector<int> anticanonical_multidegree(const FlagShape& shape);

/// x_J at step i: strictly increasing J subset of {1..n}, |J| = d_i.
struct PluckerIndex {
  int step = 1;
  std::vector<int> entries;

  PluckerIndex() = default;
  PluckerIndex(int s, std::vector<int> e) : step(s), entries(std::move(e)) {}

  /// Signed resort of unordered input: returns ({step, sorted}, sign), with
  /// sign 0 when an entry repeats.
  static std::pair<PluckerIndex, int> from_unordered(int step, std::vector<int> e);

  friend bool operator<(const PluckerIndex& a, const PluckerIndex& b) {
    if (a.step != b.step) return a.step < b.step;
    return a.entries < b.entries;
  }
  friend bool operator==(const PluckerIndex& a, const PluckerIndex& b) {
    return a.step == b.step && a.entries == b.entries;
  }
  std::string str() const;
};

/// Multiset of Plucker indices, kept sorted.
using PluckerMonomial = std::vector<PluckerIndex>;

PluckerMonomial sorted_monomial(PluckerMonomial m);
std::vector<int> monomial_multidegree(const PluckerMonomial& m, int steps);

/// Polynomial in Plucker coordinates with a fixed per-step multidegree.
class PluckerPolynomial {
public:
  explicit PluckerPolynomial(FlagShape shape) : shape_(std::move(shape)) {}

  static PluckerPolynomial monomial(const FlagShape& shape, PluckerMonomial m,
                                    const Rational& c);

  const FlagShape& shape() const { return shape_; }
  const std::map<PluckerMonomial, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(PluckerMonomial m, const Rational& c);

  /// Common multidegree of all terms; zero polynomial reports all zeros.
  std::vector<int> multidegree() const;

  PluckerPolynomial& operator+=(const PluckerPolynomial& o);
  friend PluckerPolynomial operator+(PluckerPolynomial a, const PluckerPolynomial& b) {
    return a += b;
  }
  friend PluckerPolynomial operator*(const PluckerPolynomial& a, const PluckerPolynomial& b);
  friend PluckerPolynomial operator*(const Rational& c, const PluckerPolynomial& p);
  friend bool operator==(const PluckerPolynomial& a, const PluckerPolynomial& b) {
    return a.shape_ == b.shape_ && a.terms_ == b.terms_;
  }

  bool divisible_by(const PluckerMonomial& divisor) const;
  /// Formal exact division in the free polynomial ring; every term must
  /// contain the divisor as a sub-multiset.
  PluckerPolynomial divide_exact(const PluckerMonomial& divisor) const;

  std::string str() const;
  std::string to_json() const;
  static PluckerPolynomial from_json(const std::string& text);

private:
  FlagShape shape_;
  std::map<PluckerMonomial, Rational> terms_;
};

/// Stiefel representative (m_r,..,m_1), m_i of size d_{i+1} x d_i. Rank
/// validation is lazy; degenerate points are constructible.
struct StiefelPoint {
  FlagShape shape;
  std::vector<QMat> factors;  // factors[i-1] = m_i

  StiefelPoint() = default;
  explicit StiefelPoint(FlagShape s);

  const QMat& m(int i) const { return factors[i - 1]; }
  QMat& m(int i) { return factors[i - 1]; }

  /// m_r * ... * m_i (an n x d_i matrix).
  QMat product_from(int i) const;
  bool ranks_ok() const;
};

/// Identity-embedded coordinate flag: m_i = [I_{d_i}; 0].
StiefelPoint coordinate_flag(const FlagShape& shape);

/// Random point with entries num/den, |num| <= 20, 1 <= den <= 5.
StiefelPoint random_stiefel(const FlagShape& shape, std::mt19937_64& rng);

/// m . h^{-1} = (m_r h_r^{-1}, h_r m_{r-1} h_{r-1}^{-1}, .., h_2 m_1 h_1^{-1}).
StiefelPoint act_h_inverse(const StiefelPoint& m, const std::vector<QMat>& h);

/// det of the J-row block of m_r ... m_{J.step}.
Rational plucker_eval(const StiefelPoint& m, const PluckerIndex& J);

/// Substitutes plucker_eval values into f.
Rational section_eval(const PluckerPolynomial& f, const StiefelPoint& m);

/// Three-term shuffle generators of the Plucker ideal of G(d,n);
/// empty for d = 1 or d = n-1.
std::vector<PluckerPolynomial> grassmannian_plucker_relations(int d, int n);

/// z_i z_j - z_k z_l over the degree-k monomial coordinates of P^n.
struct MonomialQuadric {
  int i, j, k, l;
};

/// Binomial quadrics of the k-fold Veronese of P^n, one spanning set per
/// degree-2k multidegree, deduplicated. Indices refer to
/// monomials_of_degree(n+1, k).
std::vector<MonomialQuadric> veronese_toric_ideal(int n, int k);

/// True iff x_{J_1} ... x_{J_r} divides f formally (one J per step).
bool hyperplane_property_check(const PluckerPolynomial& f,
                               const std::vector<PluckerIndex>& J_list);

/// The unique H-orbit representative with (m_r..m_i)_{J_i} = I_{d_i} for all
/// i. SingularBlock when some block is singular.
StiefelPoint special_section(const StiefelPoint& m, const std::vector<PluckerIndex>& J_list);

}  // namespace taut::flag
