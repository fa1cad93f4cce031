#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "primefield.hpp"
#include "rational.hpp"
#include "sparse_matrix.hpp"

using namespace taut;

namespace {

SparseMatrix<Rational> from_rows(const std::vector<std::vector<long>>& rows, int cols) {
  SparseMatrix<Rational> m(static_cast<int>(rows.size()), cols);
  for (size_t r = 0; r < rows.size(); ++r)
    for (int c = 0; c < cols; ++c) m.add(static_cast<int>(r), c, Rational(rows[r][c]));
  return m;
}

SparseMatrix<Rational> random_matrix(std::mt19937_64& rng, int rows, int cols, int density_pct) {
  std::uniform_int_distribution<int> num(-9, 9);
  std::uniform_int_distribution<int> den(1, 4);
  std::uniform_int_distribution<int> pct(0, 99);
  SparseMatrix<Rational> m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      if (pct(rng) < density_pct) m.add(r, c, Rational(num(rng), den(rng)));
  return m;
}

}  // namespace

TEST_CASE("rational basics") {
  Rational a(1, 2), b(2, 4);
  CHECK(a == b);
  CHECK((a + b) == Rational(1));
  CHECK(Rational(-4, 8).str() == "-1/2");
  CHECK(Rational::from_string("-7/3") == Rational(-7, 3));
  CHECK(Rational(3).pow(-2) == Rational(1, 9));
  CHECK_THROWS(Rational(1, 0));
  CHECK(binomial(5, 2) == Rational(10));
  CHECK(factorial(5) == Rational(120));
}

TEST_CASE("rref examples") {
  auto id3 = from_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, 3);
  auto r = rref(id3);
  CHECK(r.rank == 3);
  CHECK(r.pivot_cols == std::vector<int>{0, 1, 2});

  auto z = rref(SparseMatrix<Rational>(2, 2));
  CHECK(z.rank == 0);
  CHECK(z.pivot_cols.empty());

  auto prop = rref(from_rows({{1, 2}, {2, 4}}, 2));
  CHECK(prop.rank == 1);
}

TEST_CASE("nullspace_dim examples") {
  CHECK(nullspace_dim(from_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, 3)) == 0);
  CHECK(nullspace_dim(SparseMatrix<Rational>(2, 5)) == 5);
  CHECK(nullspace_dim(from_rows({{1, 1, 0}, {0, 0, 1}}, 3)) == 1);
}

TEST_CASE("degenerate shapes are legal") {
  CHECK(rref(SparseMatrix<Rational>(0, 0)).rank == 0);
  CHECK(rref(SparseMatrix<Rational>(0, 4)).rank == 0);
  CHECK(nullspace_dim(SparseMatrix<Rational>(3, 0)) == 0);
}

TEST_CASE("reduce_mod_p examples") {
  SparseMatrix<Rational> half(1, 1);
  half.add(0, 0, Rational(1, 2));
  auto m7 = reduce_mod_p(half, 7);
  CHECK(m7.at(0, 0).value() == 4);  // 2 * 4 = 8 = 1 mod 7

  SparseMatrix<Rational> three(1, 1);
  three.add(0, 0, Rational(3));
  auto m3 = reduce_mod_p(three, 3);
  CHECK(m3.row(0).empty());  // 3 = 0 mod 3, stored as empty

  SparseMatrix<Rational> third(1, 1);
  third.add(0, 0, Rational(1, 3));
  CHECK_THROWS_AS(reduce_mod_p(third, 3), BadPrime);
}

TEST_CASE("rref idempotent and rank-nullity on random matrices") {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 15; ++t) {
    auto m = random_matrix(rng, 6, 8, 40);
    auto r1 = rref(m);
    auto r2 = rref(r1.mat);
    CHECK(r1.mat == r2.mat);
    CHECK(r1.rank == r2.rank);
    CHECK(r1.rank + nullspace_dim(m) == m.cols());
  }
}

TEST_CASE("rank over F_p never exceeds rational rank; equal for random primes") {
  std::mt19937_64 rng(7);
  uint64_t primes[3] = {random_prime_62(1), random_prime_62(2), random_prime_62(3)};
  for (uint64_t p : primes) CHECK(is_prime_u64(p));
  int mismatches = 0;
  for (int t = 0; t < 10; ++t) {
    auto m = random_matrix(rng, 7, 7, 50);
    int rq = rank(m);
    for (uint64_t p : primes) {
      int rp = rank(reduce_mod_p(m, p));
      CHECK(rp <= rq);
      if (rp != rq) ++mismatches;
    }
  }
  CHECK(mismatches <= 1);
}

TEST_CASE("nullspace basis vectors satisfy the system") {
  std::mt19937_64 rng(11);
  auto m = random_matrix(rng, 5, 9, 45);
  auto basis = nullspace_basis(m, Rational(1));
  CHECK(static_cast<int>(basis.size()) == nullspace_dim(m));
  for (const auto& x : basis) {
    for (int r = 0; r < m.rows(); ++r) {
      Rational dot(0);
      for (const auto& [c, v] : m.row(r)) dot += v * x[c];
      CHECK(dot.is_zero());
    }
  }
}

TEST_CASE("deterministic prime generation") {
  CHECK(random_prime_62(123) == random_prime_62(123));
  CHECK(is_prime_u64(random_prime_62(123)));
  CHECK_FALSE(is_prime_u64(1ull << 61));
}
