#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "weyl.hpp"

using namespace taut;
using namespace taut::weyl;

namespace {

WeylOperator term(int n, const Rational& c, const Expo& x, const Expo& d) {
  WeylOperator w(n);
  w.add_term(x, d, c);
  return w;
}

WeylOperator random_op(std::mt19937_64& rng, int nvars, int terms, int maxdeg) {
  std::uniform_int_distribution<int> e(0, maxdeg);
  std::uniform_int_distribution<int> num(-5, 5);
  std::uniform_int_distribution<int> den(1, 3);
  WeylOperator w(nvars);
  for (int t = 0; t < terms; ++t) {
    Expo x(nvars), d(nvars);
    for (int i = 0; i < nvars; ++i) {
      x[i] = e(rng);
      d[i] = e(rng);
    }
    w.add_term(x, d, Rational(num(rng), den(rng)));
  }
  return w;
}

Jet jet_of_square(int order) {
  // x^2 at 0
  Jet j;
  j.num_vars = 1;
  j.order = order;
  j.base = {Rational(0)};
  j.set({2}, Rational(1));
  return j;
}

}  // namespace

TEST_CASE("weyl_mul commutation relation") {
  auto X = WeylOperator::coordinate(1, 0);
  auto D = WeylOperator::derivative(1, 0);
  // d.x = x d + 1
  auto dx = weyl_mul(D, X);
  auto expected = term(1, Rational(1), {1}, {1}) + WeylOperator::constant(1, Rational(1));
  CHECK(dx == expected);
  // x.d = x d
  CHECK(weyl_mul(X, D) == term(1, Rational(1), {1}, {1}));
}

TEST_CASE("weyl_mul d^2 x by hand Leibniz") {
  auto D = WeylOperator::derivative(1, 0);
  auto X = WeylOperator::coordinate(1, 0);
  auto d2x = weyl_mul(weyl_mul(D, D), X);
  // hand expansion: d^2 x = x d^2 + 2 d
  auto expected = term(1, Rational(1), {1}, {2}) + term(1, Rational(2), {0}, {1});
  CHECK(d2x == expected);
}

TEST_CASE("weyl_mul associativity on random triples") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    int nv = 1 + static_cast<int>(rng() % 3);
    auto a = random_op(rng, nv, 2, 3);
    auto b = random_op(rng, nv, 2, 3);
    auto c = random_op(rng, nv, 2, 3);
    CHECK(weyl_mul(weyl_mul(a, b), c) == weyl_mul(a, weyl_mul(b, c)));
  }
}

TEST_CASE("fourier on generators") {
  auto X = WeylOperator::coordinate(1, 0);
  auto D = WeylOperator::derivative(1, 0);
  CHECK(fourier(X) == Rational(-1) * D);
  CHECK(fourier(D) == X);
  // x d -> -d x = -x d - 1
  auto xd = term(1, Rational(1), {1}, {1});
  auto expected = term(1, Rational(-1), {1}, {1}) + WeylOperator::constant(1, Rational(-1));
  CHECK(fourier(xd) == expected);
}

TEST_CASE("fourier is a ring homomorphism; double fourier is the antipode") {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 20; ++t) {
    int nv = 1 + static_cast<int>(rng() % 2);
    auto a = random_op(rng, nv, 2, 2);
    auto b = random_op(rng, nv, 2, 2);
    CHECK(fourier(weyl_mul(a, b)) == weyl_mul(fourier(a), fourier(b)));
  }
  for (int i = 0; i < 2; ++i) {
    auto X = WeylOperator::coordinate(2, i);
    auto D = WeylOperator::derivative(2, i);
    CHECK(fourier(fourier(X)) == Rational(-1) * X);
    CHECK(fourier(fourier(D)) == Rational(-1) * D);
  }
}

TEST_CASE("apply_to_jet basic examples") {
  auto D = WeylOperator::derivative(1, 0);
  Jet j = jet_of_square(3);
  Jet out = apply_to_jet(D, j);
  CHECK(out.order == 2);
  CHECK(out.get({1}) == Rational(2));
  CHECK(out.get({0}).is_zero());
  CHECK(out.get({2}).is_zero());

  // x d - 2 kills x^2
  auto op = term(1, Rational(1), {1}, {1}) + WeylOperator::constant(1, Rational(-2));
  CHECK(apply_to_jet(op, j).is_zero());
}

TEST_CASE("apply_to_jet respects the base point for polynomial coefficients") {
  // (x - 3) acting on the jet of 1 at base 3 is the centered coordinate t
  Jet one;
  one.num_vars = 1;
  one.order = 4;
  one.base = {Rational(3)};
  one.set({0}, Rational(1));
  auto op = WeylOperator::coordinate(1, 0) + WeylOperator::constant(1, Rational(-3));
  Jet out = apply_to_jet(op, one);
  CHECK(out.order == 4);
  CHECK(out.get({1}) == Rational(1));
  CHECK(out.get({0}).is_zero());
}

TEST_CASE("discriminant oracle: d0 d2 - d1^2 kills the period jet") {
  std::vector<Rational> base = {Rational(1), Rational(0), Rational(-1)};
  // disc(base) = 4, so disc^(-1/2) = 1/2 exactly
  Jet j = oracle::discriminant_power_jet(base, Rational(-1, 2), Rational(1, 2), 6);
  WeylOperator op(3);
  op.add_term({0, 0, 0}, {1, 0, 1}, Rational(1));
  op.add_term({0, 0, 0}, {0, 2, 0}, Rational(-1));
  Jet out = apply_to_jet(op, j);
  CHECK(out.order == 4);
  CHECK(out.is_zero());
}

TEST_CASE("apply composition property up to guaranteed order") {
  std::mt19937_64 rng(31);
  std::vector<Rational> base = {Rational(1), Rational(0), Rational(-1)};
  Jet j = oracle::discriminant_power_jet(base, Rational(-1, 2), Rational(1, 2), 7);
  for (int t = 0; t < 10; ++t) {
    auto a = random_op(rng, 3, 2, 1);
    auto b = random_op(rng, 3, 2, 1);
    Jet lhs = apply_to_jet(weyl_mul(a, b), j);
    Jet rhs = apply_to_jet(a, apply_to_jet(b, j));
    // compare up to the weaker of the two guaranteed orders
    int ord = std::min(lhs.order, rhs.order);
    for (const auto& [e, c] : lhs.coef)
      if (total_degree(e) <= ord) CHECK(c == rhs.get(e));
    for (const auto& [e, c] : rhs.coef)
      if (total_degree(e) <= ord) CHECK(c == lhs.get(e));
  }
}

TEST_CASE("text format round-trips exactly") {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 25; ++t) {
    int nv = 1 + static_cast<int>(rng() % 3);
    auto a = random_op(rng, nv, 3, 4);
    CHECK(WeylOperator::parse(a.str(), nv) == a);
  }
  CHECK(WeylOperator::parse("0", 2) == WeylOperator::zero(2));
  auto x = WeylOperator::coordinate(2, 0);
  CHECK(x.str() == "1 * x^[1,0] * d^[0,0]");
}

TEST_CASE("dimension mismatch raises") {
  auto a = WeylOperator::coordinate(2, 0);
  auto b = WeylOperator::coordinate(3, 0);
  CHECK_THROWS_AS(weyl_mul(a, b), DimensionMismatch);
}
