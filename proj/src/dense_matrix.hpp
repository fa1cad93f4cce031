#pragma once

#include <cassert>
#include <initializer_list>
#include <stdexcept>
#include <vector>

#include "rational.hpp"

namespace taut {

/// Dense matrix over the rationals. Small sizes only (flag-variety blocks).
class QMat {
public:
  QMat() : r_(0), c_(0) {}
  QMat(int r, int c) : r_(r), c_(c), a_(static_cast<size_t>(r) * c) {}

  static QMat identity(int n) {
    QMat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = Rational(1);
    return m;
  }

  int rows() const { return r_; }
  int cols() const { return c_; }

  Rational& operator()(int i, int j) { return a_[static_cast<size_t>(i) * c_ + j]; }
  const Rational& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * c_ + j]; }

  friend bool operator==(const QMat& x, const QMat& y) {
    return x.r_ == y.r_ && x.c_ == y.c_ && x.a_ == y.a_;
  }
  friend bool operator!=(const QMat& x, const QMat& y) { return !(x == y); }

  friend QMat operator*(const QMat& x, const QMat& y) {
    assert(x.c_ == y.r_);
    QMat z(x.r_, y.c_);
    for (int i = 0; i < x.r_; ++i)
      for (int k = 0; k < x.c_; ++k) {
        const Rational& v = x(i, k);
        if (v.is_zero()) continue;
        for (int j = 0; j < y.c_; ++j) z(i, j) += v * y(k, j);
      }
    return z;
  }

  /// Row-selected submatrix; rows are 0-based here.
  QMat select_rows(const std::vector<int>& rows) const {
    QMat m(static_cast<int>(rows.size()), c_);
    for (size_t i = 0; i < rows.size(); ++i)
      for (int j = 0; j < c_; ++j) m(static_cast<int>(i), j) = (*this)(rows[i], j);
    return m;
  }

  Rational det() const {
    if (r_ != c_) throw std::invalid_argument("QMat::det: not square");
    QMat w(*this);
    Rational d(1);
    for (int col = 0; col < c_; ++col) {
      int piv = -1;
      for (int i = col; i < r_; ++i)
        if (!w(i, col).is_zero()) { piv = i; break; }
      if (piv < 0) return Rational(0);
      if (piv != col) {
        for (int j = 0; j < c_; ++j) std::swap(w(piv, j), w(col, j));
        d = -d;
      }
      d *= w(col, col);
      Rational inv = w(col, col).inv();
      for (int i = col + 1; i < r_; ++i) {
        if (w(i, col).is_zero()) continue;
        Rational f = w(i, col) * inv;
        for (int j = col; j < c_; ++j) w(i, j) -= f * w(col, j);
      }
    }
    return d;
  }

  QMat inverse() const {
    if (r_ != c_) throw std::invalid_argument("QMat::inverse: not square");
    QMat w(*this);
    QMat inv = identity(r_);
    for (int col = 0; col < c_; ++col) {
      int piv = -1;
      for (int i = col; i < r_; ++i)
        if (!w(i, col).is_zero()) { piv = i; break; }
      if (piv < 0) throw std::domain_error("QMat::inverse: singular");
      if (piv != col)
        for (int j = 0; j < c_; ++j) {
          std::swap(w(piv, j), w(col, j));
          std::swap(inv(piv, j), inv(col, j));
        }
      Rational s = w(col, col).inv();
      for (int j = 0; j < c_; ++j) { w(col, j) *= s; inv(col, j) *= s; }
      for (int i = 0; i < r_; ++i) {
        if (i == col || w(i, col).is_zero()) continue;
        Rational f = w(i, col);
        for (int j = 0; j < c_; ++j) {
          w(i, j) -= f * w(col, j);
          inv(i, j) -= f * inv(col, j);
        }
      }
    }
    return inv;
  }

  int rank() const {
    QMat w(*this);
    int rk = 0;
    for (int col = 0; col < c_ && rk < r_; ++col) {
      int piv = -1;
      for (int i = rk; i < r_; ++i)
        if (!w(i, col).is_zero()) { piv = i; break; }
      if (piv < 0) continue;
      if (piv != rk)
        for (int j = 0; j < c_; ++j) std::swap(w(piv, j), w(rk, j));
      Rational inv = w(rk, col).inv();
      for (int i = rk + 1; i < r_; ++i) {
        if (w(i, col).is_zero()) continue;
        Rational f = w(i, col) * inv;
        for (int j = col; j < c_; ++j) w(i, j) -= f * w(rk, j);
      }
      ++rk;
    }
    return rk;
  }

  /// Column basis of {x : Ax = 0}.
  QMat kernel() const {
    QMat w(*this);
    std::vector<int> pivot_of_col(c_, -1);
    int rk = 0;
    for (int col = 0; col < c_ && rk < r_; ++col) {
      int piv = -1;
      for (int i = rk; i < r_; ++i)
        if (!w(i, col).is_zero()) { piv = i; break; }
      if (piv < 0) continue;
      if (piv != rk)
        for (int j = 0; j < c_; ++j) std::swap(w(piv, j), w(rk, j));
      Rational s = w(rk, col).inv();
      for (int j = 0; j < c_; ++j) w(rk, j) *= s;
      for (int i = 0; i < r_; ++i) {
        if (i == rk || w(i, col).is_zero()) continue;
        Rational f = w(i, col);
        for (int j = 0; j < c_; ++j) w(i, j) -= f * w(rk, j);
      }
      pivot_of_col[col] = rk;
      ++rk;
    }
    QMat ker(c_, c_ - rk);
    int out = 0;
    for (int f = 0; f < c_; ++f) {
      if (pivot_of_col[f] >= 0) continue;
      ker(f, out) = Rational(1);
      for (int col = 0; col < c_; ++col)
        if (pivot_of_col[col] >= 0) ker(col, out) = -w(pivot_of_col[col], f);
      ++out;
    }
    return ker;
  }

  /// Solves A X = B exactly; requires full column rank and a consistent B.
  QMat solve(const QMat& b) const {
    if (b.rows() != r_) throw std::invalid_argument("QMat::solve: shape mismatch");
    QMat w(*this);
    QMat rhs(b);
    std::vector<int> pivot_col;
    int rk = 0;
    for (int col = 0; col < c_ && rk < r_; ++col) {
      int piv = -1;
      for (int i = rk; i < r_; ++i)
        if (!w(i, col).is_zero()) { piv = i; break; }
      if (piv < 0) continue;
      if (piv != rk) {
        for (int j = 0; j < c_; ++j) std::swap(w(piv, j), w(rk, j));
        for (int j = 0; j < rhs.cols(); ++j) std::swap(rhs(piv, j), rhs(rk, j));
      }
      Rational s = w(rk, col).inv();
      for (int j = 0; j < c_; ++j) w(rk, j) *= s;
      for (int j = 0; j < rhs.cols(); ++j) rhs(rk, j) *= s;
      for (int i = 0; i < r_; ++i) {
        if (i == rk || w(i, col).is_zero()) continue;
        Rational f = w(i, col);
        for (int j = 0; j < c_; ++j) w(i, j) -= f * w(rk, j);
        for (int j = 0; j < rhs.cols(); ++j) rhs(i, j) -= f * rhs(rk, j);
      }
      pivot_col.push_back(col);
      ++rk;
    }
    if (rk < c_) throw std::domain_error("QMat::solve: rank-deficient system");
    for (int i = rk; i < r_; ++i)
      for (int j = 0; j < rhs.cols(); ++j)
        if (!rhs(i, j).is_zero()) throw std::domain_error("QMat::solve: inconsistent system");
    QMat x(c_, b.cols());
    for (int i = 0; i < rk; ++i)
      for (int j = 0; j < b.cols(); ++j) x(pivot_col[i], j) = rhs(i, j);
    return x;
  }

private:
  int r_, c_;
  std::vector<Rational> a_;
};

}  // namespace taut
