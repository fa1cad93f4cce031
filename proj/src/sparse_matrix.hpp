#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "primefield.hpp"
#include "rational.hpp"

namespace taut {

/// Sparse matrix over an exact field (Rational or Fp64). Rows are kept as
/// column-sorted (col, value) lists with no explicit zeros and no duplicate
/// positions. Degenerate 0-row / 0-column matrices are legal.
template <class F>
class SparseMatrix {
public:
  using Entry = std::pair<int, F>;

  SparseMatrix() : rows_(0), cols_(0) {}
  SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(rows) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  void add(int r, int c, const F& v) {
    if (v.is_zero()) return;
    auto& row = data_[r];
    auto it = std::lower_bound(row.begin(), row.end(), c,
                               [](const Entry& e, int col) { return e.first < col; });
    if (it != row.end() && it->first == c) {
      it->second += v;
      if (it->second.is_zero()) row.erase(it);
    } else {
      row.insert(it, {c, v});
    }
  }

  const std::vector<Entry>& row(int r) const { return data_[r]; }
  std::vector<Entry>& row_mut(int r) { return data_[r]; }

  long nnz() const {
    long t = 0;
    for (const auto& r : data_) t += static_cast<long>(r.size());
    return t;
  }

  F at(int r, int c) const {
    const auto& row = data_[r];
    auto it = std::lower_bound(row.begin(), row.end(), c,
                               [](const Entry& e, int col) { return e.first < col; });
    if (it != row.end() && it->first == c) return it->second;
    return F{};
  }

  friend bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

private:
  int rows_, cols_;
  std::vector<std::vector<Entry>> data_;
};

template <class F>
struct RrefResult {
  SparseMatrix<F> mat;        // reduced row echelon form
  int rank = 0;
  std::vector<int> pivot_cols;  // ascending
};

namespace detail {

// dst -= factor * src, both column-sorted.
template <class F>
void axpy_row(std::vector<std::pair<int, F>>& dst, const F& factor,
              const std::vector<std::pair<int, F>>& src,
              std::vector<std::pair<int, F>>& scratch) {
  scratch.clear();
  scratch.reserve(dst.size() + src.size());
  size_t i = 0, j = 0;
  while (i < dst.size() || j < src.size()) {
    if (j == src.size() || (i < dst.size() && dst[i].first < src[j].first)) {
      scratch.push_back(dst[i++]);
    } else if (i == dst.size() || src[j].first < dst[i].first) {
      F v = -(factor * src[j].second);
      if (!v.is_zero()) scratch.emplace_back(src[j].first, v);
      ++j;
    } else {
      F v = dst[i].second - factor * src[j].second;
      if (!v.is_zero()) scratch.emplace_back(dst[i].first, v);
      ++i;
      ++j;
    }
  }
  dst.swap(scratch);
}

}  // namespace detail

/// Reduced row echelon form with Markowitz-style pivoting: pivot rows are
/// chosen shortest-first and pivot columns sparsest-first to limit fill-in.
/// The RREF of a matrix is unique, so the output does not depend on the
/// pivot order.
template <class F>
RrefResult<F> rref(const SparseMatrix<F>& m) {
  const int nr = m.rows(), nc = m.cols();
  std::vector<std::vector<std::pair<int, F>>> work(nr);
  for (int r = 0; r < nr; ++r) work[r] = m.row(r);

  std::vector<int> col_count(nc, 0);
  for (int r = 0; r < nr; ++r)
    for (const auto& e : work[r]) ++col_count[e.first];

  std::vector<bool> done(nr, false);
  std::vector<std::pair<int, int>> pivots;  // (pivot col, row index)
  std::vector<std::pair<int, F>> scratch;

  for (;;) {
    int best_row = -1;
    size_t best_len = 0;
    for (int r = 0; r < nr; ++r) {
      if (done[r] || work[r].empty()) continue;
      if (best_row < 0 || work[r].size() < best_len) {
        best_row = r;
        best_len = work[r].size();
      }
    }
    if (best_row < 0) break;

    int pcol = -1, pcount = 0;
    for (const auto& e : work[best_row]) {
      int cc = col_count[e.first];
      if (pcol < 0 || cc < pcount) {
        pcol = e.first;
        pcount = cc;
      }
    }

    // normalize pivot row
    F pv{};
    for (const auto& e : work[best_row])
      if (e.first == pcol) pv = e.second;
    F inv = pv.inv();
    if (!inv.is_one()) {
      for (auto& e : work[best_row]) e.second *= inv;
    }

    for (int r = 0; r < nr; ++r) {
      if (r == best_row || done[r] || work[r].empty()) continue;
      F fac{};
      bool hit = false;
      for (const auto& e : work[r]) {
        if (e.first == pcol) { fac = e.second; hit = true; break; }
      }
      if (!hit) continue;
      for (const auto& e : work[r]) --col_count[e.first];
      detail::axpy_row(work[r], fac, work[best_row], scratch);
      for (const auto& e : work[r]) ++col_count[e.first];
    }

    for (const auto& e : work[best_row]) --col_count[e.first];
    done[best_row] = true;
    pivots.emplace_back(pcol, best_row);
  }

  // back-substitution between pivot rows
  std::sort(pivots.begin(), pivots.end());
  for (size_t i = 0; i < pivots.size(); ++i) {
    for (size_t j = i + 1; j < pivots.size(); ++j) {
      auto& ri = work[pivots[i].second];
      int cj = pivots[j].first;
      F fac{};
      bool hit = false;
      for (const auto& e : ri) {
        if (e.first == cj) { fac = e.second; hit = true; break; }
      }
      if (hit) detail::axpy_row(ri, fac, work[pivots[j].second], scratch);
    }
  }

  RrefResult<F> out;
  out.rank = static_cast<int>(pivots.size());
  out.mat = SparseMatrix<F>(nr, nc);
  for (size_t i = 0; i < pivots.size(); ++i) {
    out.pivot_cols.push_back(pivots[i].first);
    for (const auto& e : work[pivots[i].second])
      out.mat.add(static_cast<int>(i), e.first, e.second);
  }
  return out;
}

template <class F>
int rank(const SparseMatrix<F>& m) {
  return rref(m).rank;
}

/// cols - rank.
template <class F>
int nullspace_dim(const SparseMatrix<F>& m) {
  return m.cols() - rank(m);
}

/// Dense basis of the right nullspace, one vector per free column.
template <class F>
std::vector<std::vector<F>> nullspace_basis(const SparseMatrix<F>& m, const F& one) {
  RrefResult<F> r = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (int c : r.pivot_cols) is_pivot[c] = true;

  std::vector<std::vector<F>> basis;
  for (int f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    std::vector<F> x(m.cols(), F{});
    x[f] = one;
    for (int i = 0; i < r.rank; ++i) {
      F v = r.mat.at(i, f);
      if (!v.is_zero()) x[r.pivot_cols[i]] = -v;
    }
    basis.push_back(std::move(x));
  }
  return basis;
}

/// Entry-wise image in F_p. BadPrime when p divides some denominator.
inline SparseMatrix<Fp64> reduce_mod_p(const SparseMatrix<Rational>& m, uint64_t p) {
  SparseMatrix<Fp64> out(m.rows(), m.cols());
  for (int r = 0; r < m.rows(); ++r)
    for (const auto& e : m.row(r)) out.add(r, e.first, Fp64::from_rational(e.second, p));
  return out;
}

}  // namespace taut
