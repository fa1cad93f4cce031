#pragma once

#include <map>
#include <vector>

namespace taut {

/// All exponent vectors in `nvars` variables with total degree exactly k,
/// in lexicographically descending order (x_0^k first).
inline std::vector<std::vector<int>> monomials_of_degree(int nvars, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(nvars, 0);
  auto rec = [&](auto&& self, int pos, int rem) -> void {
    if (pos == nvars - 1) {
      cur[pos] = rem;
      out.push_back(cur);
      return;
    }
    for (int e = rem; e >= 0; --e) {
      cur[pos] = e;
      self(self, pos + 1, rem - e);
    }
  };
  if (nvars == 0) {
    if (k == 0) out.push_back({});
    return out;
  }
  rec(rec, 0, k);
  return out;
}

/// All exponent vectors with total degree <= k, graded (degree 0 first),
/// lexicographically descending within each degree.
inline std::vector<std::vector<int>> monomials_up_to_degree(int nvars, int k) {
  std::vector<std::vector<int>> out;
  for (int d = 0; d <= k; ++d) {
    auto block = monomials_of_degree(nvars, d);
    out.insert(out.end(), block.begin(), block.end());
  }
  return out;
}

/// Index lookup for a monomial list.
class MonomialIndex {
public:
  explicit MonomialIndex(std::vector<std::vector<int>> monomials)
      : list_(std::move(monomials)) {
    for (size_t i = 0; i < list_.size(); ++i) pos_[list_[i]] = static_cast<int>(i);
  }
  int size() const { return static_cast<int>(list_.size()); }
  const std::vector<int>& at(int i) const { return list_[i]; }
  const std::vector<std::vector<int>>& list() const { return list_; }
  int find(const std::vector<int>& m) const {
    auto it = pos_.find(m);
    return it == pos_.end() ? -1 : it->second;
  }

private:
  std::vector<std::vector<int>> list_;
  std::map<std::vector<int>, int> pos_;
};

/// All strictly increasing k-subsets of {1..n}, lexicographic.
inline std::vector<std::vector<int>> subsets_of_size(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  std::vector<int> cur(k);
  for (int i = 0; i < k; ++i) cur[i] = i + 1;
  for (;;) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[i] == n - (k - 1 - i)) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  if (k == 0) { out.clear(); out.push_back({}); }
  return out;
}

}  // namespace taut
