#include "rank1.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <sstream>

#include "json.hpp"

namespace taut::rank1 {

using flag::FlagShape;
using flag::PluckerIndex;
using flag::PluckerMonomial;
using flag::PluckerPolynomial;
using flag::StiefelPoint;

namespace {

std::vector<int> range1(int first, int count) {
  std::vector<int> v(count);
  for (int i = 0; i < count; ++i) v[i] = first + i;
  return v;
}

PluckerIndex last_window(const FlagShape& s, int step) {
  int d = s.dim_at(step);
  return PluckerIndex(step, range1(s.n - d + 1, d));
}

PluckerIndex front_window(const FlagShape& s, int step) {
  return PluckerIndex(step, range1(1, s.dim_at(step)));
}

PluckerMonomial power_monomial(const PluckerIndex& idx, int e) {
  return PluckerMonomial(e, idx);
}

// (target step, unordered target entries) per index; resort signs collected
// into the coefficient.
using IndexMapper = std::function<std::pair<int, std::vector<int>>(const PluckerIndex&)>;

PluckerPolynomial transport(const PluckerPolynomial& f, const FlagShape& target,
                            const IndexMapper& mapper) {
  PluckerPolynomial out(target);
  for (const auto& [mono, c] : f.terms()) {
    Rational coeff = c;
    PluckerMonomial m2;
    for (const auto& idx : mono) {
      auto [step, entries] = mapper(idx);
      auto [sorted, sign] = PluckerIndex::from_unordered(step, std::move(entries));
      if (sign == 0) { coeff = Rational(0); break; }
      coeff *= Rational(sign);
      m2.push_back(std::move(sorted));
    }
    out.add_term(std::move(m2), coeff);
  }
  return out;
}

Rank1Certificate make_cert(FlagShape shape, PluckerPolynomial section,
                           std::vector<PluckerIndex> indices, std::shared_ptr<TraceNode> trace) {
  Rank1Certificate c;
  c.shape = std::move(shape);
  c.section = std::move(section);
  std::sort(indices.begin(), indices.end(),
            [](const PluckerIndex& a, const PluckerIndex& b) { return a.step < b.step; });
  c.hyperplane_indices = std::move(indices);
  c.trace = std::move(trace);
  c.validate();
  return c;
}

std::shared_ptr<TraceNode> node(std::string rule, FlagShape shape,
                                std::vector<Rank1Certificate> children = {}) {
  auto t = std::make_shared<TraceNode>();
  t->rule = std::move(rule);
  t->shape = std::move(shape);
  t->children = std::move(children);
  return t;
}

/// Complement transport onto the dual shape: step j -> step r+1-j, entries
/// -> complement. Complements of sorted sets stay sorted, so no signs move.
Rank1Certificate apply_dual(const Rank1Certificate& c, const std::string& rule) {
  FlagShape dual = c.shape.dual();
  const int r = c.shape.steps();
  const int n = c.shape.n;
  auto mapper = [&](const PluckerIndex& idx) -> std::pair<int, std::vector<int>> {
    std::vector<int> comp;
    size_t k = 0;
    for (int e = 1; e <= n; ++e) {
      if (k < idx.entries.size() && idx.entries[k] == e) { ++k; continue; }
      comp.push_back(e);
    }
    return {r + 1 - idx.step, comp};
  };
  PluckerPolynomial sec = transport(c.section, dual, mapper);
  std::vector<PluckerIndex> idxs;
  for (const auto& J : c.hyperplane_indices) {
    auto [step, comp] = mapper(J);
    idxs.emplace_back(step, comp);
  }
  auto t = node(rule, dual, {c});
  return make_cert(dual, std::move(sec), std::move(idxs), std::move(t));
}

/// Signed relabeling e -> perm[e-1] of ambient indices (1-based image list).
Rank1Certificate apply_permutation(const Rank1Certificate& c, const std::vector<int>& perm) {
  auto mapper = [&](const PluckerIndex& idx) -> std::pair<int, std::vector<int>> {
    std::vector<int> e;
    for (int v : idx.entries) e.push_back(perm[v - 1]);
    return {idx.step, e};
  };
  PluckerPolynomial sec = transport(c.section, c.shape, mapper);
  std::vector<PluckerIndex> idxs;
  for (const auto& J : c.hyperplane_indices) {
    auto [step, e] = mapper(J);
    idxs.push_back(PluckerIndex::from_unordered(step, e).first);
  }
  auto t = node("permute", c.shape, {c});
  t->perm = perm;
  return make_cert(c.shape, std::move(sec), std::move(idxs), std::move(t));
}

/// Rearranges indices so the recorded last-step index becomes the last
/// window (x_{n-d_r+1..n}), preserving divisibility power. No-op when the
/// section is already divisible by the required power of the last window.
Rank1Certificate normalize_last(const Rank1Certificate& c, int min_power) {
  const int r = c.shape.steps();
  PluckerIndex lastw = last_window(c.shape, r);
  if (c.section.divisible_by(power_monomial(lastw, min_power))) {
    if (c.hyperplane_indices[r - 1] == lastw) return c;
    Rank1Certificate out = c;
    out.hyperplane_indices[r - 1] = lastw;
    out.validate();
    return out;
  }
  const PluckerIndex& J = c.hyperplane_indices[r - 1];
  if (!c.section.divisible_by(power_monomial(J, min_power)))
    throw NoCaseMatches("normalize_last: recorded index lacks required power " +
                        std::to_string(min_power) + " on " + c.shape.str());
  std::vector<int> perm(c.shape.n);
  int lo = 1, hi = c.shape.n - static_cast<int>(J.entries.size()) + 1;
  size_t k = 0;
  for (int e = 1; e <= c.shape.n; ++e) {
    if (k < J.entries.size() && J.entries[k] == e) {
      perm[e - 1] = hi++;
      ++k;
    } else {
      perm[e - 1] = lo++;
    }
  }
  return apply_permutation(c, perm);
}

}  // namespace

void Rank1Certificate::validate() const {
  if (section.multidegree() != flag::anticanonical_multidegree(shape))
    throw std::logic_error("Rank1Certificate: multidegree != anticanonical for " + shape.str());
  if (static_cast<int>(hyperplane_indices.size()) != shape.steps())
    throw std::logic_error("Rank1Certificate: need one hyperplane index per step");
  if (!flag::hyperplane_property_check(section, hyperplane_indices))
    throw std::logic_error("Rank1Certificate: hyperplane property fails for " + shape.str());
}

Rank1Certificate grassmannian_cyclic_rank1(int d, int n) {
  FlagShape shape({d}, n);
  PluckerMonomial mono;
  Rational coeff(1);
  for (int s = 0; s < n; ++s) {
    std::vector<int> e(d);
    for (int t = 0; t < d; ++t) e[t] = (s + t) % n + 1;
    auto [idx, sign] = PluckerIndex::from_unordered(1, std::move(e));
    coeff *= Rational(sign);
    mono.push_back(std::move(idx));
  }
  PluckerPolynomial sec = PluckerPolynomial::monomial(shape, std::move(mono), coeff);
  return make_cert(shape, std::move(sec), {front_window(shape, 1)}, node("cyclic", shape));
}

Rank1Certificate onestep_rank1(int d, int n) {
  FlagShape shape({d}, n);
  if (n == 2 * d) {
    PluckerIndex lo = front_window(shape, 1);
    PluckerIndex hi = last_window(shape, 1);
    PluckerMonomial mono = power_monomial(lo, d);
    PluckerMonomial hi_part = power_monomial(hi, d);
    mono.insert(mono.end(), hi_part.begin(), hi_part.end());
    PluckerPolynomial sec = PluckerPolynomial::monomial(shape, std::move(mono), Rational(1));
    return make_cert(shape, std::move(sec), {hi}, node("onestep-base", shape));
  }
  if (n > 2 * d) {
    Rank1Certificate inner = onestep_rank1(d, n - d);
    auto id_map = [&](const PluckerIndex& idx) -> std::pair<int, std::vector<int>> {
      return {1, idx.entries};
    };
    PluckerPolynomial sec = transport(inner.section, shape, id_map);
    PluckerIndex hi = last_window(shape, 1);
    sec = sec * PluckerPolynomial::monomial(shape, power_monomial(hi, d), Rational(1));
    auto t = node("onestep-split", shape, {inner});
    t->l = d;
    return make_cert(shape, std::move(sec), {hi}, std::move(t));
  }
  // n < 2d: complement of the (n-d, n) construction; divisor moves to the
  // front window with power n-d.
  Rank1Certificate dual_side = onestep_rank1(n - d, n);
  return apply_dual(dual_side, "dual");
}

Rank1Certificate partition_rank1(int d, const std::vector<int>& partition) {
  int n = 0;
  for (int l : partition) {
    if (l < d) throw BadPartition("partition_rank1: every part must be >= d");
    n += l;
  }
  if (partition.empty()) throw BadPartition("partition_rank1: empty partition");
  FlagShape shape({d}, n);

  PluckerPolynomial sec = PluckerPolynomial::monomial(shape, {}, Rational(1));
  auto t = node("partition", shape);
  t->block_sizes = partition;
  int offset = 0;
  for (int l : partition) {
    if (l == d) {
      // point block: contributes (x_{offset+1..offset+d})^d
      PluckerIndex J(1, range1(offset + 1, d));
      sec = sec * PluckerPolynomial::monomial(shape, power_monomial(J, d), Rational(1));
      t->child_block.push_back(-1);
    } else {
      Rank1Certificate blk = onestep_rank1(d, l);
      auto shift = [&](const PluckerIndex& idx) -> std::pair<int, std::vector<int>> {
        std::vector<int> e;
        for (int v : idx.entries) e.push_back(v + offset);
        return {1, e};
      };
      sec = sec * transport(blk.section, shape, shift);
      t->child_block.push_back(static_cast<int>(t->children.size()));
      t->children.push_back(std::move(blk));
    }
    offset += l;
  }
  return make_cert(shape, std::move(sec), {front_window(shape, 1)}, std::move(t));
}

namespace {

Rank1Certificate rstep_impl(const FlagShape& shape, bool allow_dual);

// Case 1: d_{r-1} + d_r < n.  f = bar f_1 . bar f_2 . (x_{J_r})^{-d_{r-1}}
// with f_1 on F(d_1..d_{r-1}, d_r) in the last d_r coordinates and f_2 a
// 1-step section with (x_{J_r})^k | f_2, k = min(d_r, n-d_r) > d_{r-1}.
Rank1Certificate build_case1(const FlagShape& shape) {
  const int r = shape.steps(), n = shape.n;
  const int dr = shape.dim_at(r), drm1 = shape.dim_at(r - 1);
  std::vector<int> d1(shape.dims.begin(), shape.dims.end() - 1);
  Rank1Certificate c1 = rstep_impl(FlagShape(d1, dr), true);
  Rank1Certificate c2 = normalize_last(onestep_rank1(dr, n), std::min(dr, n - dr));

  const int off = n - dr;
  auto shift = [&](const PluckerIndex& idx) -> std::pair<int, std::vector<int>> {
    std::vector<int> e;
    for (int v : idx.entries) e.push_back(v + off);
    return {idx.step, e};
  };
  PluckerPolynomial f1 = transport(c1.section, shape, shift);
  auto to_step_r = [&](const PluckerIndex& idx) -> std::pair<int, std::vector<int>> {
    return {r, idx.entries};
  };
  PluckerPolynomial f2 = transport(c2.section, shape, to_step_r);
  PluckerIndex Jr = last_window(shape, r);
  PluckerPolynomial sec = (f1 * f2).divide_exact(power_monomial(Jr, drm1));

  std::vector<PluckerIndex> idxs;
  for (const auto& J : c1.hyperplane_indices) {
    auto [step, e] = shift(J);
    idxs.push_back(PluckerIndex::from_unordered(step, e).first);
  }
  idxs.push_back(Jr);
  auto t = node("case1", shape, {c1, c2});
  return make_cert(shape, std::move(sec), std::move(idxs), std::move(t));
}

// Case 2: r = 2, d_1 + d_2 = n.  f = (x_{1..d_1})^{d_2} (x_{d_1+1..n})^{d_2}.
Rank1Certificate build_case2(const FlagShape& shape) {
  const int d1 = shape.dim_at(1), d2 = shape.dim_at(2);
  PluckerIndex J1 = front_window(shape, 1);
  PluckerIndex J2 = last_window(shape, 2);
  PluckerMonomial mono = power_monomial(J1, d2);
  PluckerMonomial p2 = power_monomial(J2, d2);
  mono.insert(mono.end(), p2.begin(), p2.end());
  (void)d1;
  PluckerPolynomial sec = PluckerPolynomial::monomial(shape, std::move(mono), Rational(1));
  return make_cert(shape, std::move(sec), {J1, J2}, node("case2", shape));
}

// Case 3: d_{r-1} + d_r = n, r >= 3.
// f = bar f_1 . bar f_2 . (x_{1..d_{r-1}})^{-d_{r-2}}, f_2 the case-2 section
// of F(d_{r-1}, d_r, n), f_1 on F(d_1..d_{r-2}, d_{r-1}) in the first
// d_{r-1} coordinates.
Rank1Certificate build_case3(const FlagShape& shape) {
  const int r = shape.steps(), n = shape.n;
  const int drm1 = shape.dim_at(r - 1), drm2 = shape.dim_at(r - 2);
  std::vector<int> d1(shape.dims.begin(), shape.dims.end() - 2);
  Rank1Certificate c1 = rstep_impl(FlagShape(d1, drm1), true);
  Rank1Certificate c2 = rstep_impl(FlagShape({drm1, shape.dim_at(r)}, n), true);

  auto keep = [&](const PluckerIndex& idx) -> std::pair<int, std::vector<int>> {
    return {idx.step, idx.entries};
  };
  PluckerPolynomial f1 = transport(c1.section, shape, keep);
  auto lift = [&](const PluckerIndex& idx) -> std::pair<int, std::vector<int>> {
    return {idx.step + (r - 2), idx.entries};
  };
  PluckerPolynomial f2 = transport(c2.section, shape, lift);
  PluckerIndex Jrm1(r - 1, range1(1, drm1));
  PluckerPolynomial sec = (f1 * f2).divide_exact(power_monomial(Jrm1, drm2));

  std::vector<PluckerIndex> idxs = c1.hyperplane_indices;
  idxs.push_back(Jrm1);
  idxs.push_back(last_window(shape, r));
  auto t = node("case3", shape, {c1, c2});
  return make_cert(shape, std::move(sec), std::move(idxs), std::move(t));
}

// Cases 5/6 share the splitting C^n = C^(n-d_a) + C^(d_a) and the section
// shape; case 6 is the degenerate n = 2d_a variant with the extra factor
// x_{1..d_a}.
Rank1Certificate build_case56(const FlagShape& shape, int a, bool case6) {
  const int r = shape.steps(), n = shape.n;
  const int da = shape.dim_at(a);
  const int nt = n - da;

  FlagShape shape1 = case6 ? FlagShape(std::vector<int>(shape.dims.begin(), shape.dims.begin() + (a - 1)), da)
                           : FlagShape(std::vector<int>(shape.dims.begin(), shape.dims.begin() + a), nt);
  std::vector<int> d2;
  for (int i = a + 1; i <= r; ++i) d2.push_back(shape.dim_at(i) - da);
  FlagShape shape2(d2, nt);

  Rank1Certificate c1 = normalize_last(rstep_impl(shape1, true), 1);
  Rank1Certificate c2 = normalize_last(rstep_impl(shape2, true), 1);

  // bar f_1: case 5 keeps indices, case 6 shifts into the last d_a block
  IndexMapper f1map;
  if (case6) {
    f1map = [&](const PluckerIndex& idx) -> std::pair<int, std::vector<int>> {
      std::vector<int> e;
      for (int v : idx.entries) e.push_back(v + nt);
      return {idx.step, e};
    };
  } else {
    f1map = [&](const PluckerIndex& idx) -> std::pair<int, std::vector<int>> {
      return {idx.step, idx.entries};
    };
  }
  PluckerPolynomial f1 = transport(c1.section, shape, f1map);

  // tilde f_2: step j -> a+j, J' -> J' union (n-d_a+1..n)
  std::vector<int> Jtail = range1(n - da + 1, da);
  auto f2map = [&](const PluckerIndex& idx) -> std::pair<int, std::vector<int>> {
    std::vector<int> e = idx.entries;
    e.insert(e.end(), Jtail.begin(), Jtail.end());
    return {idx.step + a, e};
  };
  PluckerPolynomial f2 = transport(c2.section, shape, f2map);

  PluckerIndex J(a, Jtail);
  int xj_power = case6 ? shape.dim_at(a + 1) - shape.dim_at(a - 1) - 1
                       : shape.dim_at(a + 1) + da - n;
  PluckerPolynomial sec = f1 * f2;
  sec = sec * PluckerPolynomial::monomial(shape, power_monomial(J, xj_power), Rational(1));
  if (case6) {
    PluckerIndex Jfront(a, range1(1, da));
    sec = sec * PluckerPolynomial::monomial(shape, power_monomial(Jfront, 1), Rational(1));
  }

  std::vector<PluckerIndex> idxs;
  for (const auto& Ji : c1.hyperplane_indices) {
    auto [step, e] = f1map(Ji);
    if (static_cast<int>(idxs.size()) < a - 1)
      idxs.push_back(PluckerIndex::from_unordered(step, e).first);
  }
  idxs.push_back(J);
  for (const auto& Ji : c2.hyperplane_indices) {
    auto [step, e] = f2map(Ji);
    idxs.push_back(PluckerIndex::from_unordered(step, e).first);
  }
  auto t = node(case6 ? "case6" : "case5", shape, {c1, c2});
  t->a = a;
  return make_cert(shape, std::move(sec), std::move(idxs), std::move(t));
}

// Case 7: n = d_{a-1} + d_a, a >= 3.
// f = bar f_1 . bar f_2 . (x_{1..d_{a-1}})^{-d_{a-2}}, f_2 on
// F(d_{a-1},..,d_r, n) via case 4, f_1 on F(d_1..d_{a-2}, d_{a-1}).
Rank1Certificate build_case7(const FlagShape& shape, int a) {
  const int r = shape.steps(), n = shape.n;
  const int dam1 = shape.dim_at(a - 1), dam2 = shape.dim_at(a - 2);
  std::vector<int> d1(shape.dims.begin(), shape.dims.begin() + (a - 2));
  std::vector<int> d2(shape.dims.begin() + (a - 2), shape.dims.end());
  Rank1Certificate c1 = rstep_impl(FlagShape(d1, dam1), true);
  Rank1Certificate c2 = rstep_impl(FlagShape(d2, n), true);

  auto keep = [&](const PluckerIndex& idx) -> std::pair<int, std::vector<int>> {
    return {idx.step, idx.entries};
  };
  PluckerPolynomial f1 = transport(c1.section, shape, keep);
  auto lift = [&](const PluckerIndex& idx) -> std::pair<int, std::vector<int>> {
    return {idx.step + (a - 2), idx.entries};
  };
  PluckerPolynomial f2 = transport(c2.section, shape, lift);
  PluckerIndex Jam1(a - 1, range1(1, dam1));
  PluckerPolynomial sec = (f1 * f2).divide_exact(power_monomial(Jam1, dam2));

  std::vector<PluckerIndex> idxs = c1.hyperplane_indices;
  idxs.push_back(Jam1);
  for (size_t i = 1; i < c2.hyperplane_indices.size(); ++i) {
    auto [step, e] = lift(c2.hyperplane_indices[i]);
    idxs.push_back(PluckerIndex::from_unordered(step, e).first);
  }
  auto t = node("case7", shape, {c1, c2});
  t->a = a;
  return make_cert(shape, std::move(sec), std::move(idxs), std::move(t));
}

Rank1Certificate rstep_impl(const FlagShape& shape, bool allow_dual) {
  const int r = shape.steps(), n = shape.n;
  if (r == 1) return onestep_rank1(shape.dim_at(1), n);
  const int top = shape.dim_at(r - 1) + shape.dim_at(r);

  if (r == 2 && shape.dim_at(1) + shape.dim_at(2) == n) return build_case2(shape);
  if (top < n) return build_case1(shape);
  if (top == n) return build_case3(shape);

  // d_{r-1} + d_r > n: locate the unique crossing a with
  // d_a + d_{a+1} > n >= d_{a-1} + d_a  (d_0 = 0)
  int a = 0;
  for (int i = 1; i < r; ++i) {
    if (shape.dim_at(i) + shape.dim_at(i + 1) > n) { a = i; break; }
  }
  if (a >= 2) {
    const int da = shape.dim_at(a);
    if (n > 2 * da) return build_case56(shape, a, false);
    if (n == 2 * da) return build_case56(shape, a, true);
    if (n == shape.dim_at(a - 1) + da) {
      if (a == 2) {
        // case 4: dualize into case 3
        Rank1Certificate cd = rstep_impl(shape.dual(), false);
        return apply_dual(cd, "case4-dual");
      }
      return build_case7(shape, a);
    }
  }
  // a = 1, or d_{a-1}+d_a < n < 2d_a: not covered directly; the dual shape is
  if (allow_dual) {
    Rank1Certificate cd = rstep_impl(shape.dual(), false);
    return apply_dual(cd, "dual-fallback");
  }
  throw NoCaseMatches("rstep_rank1: no case matches " + shape.str() + " or its dual");
}

}  // namespace

Rank1Certificate rstep_rank1(const FlagShape& shape) { return rstep_impl(shape, true); }

namespace {

nlohmann::json trace_json(const TraceNode& t);

nlohmann::json cert_json(const Rank1Certificate& c) {
  nlohmann::json j;
  j["shape"] = c.shape.dims;
  j["shape"].push_back(c.shape.n);
  j["section"] = nlohmann::json::parse(c.section.to_json());
  j["multidegree"] = c.section.multidegree();
  j["hyperplane_indices"] = nlohmann::json::array();
  for (const auto& J : c.hyperplane_indices) j["hyperplane_indices"].push_back({J.step, J.entries});
  if (c.trace) j["trace"] = trace_json(*c.trace);
  return j;
}

nlohmann::json trace_json(const TraceNode& t) {
  nlohmann::json j;
  j["rule"] = t.rule;
  j["shape"] = t.shape.str();
  if (t.a) j["a"] = t.a;
  if (t.l) j["l"] = t.l;
  if (!t.perm.empty()) j["perm"] = t.perm;
  if (!t.block_sizes.empty()) {
    j["block_sizes"] = t.block_sizes;
    j["child_block"] = t.child_block;
  }
  j["children"] = nlohmann::json::array();
  for (const auto& c : t.children) j["children"].push_back(cert_json(c));
  return j;
}

}  // namespace

std::string Rank1Certificate::to_json() const {
  nlohmann::json j = cert_json(*this);
  j["schema_version"] = 1;
  return j.dump(2);
}

// ---------------------------------------------------------------------------
// verify_decomposition
// ---------------------------------------------------------------------------

namespace {

struct Verifier {
  int samples;
  std::mt19937_64 rng;
  VerifyReport report;

  explicit Verifier(int s, uint64_t seed) : samples(s), rng(seed) {}

  StiefelPoint sample_on_divisor_complement(const Rank1Certificate& c, int retries = 300) {
    for (int t = 0; t < retries; ++t) {
      StiefelPoint m = flag::random_stiefel(c.shape, rng);
      if (!flag::section_eval(c.section, m).is_zero()) return m;
    }
    throw SampleDegenerate("could not sample off the divisor on " + c.shape.str());
  }

  QMat random_gl(int d, int retries = 300) {
    std::uniform_int_distribution<int> num(-20, 20);
    std::uniform_int_distribution<int> den(1, 5);
    for (int t = 0; t < retries; ++t) {
      QMat g(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) g(i, j) = Rational(num(rng), den(rng));
      if (!g.det().is_zero()) return g;
    }
    throw SampleDegenerate("could not sample an invertible matrix");
  }

  static QMat rows_of(const QMat& m, const std::vector<int>& rows1based) {
    std::vector<int> r;
    for (int e : rows1based) r.push_back(e - 1);
    return m.select_rows(r);
  }

  static QMat stack(const QMat& top, const QMat& bottom) {
    QMat out(top.rows() + bottom.rows(), top.cols());
    for (int i = 0; i < top.rows(); ++i)
      for (int j = 0; j < top.cols(); ++j) out(i, j) = top(i, j);
    for (int i = 0; i < bottom.rows(); ++i)
      for (int j = 0; j < bottom.cols(); ++j) out(top.rows() + i, j) = bottom(i, j);
    return out;
  }

  static QMat hstack(const QMat& left, const QMat& right) {
    QMat out(left.rows(), left.cols() + right.cols());
    for (int i = 0; i < left.rows(); ++i) {
      for (int j = 0; j < left.cols(); ++j) out(i, j) = left(i, j);
      for (int j = 0; j < right.cols(); ++j) out(i, left.cols() + j) = right(i, j);
    }
    return out;
  }

  void expect(VerifyNodeResult& res, bool ok, const std::string& what) {
    ++res.checks;
    if (ok)
      ++res.passed;
    else
      res.failures.push_back(what);
  }

  void walk(const Rank1Certificate& cert) {
    check_node(cert);
    if (cert.trace)
      for (const auto& child : cert.trace->children) walk(child);
  }

  void check_node(const Rank1Certificate& cert) {
    VerifyNodeResult res;
    res.rule = cert.trace ? cert.trace->rule : "leaf";
    res.shape = cert.shape.str();
    const std::string& rule = res.rule;
    try {
      if (rule == "case1")
        check_case1(cert, res);
      else if (rule == "case3" || rule == "case7")
        check_case37(cert, res);
      else if (rule == "case5" || rule == "case6")
        check_case56(cert, res);
      else if (rule == "onestep-split")
        check_onestep_split(cert, res);
      else if (rule == "partition")
        check_partition(cert, res);
      else if (rule == "permute")
        check_permute(cert, res);
      else if (rule == "dual" || rule == "dual-fallback" || rule == "case4-dual")
        check_dual(cert, res);
      else
        check_leaf(cert, res);
    } catch (const SampleDegenerate& e) {
      expect(res, false, std::string("sampling degenerate: ") + e.what());
    }
    report.nodes.push_back(std::move(res));
  }

  // Leaves: sampled special sections must satisfy the block conditions.
  void check_leaf(const Rank1Certificate& cert, VerifyNodeResult& res) {
    for (int s = 0; s < samples; ++s) {
      StiefelPoint m = sample_on_divisor_complement(cert);
      StiefelPoint ms = flag::special_section(m, cert.hyperplane_indices);
      bool ok = true;
      for (const auto& J : cert.hyperplane_indices) {
        QMat blk = rows_of(ms.product_from(J.step), J.entries);
        if (blk != QMat::identity(blk.rows())) ok = false;
      }
      expect(res, ok, "special-section block conditions");
    }
  }

  void check_permute(const Rank1Certificate& cert, VerifyNodeResult& res) {
    const Rank1Certificate& src = cert.trace->children[0];
    const auto& perm = cert.trace->perm;
    for (int s = 0; s < samples; ++s) {
      StiefelPoint m = sample_on_divisor_complement(src);
      StiefelPoint pm = m;
      const int r = m.shape.steps();
      QMat& top = pm.m(r);
      QMat orig = m.m(r);
      for (int i = 0; i < orig.rows(); ++i)
        for (int j = 0; j < orig.cols(); ++j) top(perm[i] - 1, j) = orig(i, j);
      Rational lhs = flag::section_eval(cert.section, pm);
      Rational rhs = flag::section_eval(src.section, m);
      expect(res, lhs == rhs, "permuted section value");
    }
  }

  // Exact rational Stiefel representative of the dual flag: nested kernels.
  StiefelPoint dual_stiefel(const StiefelPoint& m) {
    const FlagShape dual = m.shape.dual();
    const int r = m.shape.steps();
    std::vector<QMat> bases(r + 1);
    for (int j = 1; j <= r; ++j) {
      QMat p = m.product_from(r + 1 - j);
      // transpose
      QMat pt(p.cols(), p.rows());
      for (int i = 0; i < p.rows(); ++i)
        for (int c = 0; c < p.cols(); ++c) pt(c, i) = p(i, c);
      bases[j] = pt.kernel();
      if (bases[j].cols() != dual.dim_at(j)) throw SampleDegenerate("dual kernel rank drop");
    }
    StiefelPoint out(dual);
    out.m(r) = bases[r];
    for (int j = r - 1; j >= 1; --j) out.m(j) = bases[j + 1].solve(bases[j]);
    return out;
  }

  static int shuffle_sign(const std::vector<int>& J, int n) {
    // sign of the permutation (J, complement) of (1..n)
    int inv = 0;
    std::vector<bool> in(n + 1, false);
    for (int e : J) in[e] = true;
    int seen_comp = 0;
    for (int e = 1; e <= n; ++e) {
      if (!in[e]) {
        ++seen_comp;
      } else {
        inv += seen_comp;  // complement elements smaller than e precede it
      }
    }
    return inv % 2 == 0 ? 1 : -1;
  }

  void check_dual(const Rank1Certificate& cert, VerifyNodeResult& res) {
    const Rank1Certificate& src = cert.trace->children[0];
    const int r = src.shape.steps(), n = src.shape.n;
    for (int s = 0; s < samples; ++s) {
      StiefelPoint m = sample_on_divisor_complement(src);
      if (!m.ranks_ok()) { --s; continue; }
      StiefelPoint md = dual_stiefel(m);

      // per-step normalization constants kappa_j, and constancy of
      // sign-corrected complementary-minor ratios
      std::vector<Rational> kappa(r + 1, Rational(0));
      bool consistent = true;
      for (int pstep = 1; pstep <= r; ++pstep) {
        int dstep = r + 1 - pstep;
        int checked = 0;
        for (const auto& J : subsets_of_size(n, src.shape.dim_at(pstep))) {
          Rational vj = flag::plucker_eval(m, PluckerIndex(pstep, J));
          if (vj.is_zero()) continue;
          std::vector<int> comp;
          size_t k = 0;
          for (int e = 1; e <= n; ++e) {
            if (k < J.size() && J[k] == e) { ++k; continue; }
            comp.push_back(e);
          }
          Rational vc = flag::plucker_eval(md, PluckerIndex(dstep, comp));
          Rational ratio = vc / vj * Rational(shuffle_sign(J, n));
          if (kappa[pstep].is_zero())
            kappa[pstep] = ratio;
          else if (kappa[pstep] != ratio)
            consistent = false;
          if (++checked >= 4) break;
        }
        if (kappa[pstep].is_zero()) consistent = false;
      }
      expect(res, consistent, "complementary-minor ratios constant per step");
      if (!consistent) continue;

      // value identity: dual section at the dual point matches the source
      // section value times the per-factor signs and per-step constants
      const PluckerMonomial& mono = src.section.terms().begin()->first;
      Rational predicted = flag::section_eval(src.section, m);
      for (const auto& idx : mono)
        predicted *= kappa[idx.step] * Rational(shuffle_sign(idx.entries, n));
      Rational actual = flag::section_eval(cert.section, md);
      expect(res, actual == predicted, "dual section value identity");
    }
  }

  void check_onestep_split(const Rank1Certificate& cert, VerifyNodeResult& res) {
    const Rank1Certificate& c1 = cert.trace->children[0];
    const int n = cert.shape.n, d = cert.shape.dim_at(1);
    for (int s = 0; s < samples; ++s) {
      StiefelPoint m1 = sample_on_divisor_complement(c1);
      QMat m2 = random_gl(d);
      QMat D = m2;  // J-block of the embedded point block is the block itself
      StiefelPoint m(cert.shape);
      m.m(1) = stack(m1.m(1) * D, m2);
      Rational f = flag::section_eval(cert.section, m);
      Rational f1 = flag::section_eval(c1.section, m1);
      Rational rhs = D.det().pow(n - d) * f1 * m2.det().pow(d);
      expect(res, f == rhs, "onestep split value identity");
      // inverse: top block times bottom-block inverse recovers m1
      QMat top = rows_of(m.m(1), range1(1, n - d));
      QMat bot = rows_of(m.m(1), range1(n - d + 1, d));
      expect(res, top * bot.inverse() == m1.m(1), "onestep split inverse round-trip");
    }
  }

  void check_case1(const Rank1Certificate& cert, VerifyNodeResult& res) {
    const Rank1Certificate& c1 = cert.trace->children[0];
    const Rank1Certificate& c2 = cert.trace->children[1];
    const FlagShape& shape = cert.shape;
    const int r = shape.steps();
    const int drm1 = shape.dim_at(r - 1);
    for (int s = 0; s < samples; ++s) {
      StiefelPoint m1 = sample_on_divisor_complement(c1);
      StiefelPoint m2 = sample_on_divisor_complement(c2);
      QMat D = rows_of(m2.m(1), c2.hyperplane_indices[0].entries);
      StiefelPoint m(shape);
      for (int i = 1; i <= r - 2; ++i) m.m(i) = m1.m(i);
      m.m(r - 1) = D.inverse() * m1.m(r - 1);
      m.m(r) = m2.m(1);
      Rational f = flag::section_eval(cert.section, m);
      Rational f1 = flag::section_eval(c1.section, m1);
      Rational f2 = flag::section_eval(c2.section, m2);
      expect(res, f * D.det().pow(drm1) == f1 * f2, "case1 value identity");
      QMat back = rows_of(m.m(r), c2.hyperplane_indices[0].entries) * m.m(r - 1);
      expect(res, back == m1.m(r - 1), "case1 inverse round-trip");
    }
  }

  // Cases 3 and 7 share the pattern: the twist D is the leading block of the
  // full product of the second factor, and it multiplies the next factor
  // down.
  void check_case37(const Rank1Certificate& cert, VerifyNodeResult& res) {
    const Rank1Certificate& c1 = cert.trace->children[0];
    const Rank1Certificate& c2 = cert.trace->children[1];
    const FlagShape& shape = cert.shape;
    const int split = c1.shape.steps();  // steps taken from c1 (r-2 or a-2)
    const int dsplit1 = c1.shape.n;      // ambient of c1 = d_{split+1}
    const int cancel = shape.dim_at(split);  // d_{r-2} or d_{a-2}
    for (int s = 0; s < samples; ++s) {
      StiefelPoint m1 = sample_on_divisor_complement(c1);
      StiefelPoint m2 = sample_on_divisor_complement(c2);
      QMat D = rows_of(m2.product_from(1), range1(1, dsplit1));
      StiefelPoint m(shape);
      for (int i = 1; i <= split - 1; ++i) m.m(i) = m1.m(i);
      m.m(split) = D.inverse() * m1.m(split);
      for (int j = 1; j <= c2.shape.steps(); ++j) m.m(split + j) = m2.m(j);
      Rational f = flag::section_eval(cert.section, m);
      Rational f1 = flag::section_eval(c1.section, m1);
      Rational f2 = flag::section_eval(c2.section, m2);
      expect(res, f * D.det().pow(cancel) == f1 * f2,
             cert.trace->rule + " value identity");
      QMat back = rows_of(m.product_from(split + 1), range1(1, dsplit1)) * m.m(split);
      expect(res, back == m1.m(split), cert.trace->rule + " inverse round-trip");
    }
  }

  void check_case56(const Rank1Certificate& cert, VerifyNodeResult& res) {
    const bool case6 = cert.trace->rule == "case6";
    const Rank1Certificate& c1 = cert.trace->children[0];
    const Rank1Certificate& c2 = cert.trace->children[1];
    const FlagShape& shape = cert.shape;
    const int r = shape.steps(), n = shape.n, a = cert.trace->a;
    const int da = shape.dim_at(a);
    const int nt = n - da;
    for (int s = 0; s < samples; ++s) {
      StiefelPoint m1 = flag::special_section(sample_on_divisor_complement(c1),
                                              c1.hyperplane_indices);
      StiefelPoint m2 = flag::special_section(sample_on_divisor_complement(c2),
                                              c2.hyperplane_indices);
      QMat D = random_gl(da);

      // peel the A_i blocks from T_a using the special-section row blocks
      QMat T = case6 ? D : m1.m(a) * D;
      std::vector<QMat> A(r + 1);
      for (int i = a; i < r; ++i) {
        const auto& Jnext = c2.hyperplane_indices[i - a].entries;
        A[i] = rows_of(T, Jnext);
        QMat pa = m2.product_from(i + 1 - a) * A[i];
        QMat t2(T.rows(), T.cols());
        for (int x = 0; x < T.rows(); ++x)
          for (int y = 0; y < T.cols(); ++y) t2(x, y) = T(x, y) - pa(x, y);
        T = t2;
      }
      A[r] = T;

      StiefelPoint m(shape);
      for (int i = 1; i <= a - 2; ++i) m.m(i) = m1.m(i);
      if (a >= 2) m.m(a - 1) = D.inverse() * m1.m(a - 1);
      {
        QMat bottom = QMat::identity(da);
        m.m(a) = stack(A[a], bottom);
      }
      for (int i = a + 1; i <= r; ++i) {
        QMat tl = m2.m(i - a);
        QMat top = hstack(tl, A[i]);
        QMat bottom = hstack(QMat(da, tl.cols()), QMat::identity(da));
        m.m(i) = stack(top, bottom);
      }

      Rational f = flag::section_eval(cert.section, m);
      Rational f1 = flag::section_eval(c1.section, m1);
      Rational f2 = flag::section_eval(c2.section, m2);
      long expo = case6 ? 1 - (da - shape.dim_at(a - 2))
                        : nt - shape.dim_at(a - 1);
      expect(res, f == f1 * f2 * D.det().pow(expo),
             cert.trace->rule + " value identity");

      // special-section block conditions for the combined indices
      bool blocks_ok = true;
      for (const auto& J : cert.hyperplane_indices) {
        QMat blk = rows_of(m.product_from(J.step), J.entries);
        if (blk != QMat::identity(blk.rows())) blocks_ok = false;
      }
      expect(res, blocks_ok, cert.trace->rule + " special-section blocks");

      // inverse: recover factors and D from m
      QMat Pa = m.product_from(a);
      QMat Drec = case6 ? rows_of(Pa, range1(1, da))
                        : rows_of(Pa, c1.hyperplane_indices[a - 1].entries);
      bool inv_ok = (Drec == D);
      if (a >= 2 && !(Drec * m.m(a - 1) == m1.m(a - 1))) inv_ok = false;
      if (!case6) {
        QMat top = rows_of(Pa, range1(1, nt));
        if (!(top * D.inverse() == m1.m(a))) inv_ok = false;
      }
      for (int i = a + 1; i <= r; ++i) {
        QMat tl(m.m(i).rows() - da, m.m(i).cols() - da);
        for (int x = 0; x < tl.rows(); ++x)
          for (int y = 0; y < tl.cols(); ++y) tl(x, y) = m.m(i)(x, y);
        if (!(tl == m2.m(i - a))) inv_ok = false;
      }
      expect(res, inv_ok, cert.trace->rule + " inverse round-trip");
    }
  }

  void check_partition(const Rank1Certificate& cert, VerifyNodeResult& res) {
    const TraceNode& t = *cert.trace;
    const int d = cert.shape.dim_at(1);
    const int blocks = static_cast<int>(t.block_sizes.size());

    // suffix sections on F(d, l_p + ... + l_s), built once
    std::vector<int> offsets(blocks, 0);
    for (int p = 1; p < blocks; ++p) offsets[p] = offsets[p - 1] + t.block_sizes[p - 1];
    std::vector<std::optional<PluckerPolynomial>> suffix(blocks);
    for (int p = blocks - 1; p >= 0; --p) {
      int L = cert.shape.n - offsets[p];
      if (L == d) continue;  // single trailing point block: value-only
      FlagShape fs({d}, L);
      PluckerPolynomial acc = PluckerPolynomial::monomial(fs, {}, Rational(1));
      for (int q = p; q < blocks; ++q) {
        int off = offsets[q] - offsets[p];
        if (t.child_block[q] < 0) {
          PluckerIndex J(1, range1(off + 1, d));
          acc = acc * PluckerPolynomial::monomial(fs, power_monomial(J, d), Rational(1));
        } else {
          const auto& blk = t.children[t.child_block[q]];
          auto shift = [&](const PluckerIndex& idx) -> std::pair<int, std::vector<int>> {
            std::vector<int> e;
            for (int v : idx.entries) e.push_back(v + off);
            return {1, e};
          };
          acc = acc * transport(blk.section, fs, shift);
        }
      }
      suffix[p] = acc;
    }

    for (int s = 0; s < samples; ++s) {
      std::vector<QMat> mats(blocks);
      std::vector<Rational> vals(blocks);
      for (int p = 0; p < blocks; ++p) {
        if (t.child_block[p] < 0) {
          mats[p] = random_gl(d);
          vals[p] = mats[p].det().pow(d);
        } else {
          const auto& blk = t.children[t.child_block[p]];
          StiefelPoint mp = sample_on_divisor_complement(blk);
          mats[p] = mp.m(1);
          vals[p] = flag::section_eval(blk.section, mp);
        }
      }
      // assemble right-to-left; check each suffix value against its stored
      // section
      QMat T = mats[blocks - 1];
      Rational V = vals[blocks - 1];
      bool ok = true;
      for (int p = blocks - 2; p >= 0; --p) {
        QMat Dp = rows_of(T, range1(1, d));
        if (Dp.det().is_zero()) { ok = false; break; }
        T = stack(mats[p] * Dp, T);
        V = Dp.det().pow(t.block_sizes[p]) * vals[p] * V;
        if (suffix[p]) {
          StiefelPoint sp(FlagShape({d}, T.rows()));
          sp.m(1) = T;
          if (flag::section_eval(*suffix[p], sp) != V) { ok = false; break; }
        }
      }
      expect(res, ok, "partition iterated split identities");
    }
  }
};

}  // namespace

VerifyReport verify_decomposition(const Rank1Certificate& cert, int samples, uint64_t seed) {
  Verifier v(samples, seed);
  v.walk(cert);
  return v.report;
}

std::string VerifyReport::to_json() const {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["all_passed"] = all_passed();
  j["nodes"] = nlohmann::json::array();
  for (const auto& n : nodes) {
    nlohmann::json e;
    e["rule"] = n.rule;
    e["shape"] = n.shape;
    e["checks"] = n.checks;
    e["passed"] = n.passed;
    e["failures"] = n.failures;
    j["nodes"].push_back(std::move(e));
  }
  return j.dump(2);
}

}  // namespace taut::rank1
