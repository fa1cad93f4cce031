#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "flagvar.hpp"

namespace taut::rank1 {

struct BadPartition : std::invalid_argument {
  explicit BadPartition(const std::string& what) : std::invalid_argument(what) {}
};
struct NoCaseMatches : std::logic_error {
  explicit NoCaseMatches(const std::string& what) : std::logic_error(what) {}
};
struct SampleDegenerate : std::runtime_error {
  explicit SampleDegenerate(const std::string& what) : std::runtime_error(what) {}
};

struct Rank1Certificate;

/// One assembly step in the construction of a section. Rules:
///   cyclic, onestep-base, onestep-split, case2 .. case7 (case4 appears as a
///   dual node), dual, dual-fallback, permute, partition, point-block.
struct TraceNode {
  std::string rule;
  flag::FlagShape shape;
  int a = 0;                     // crossing step for cases 5-7
  int l = 0;                     // split size for onestep-split
  std::vector<int> perm;         // permute: 1-based image of each index
  std::vector<int> block_sizes;  // partition blocks
  std::vector<int> child_block;  // index into children per block; -1 = point
  std::vector<Rank1Certificate> children;
};

/// A rank-1 section together with the construction that produced it. The
/// section multidegree always equals the anticanonical multidegree of the
/// shape and the recorded indices witness the hyperplane property.
struct Rank1Certificate {
  flag::FlagShape shape;
  flag::PluckerPolynomial section;
  std::vector<flag::PluckerIndex> hyperplane_indices;  // one per step
  std::shared_ptr<TraceNode> trace;

  Rank1Certificate() : section(flag::FlagShape({1}, 2)) {}

  /// Throws logic_error when either certificate invariant fails.
  void validate() const;
  std::string to_json() const;
};

/// a = x_{1..d} x_{2..d+1} ... x_{n,1,..,d-1}: the cyclic product of shifted
/// index windows (mod n), with resort signs in the coefficient.
Rank1Certificate grassmannian_cyclic_rank1(int d, int n);

/// Rank-1 point of F(d,n) with (x_J)^k | f, k = min(d, n-d): the n = 2d base
/// is (x_{1..d})^d (x_{d+1..n})^d; n > 2d splits off the last d coordinates;
/// n < 2d is the index complement of the (n-d, n) construction.
Rank1Certificate onestep_rank1(int d, int n);

/// f = f_1 ... f_s with block-wise sections on shifted index ranges; each
/// part must be >= d.
Rank1Certificate partition_rank1(int d, const std::vector<int>& partition);

/// Recursive r-step construction (the case analysis on d_{r-1}+d_r vs n and
/// the crossing step a). r = 1 delegates to onestep_rank1; shapes matching
/// no case directly are routed through the dual shape.
Rank1Certificate rstep_rank1(const flag::FlagShape& shape);

struct VerifyNodeResult {
  std::string rule;
  std::string shape;
  int checks = 0;
  int passed = 0;
  std::vector<std::string> failures;
};

struct VerifyReport {
  std::vector<VerifyNodeResult> nodes;
  bool all_passed() const {
    for (const auto& n : nodes)
      if (n.passed != n.checks) return false;
    return true;
  }
  std::string to_json() const;
};

/// Numerically verifies every recursion step of the certificate: section
/// value identities under the forward maps, inverse-map round trips, and
/// special-section block conditions, on `samples` random rational points per
/// node.
VerifyReport verify_decomposition(const Rank1Certificate& cert, int samples, uint64_t seed);

}  // namespace taut::rank1
