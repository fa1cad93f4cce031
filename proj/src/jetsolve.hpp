#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rational.hpp"
#include "tautsys.hpp"
#include "weyl.hpp"

namespace taut::jets {

/// Jet-space solution dimensions per truncation order, with stabilization
/// verdict. rank_estimate is empty when the truncation-image dimensions do
/// not agree over the final window ("unstable").
struct JetReport {
  std::vector<Rational> base_point;
  std::vector<int> orders;
  std::vector<int> raw_dims;
  std::vector<int> image_dims;  // image of truncation from the largest order
  bool stabilized = false;
  std::optional<int> rank_estimate;
  std::vector<std::string> caveats;
  std::optional<uint64_t> prime;  // set when computed over F_p

  std::string to_json() const;
};

/// Dimension of {order-N jets u at a : every generator kills u up to its
/// guaranteed output order}, over Q, or over F_p when prime is given.
int jet_solution_dim(const tsys::TautSystem& sys, const std::vector<Rational>& a, int N,
                     std::optional<uint64_t> prime = std::nullopt);

/// Jet dimensions for N in [N_min, N_max]; the rank estimate is the common
/// truncation-image dimension over the `window` largest orders strictly
/// below N_max (pre: N_min + window <= N_max).
JetReport rank_estimate(const tsys::TautSystem& sys, const std::vector<Rational>& a, int N_min,
                        int N_max, int window = 3,
                        std::optional<uint64_t> prime = std::nullopt);

/// True iff every generator kills j up to its guaranteed output order.
bool verify_annihilation(const tsys::TautSystem& sys, const weyl::Jet& j);

}  // namespace taut::jets
