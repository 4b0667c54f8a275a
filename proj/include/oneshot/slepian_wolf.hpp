#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "oneshot/hashing.hpp"
#include "oneshot/report.hpp"
#include "oneshot/typical.hpp"

namespace oneshot {

// Converse-style floor on the encoding lengths: conditional order-0 smooth
// entropies (greedy upper bounds, flagged) and the exact joint order-0 value.
struct SwLowerBounds {
  double l_x = 0.0;
  double l_y = 0.0;
  double l_sum = 0.0;
  bool l_x_heuristic = true;
  bool l_y_heuristic = true;
};

struct SwRateRegion {
  SwLowerBounds lower;
  double achievable_x = 0.0;    // xi_max(XY) - xi_min(Y) - log2 eps1
  double achievable_y = 0.0;    // xi_max(XY) - xi_min(X) - log2 eps2
  double achievable_sum = 0.0;  // xi_max(XY) - log2 eps3
  bool clamped_x = false;       // true when a negative value was clamped to 0
  bool clamped_y = false;
  bool clamped_sum = false;
  EpsilonBudget budget;
  double delta = 0.0;
  XiBounds xi_xy, xi_x, xi_y;
};

SwLowerBounds sw_lower_bounds(const JointPmf& joint, double eps);

// DomainError when the typical-set tail at this delta exceeds eps0.
SwRateRegion sw_achievable_region(const JointPmf& joint, const EpsilonBudget& budget, double delta,
                                  const EnumCaps& caps = {});

// Hash-based protocol instance. The shared randomness is the pair of seeds,
// drawn once per trial and visible to the decoder.
struct SwProtocol {
  HashSeed seed_x, seed_y;
  unsigned len_x = 0, len_y = 0;
  const TypicalSet* decoder_set = nullptr;  // built from the joint being encoded
};

// Integer lengths from the real-valued region: ceil each single-side length,
// then grow the smaller one until the sum constraint is met.
std::pair<unsigned, unsigned> sw_pick_lengths(const SwRateRegion& region);

std::uint64_t sw_encode_x(std::size_t x_index, const SwProtocol& proto);
std::uint64_t sw_encode_y(std::size_t y_index, const SwProtocol& proto);

struct SwDecodeResult {
  enum class Outcome { decoded, no_candidate, ambiguous };
  Outcome outcome = Outcome::no_candidate;
  std::size_t x_index = 0, y_index = 0;
};

// Scan the decoder set in fixed order for pairs matching both codes; succeed
// only on a unique match. Zero or multiple candidates are decoding errors,
// not faults.
SwDecodeResult sw_decode(std::uint64_t code_x, std::uint64_t code_y, const SwProtocol& proto);

// eps0 + 2^{ximax(XY)-ximin(Y)-lx} + 2^{ximax(XY)-ximin(X)-ly}
//      + 2^{ximax(XY)-lx-ly}.
double sw_union_bound(const JointPmf& joint, unsigned len_x, unsigned len_y, double delta,
                      double eps0, const EnumCaps& caps = {});

SimulationReport sw_simulate(const JointPmf& joint, unsigned len_x, unsigned len_y, double delta,
                             std::uint64_t trials, std::uint64_t master_seed, double target_epsilon,
                             double eps0, SimMode mode = SimMode::per_draw,
                             const EnumCaps& caps = {});

}  // namespace oneshot
