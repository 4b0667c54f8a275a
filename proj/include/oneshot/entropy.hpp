#pragma once

#include <string_view>

#include "oneshot/pmf.hpp"

namespace oneshot {

// Extended Renyi order: -inf, finite alpha (alpha != 1), 1, 0, +inf.
// finite(1) is routed to the Shannon case so the limit point is never hit
// by the power-sum formula.
struct EntropyOrder {
  enum class Kind { neg_infinity, finite, one, zero, infinity };

  Kind kind = Kind::one;
  double alpha = 1.0;  // meaningful only for Kind::finite

  static EntropyOrder neg_infinity() { return {Kind::neg_infinity, 0.0}; }
  static EntropyOrder zero() { return {Kind::zero, 0.0}; }
  static EntropyOrder one() { return {Kind::one, 1.0}; }
  static EntropyOrder infinity() { return {Kind::infinity, 0.0}; }
  static EntropyOrder finite(double alpha) {
    if (alpha == 1.0) return one();
    return {Kind::finite, alpha};
  }
};

// All entropies are in bits; 0 log 0 = 0 throughout.
double shannon(const Pmf& p);
double shannon(const JointPmf& p);

// H_0 = log2 |support|, H_inf = -log2 max p, H_-inf = -log2 min positive p,
// finite alpha: (1/(1-alpha)) log2 sum_{p>0} p^alpha (support-restricted so
// negative orders stay finite).
double renyi(const Pmf& p, EntropyOrder order);
double renyi(const JointPmf& p, EntropyOrder order);

// Conditional order-alpha entropy with the optimization over rows placed
// outside the sum. Rows of zero marginal mass are skipped. Order one is the
// literal alpha -> 1 limit of that form: max_y H(X | Y=y), which is not the
// Shannon average. Extra axes are summed out first.
double renyi_conditional(const JointPmf& joint, std::string_view target_axis,
                         std::string_view given_axis, EntropyOrder order);

}  // namespace oneshot
