#pragma once

#include <optional>
#include <vector>

#include "oneshot/pmf.hpp"
#include "oneshot/smoothing.hpp"

namespace oneshot {

// One blocklength of a convergence scan toward the Shannon limit.
struct ConvergenceRow {
  int n = 0;
  double value_per_n = 0.0;      // smooth order--inf entropy of the n-fold, per copy
  double companion_per_n = 0.0;  // smooth order-0 entropy of the n-fold, per copy
  double target = 0.0;           // Shannon entropy of a single copy
};

// Tail bound 2^{-n delta^2 / (2 log2^2(|X|+3))} on the deviation of the
// n-fold surprisal from its mean.
double surprisal_deviation_bound(int n, double delta, std::uint64_t alphabet_size);

// Blocklength threshold sqrt(-2 log2(eps0/2) log2^2(|X|+3) /
// (log2^2|X| eps0^2)) past which delta = eps0 meets the tail condition.
double n0_threshold(double eps0, std::uint64_t alphabet_size);

// Rows n = 1..n_max computed with the exact unconditional smoothers on the
// n-fold spectrum. The i.i.d. cap applies to |alphabet|^n.
std::vector<ConvergenceRow> convergence_scan(const Pmf& p, double eps, int n_max,
                                             const EnumCaps& caps = {});

struct TypicalityEntropyBound {
  bool condition_met = false;  // Pr[outside the classical typical set] <= eps
  double typical_mass = 0.0;
  double bound_per_n = 0.0;    // H(X) + eps, valid when the condition holds
  double value_per_n = 0.0;    // exact smooth order--inf value per copy
};

// Constructive upper bound via the classical typical set
// {x^n : |-(1/n) log2 P - H| <= eps}; reports "not met" at blocklengths where
// the set is still too small.
TypicalityEntropyBound typicality_entropy_bound(const Pmf& p, int n, double eps_typ, const EnumCaps& caps = {});

struct SwAsymptoticTargets {
  double h_x_given_y = 0.0;
  double h_y_given_x = 0.0;
  double h_xy = 0.0;
};

SwAsymptoticTargets sw_asymptotic_targets(const JointPmf& joint);

}  // namespace oneshot
