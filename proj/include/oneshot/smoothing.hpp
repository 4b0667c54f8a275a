#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "oneshot/entropy.hpp"
#include "oneshot/pmf.hpp"

namespace oneshot {

// Inclusive slack for discrete feasibility decisions (atom removals at the
// budget boundary). Kept at half the documented moved-mass allowance of
// eps + 1e-12 so witnesses stay inside it even after rounding.
inline constexpr double kBudgetSlack = 5e-13;

enum class SmoothingMethod { exact_greedy, greedy_heuristic, exhaustive_oracle };

struct SmoothingResult {
  double value_bits = 0.0;
  Pmf witness;           // optimizing distribution on the original alphabet
  double moved_mass = 0.0;  // tv_distance(input, witness)
  SmoothingMethod method = SmoothingMethod::exact_greedy;
};

struct JointSmoothingResult {
  double value_bits = 0.0;
  JointPmf witness;
  double moved_mass = 0.0;
  SmoothingMethod method = SmoothingMethod::greedy_heuristic;
};

// Smoothing ball: total-variation distance <= eps on the same alphabet.
// All three unconditional smoothers stay within the support of the input
// (removed mass is poured back onto surviving atoms, never onto fresh ones),
// which is what makes the closed forms below exact for this ball convention.

// Minimum achievable support size: drop the cheapest ascending prefix whose
// cumulative mass fits in eps, pour it onto the largest surviving atom.
SmoothingResult smooth_h0(const Pmf& p, double eps);

// Minimum achievable max-mass: water-cut at the level m with sum (p-m)+ = eps,
// clamped at the flat level 1/|support|.
SmoothingResult smooth_hinf(const Pmf& p, double eps);

// Maximum achievable min positive mass: for each k, keep the k largest atoms
// (tail removal cost must fit in eps) and water-fill them to the largest level
// m <= 1/k whose fill cost fits in eps; best k wins.
SmoothingResult smooth_hneginf(const Pmf& p, double eps);

// Greedy upper bound on the conditional order-0 smooth entropy: repeatedly
// delete the cheapest batch of atoms (one smallest atom per row currently
// attaining the max conditional support) while the cumulative deleted mass
// fits in eps. Heuristic; the exhaustive oracle is exact at small sizes.
JointSmoothingResult smooth_conditional_h0(const JointPmf& joint, std::string_view target_axis,
                                           std::string_view given_axis, double eps);

// Greedy bound for the conditional order -inf smooth entropy: repeatedly
// improve the worst row with the keep-top-k strategy, charging joint-scale
// mass moves against the shared budget. Heuristic one-sided bound.
JointSmoothingResult smooth_conditional_hneginf(const JointPmf& joint, std::string_view target_axis,
                                                std::string_view given_axis, double eps);

// Exhaustive reference: enumerate support subsets, apply per-subset
// water-filling/cutting (orders inf, -inf) or subset counting (order 0).
// Exact for the unconditional orders and for conditional order 0; the
// conditional order -inf search covers a structured witness family that
// includes everything the greedy can produce. Capped at 12 support atoms.
SmoothingResult oracle_smooth(const Pmf& p, double eps, EntropyOrder order);
JointSmoothingResult oracle_smooth_conditional(const JointPmf& joint, std::string_view target_axis,
                                               std::string_view given_axis, double eps,
                                               EntropyOrder order);

namespace spectrum {

// Positive masses grouped by value; `count` atoms share each mass. This is
// all the unconditional smoothers need, and it stays tiny for n-fold product
// distributions whose dense form would blow the enumeration caps.
struct MassSpectrum {
  struct Run {
    double mass = 0.0;
    std::uint64_t count = 0;
  };
  std::vector<Run> runs;  // sorted by ascending mass

  std::uint64_t support_size() const;
  double total_mass() const;
};

MassSpectrum from_masses(const std::vector<double>& masses);
// Spectrum of the n-fold product distribution.
MassSpectrum iid_power(const MassSpectrum& base, int n);

double shannon_bits(const MassSpectrum& s);
double h0_bits(const MassSpectrum& s);
double hinf_bits(const MassSpectrum& s);
double hneginf_bits(const MassSpectrum& s);

// Value-only smoothers; same algorithms as the Pmf-level ones.
double smooth_h0_bits(const MassSpectrum& s, double eps);
double smooth_hinf_bits(const MassSpectrum& s, double eps);
double smooth_hneginf_bits(const MassSpectrum& s, double eps);

}  // namespace spectrum

}  // namespace oneshot
