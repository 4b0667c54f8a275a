#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "oneshot/pmf.hpp"
#include "oneshot/smoothing.hpp"

namespace oneshot {

// Surprisal window [xi_min, xi_max] around H built from the delta-smooth
// order-inf / order--inf entropies plus a delta * log2|alphabet| slack.
// The same delta drives both the smoothing and the slack term.
struct XiBounds {
  double xi_min = 0.0;
  double xi_max = 0.0;
  double delta = 0.0;
  double entropy = 0.0;        // Shannon entropy of the variable
  double log_alphabet = 0.0;   // log2 of the full (product) alphabet size
  double hinf_smooth = 0.0;    // delta-smooth order-inf value used
  double hneginf_smooth = 0.0; // delta-smooth order--inf value used
};

XiBounds xi_bounds(const JointPmf& p, double delta);
// Same computation from a mass spectrum; log_alphabet supplied by the caller.
XiBounds xi_bounds_from_spectrum(const spectrum::MassSpectrum& s, double delta,
                                 double log_alphabet);

// Error budget epsilon split into four parts (atypicality + three collision
// terms); parts must be positive and sum to at most the total.
struct EpsilonBudget {
  double total = 0.0;
  double parts[4] = {0, 0, 0, 0};

  static EpsilonBudget equal_split(double eps);
  static EpsilonBudget with_parts(double eps, double e0, double e1, double e2, double e3);
  void validate() const;  // DomainError on violation
};

// One-shot typical set: tuples whose surprisal lies in the joint window and
// whose lower-order projections are themselves typical. Membership of a pair
// requires both singleton memberships; a triple additionally requires all
// three pair memberships.
class TypicalSet {
 public:
  TypicalSet(JointPmf source, double delta, const EnumCaps& caps = {});

  const JointPmf& source() const { return source_; }
  double delta() const { return delta_; }
  double tail() const { return tail_; }  // exact 1 - sum of member masses
  const std::vector<std::size_t>& members() const { return members_; }
  bool contains(std::size_t flat) const { return member_flags_[flat]; }

  // XiBounds per axis subset, keyed by concatenated axis names ("X", "XY", ...).
  const std::map<std::string, XiBounds>& bounds() const { return bounds_; }
  const XiBounds& bounds_for(const std::string& key) const;

  // Conditional slice {x : (x, y) in members} for arity-2 sets.
  std::vector<std::size_t> conditional_slice(std::size_t y_index) const;
  std::vector<std::size_t> conditional_slice(std::string_view y_label) const;

 private:
  JointPmf source_;
  double delta_;
  double tail_ = 0.0;
  std::vector<std::size_t> members_;
  std::vector<char> member_flags_;
  std::map<std::string, XiBounds> bounds_;
};

inline TypicalSet build_typical_set(const JointPmf& p, double delta, const EnumCaps& caps = {}) {
  return TypicalSet(p, delta, caps);
}

inline double tail_probability(const TypicalSet& set) { return set.tail(); }

// Smallest delta on the grid {0, step, 2 step, ...} < 1 whose typical set has
// tail <= eps0. The scan is exhaustive up to the first hit; tail monotonicity
// in delta is not assumed. InfeasibilityError when no grid point qualifies.
double find_delta(const JointPmf& p, double eps0, double grid_step, const EnumCaps& caps = {});

}  // namespace oneshot
