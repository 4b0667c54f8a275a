#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "oneshot/alphabet.hpp"
#include "oneshot/errors.hpp"
#include "oneshot/rng.hpp"

namespace oneshot {

inline constexpr double kMassTolerance = 1e-9;   // |sum - 1| allowed at validation
inline constexpr double kEntropyTolerance = 1e-9;  // comparisons in bit space

// Probability mass function over a single alphabet. Immutable after
// construction; construction validates nonnegativity and normalization.
class Pmf {
 public:
  Pmf(Alphabet alphabet, std::vector<double> mass);

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t size() const { return mass_.size(); }
  double mass(std::size_t i) const { return mass_[i]; }
  const std::vector<double>& masses() const { return mass_; }

  std::size_t support_size() const;
  // Inverse-CDF draw in fixed alphabet order; same stream state, same result.
  std::size_t sample_index(RngStream& rng) const;

 private:
  Alphabet alphabet_;
  std::vector<double> mass_;
};

struct Axis {
  std::string name;
  Alphabet alphabet;
};

// Joint distribution over 1..3 named axes. Mass is a flat row-major vector
// with the last axis fastest, matching the JSON file layout.
class JointPmf {
 public:
  JointPmf(std::vector<Axis> axes, std::vector<double> mass);

  std::size_t arity() const { return axes_.size(); }
  const Axis& axis(std::size_t i) const { return axes_[i]; }
  const std::vector<Axis>& axes() const { return axes_; }
  std::size_t axis_index(std::string_view name) const;  // DomainError if unknown

  std::size_t size() const { return mass_.size(); }
  double mass(std::size_t flat) const { return mass_[flat]; }
  const std::vector<double>& masses() const { return mass_; }

  std::size_t flatten(std::span<const std::size_t> idx) const;
  void unflatten(std::size_t flat, std::span<std::size_t> out) const;
  std::vector<std::string> labels_of(std::size_t flat) const;

  std::size_t sample_flat(RngStream& rng) const;

  // Arity-1 interconversion.
  static JointPmf from_pmf(const std::string& axis_name, const Pmf& p);
  Pmf as_pmf() const;  // DomainError unless arity == 1
  // The joint viewed as a single variable on the product alphabet.
  Pmf flattened() const;

 private:
  std::vector<Axis> axes_;
  std::vector<double> mass_;
  std::vector<std::size_t> strides_;
};

// Conditional law P(output | inputs), one Pmf row per input tuple.
class Channel {
 public:
  Channel(std::vector<Axis> inputs, Axis output, std::vector<double> rows);

  const std::vector<Axis>& inputs() const { return inputs_; }
  const Axis& output() const { return output_; }
  std::size_t input_size() const;  // product of input alphabet sizes
  double prob(std::size_t input_flat, std::size_t output_index) const;
  Pmf row(std::size_t input_flat) const;

 private:
  std::vector<Axis> inputs_;
  Axis output_;
  std::vector<double> rows_;  // row-major: input tuple major, output fastest
};

// --- operations -------------------------------------------------------------

// Sum out every axis not named in `keep`; kept axes stay in original order.
JointPmf marginalize(const JointPmf& joint, const std::vector<std::string>& keep);

// P(rest | axis = value). DomainError when the conditioning value has zero
// marginal probability (callers are expected to skip such rows).
JointPmf condition(const JointPmf& joint, std::string_view axis, std::string_view value);

JointPmf product(const Pmf& p, const Pmf& q, const std::string& name_p = "X",
                 const std::string& name_q = "Y");

// n-fold i.i.d. extension: every axis becomes its n-fold power, and the mass
// of a tuple of sequences is the product of per-copy masses.
JointPmf iid_extension(const JointPmf& p, int n, const EnumCaps& caps = {});

Channel channel_iid_extension(const Channel& ch, int n, const EnumCaps& caps = {});

// Half the L1 distance. Equals the minimal disagreement probability over
// couplings, which is how the smoothing ball is realized on a fixed alphabet.
double tv_distance(const Pmf& p, const Pmf& q);

}  // namespace oneshot
