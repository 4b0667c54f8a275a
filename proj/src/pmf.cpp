#include "oneshot/pmf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace oneshot {

namespace {

void validate_mass(const std::vector<double>& mass, std::size_t expected_size) {
  if (mass.size() != expected_size)
    throw DomainError("mass vector has " + std::to_string(mass.size()) + " entries, expected " +
                      std::to_string(expected_size));
  long double sum = 0.0L;
  for (double m : mass) {
    if (!(m >= 0.0)) throw DomainError("mass entries must be nonnegative");
    sum += m;
  }
  if (std::fabs(static_cast<double>(sum) - 1.0) > kMassTolerance)
    throw DomainError("mass must sum to 1 (got " + std::to_string(static_cast<double>(sum)) + ")");
}

std::size_t inverse_cdf_index(const std::vector<double>& mass, double u) {
  long double cum = 0.0L;
  std::size_t last_positive = 0;
  bool seen_positive = false;
  for (std::size_t i = 0; i < mass.size(); ++i) {
    if (mass[i] > 0.0) {
      last_positive = i;
      seen_positive = true;
      cum += mass[i];
      if (u < static_cast<double>(cum)) return i;
    }
  }
  // u landed past the accumulated total (floating slack); take the last atom.
  return seen_positive ? last_positive : 0;
}

}  // namespace

Pmf::Pmf(Alphabet alphabet, std::vector<double> mass)
    : alphabet_(std::move(alphabet)), mass_(std::move(mass)) {
  validate_mass(mass_, alphabet_.size());
}

std::size_t Pmf::support_size() const {
  return static_cast<std::size_t>(std::count_if(mass_.begin(), mass_.end(), [](double m) { return m > 0.0; }));
}

std::size_t Pmf::sample_index(RngStream& rng) const { return inverse_cdf_index(mass_, rng.next_unit()); }

JointPmf::JointPmf(std::vector<Axis> axes, std::vector<double> mass)
    : axes_(std::move(axes)), mass_(std::move(mass)) {
  if (axes_.empty() || axes_.size() > 3)
    throw DomainError("joint distributions support 1 to 3 axes");
  for (std::size_t i = 0; i < axes_.size(); ++i)
    for (std::size_t j = i + 1; j < axes_.size(); ++j)
      if (axes_[i].name == axes_[j].name) throw DomainError("duplicate axis name '" + axes_[i].name + "'");

  std::size_t total = 1;
  for (const Axis& a : axes_) total *= a.alphabet.size();
  validate_mass(mass_, total);

  strides_.assign(axes_.size(), 1);
  for (std::size_t i = axes_.size(); i-- > 1;) strides_[i - 1] = strides_[i] * axes_[i].alphabet.size();
}

std::size_t JointPmf::axis_index(std::string_view name) const {
  for (std::size_t i = 0; i < axes_.size(); ++i)
    if (axes_[i].name == name) return i;
  throw DomainError("unknown axis '" + std::string(name) + "'");
}

std::size_t JointPmf::flatten(std::span<const std::size_t> idx) const {
  std::size_t flat = 0;
  for (std::size_t i = 0; i < axes_.size(); ++i) flat += idx[i] * strides_[i];
  return flat;
}

void JointPmf::unflatten(std::size_t flat, std::span<std::size_t> out) const {
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    out[i] = flat / strides_[i];
    flat %= strides_[i];
  }
}

std::vector<std::string> JointPmf::labels_of(std::size_t flat) const {
  std::vector<std::size_t> idx(axes_.size());
  unflatten(flat, idx);
  std::vector<std::string> labels;
  labels.reserve(axes_.size());
  for (std::size_t i = 0; i < axes_.size(); ++i) labels.push_back(axes_[i].alphabet.symbol(idx[i]));
  return labels;
}

std::size_t JointPmf::sample_flat(RngStream& rng) const {
  long double cum = 0.0L;
  const double u = rng.next_unit();
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < mass_.size(); ++i) {
    if (mass_[i] > 0.0) {
      last_positive = i;
      cum += mass_[i];
      if (u < static_cast<double>(cum)) return i;
    }
  }
  return last_positive;
}

JointPmf JointPmf::from_pmf(const std::string& axis_name, const Pmf& p) {
  return JointPmf({Axis{axis_name, p.alphabet()}}, p.masses());
}

Pmf JointPmf::as_pmf() const {
  if (arity() != 1) throw DomainError("as_pmf requires an arity-1 joint");
  return Pmf(axes_[0].alphabet, mass_);
}

Pmf JointPmf::flattened() const {
  if (arity() == 1) return as_pmf();
  std::vector<std::string> labels;
  labels.reserve(mass_.size());
  for (std::size_t flat = 0; flat < mass_.size(); ++flat) {
    auto tuple = labels_of(flat);
    std::string joined = tuple[0];
    for (std::size_t i = 1; i < tuple.size(); ++i) joined += "," + tuple[i];
    labels.push_back(std::move(joined));
  }
  return Pmf(Alphabet(std::move(labels)), mass_);
}

Channel::Channel(std::vector<Axis> inputs, Axis output, std::vector<double> rows)
    : inputs_(std::move(inputs)), output_(std::move(output)), rows_(std::move(rows)) {
  if (inputs_.empty() || inputs_.size() > 2) throw DomainError("channels take one or two input axes");
  const std::size_t n_rows = input_size();
  if (rows_.size() != n_rows * output_.alphabet.size())
    throw DomainError("channel rows have the wrong total size");
  for (std::size_t r = 0; r < n_rows; ++r) {
    long double sum = 0.0L;
    for (std::size_t z = 0; z < output_.alphabet.size(); ++z) {
      const double v = rows_[r * output_.alphabet.size() + z];
      if (!(v >= 0.0)) throw DomainError("channel probabilities must be nonnegative");
      sum += v;
    }
    if (std::fabs(static_cast<double>(sum) - 1.0) > kMassTolerance)
      throw DomainError("channel row " + std::to_string(r) + " does not sum to 1");
  }
}

std::size_t Channel::input_size() const {
  std::size_t total = 1;
  for (const Axis& a : inputs_) total *= a.alphabet.size();
  return total;
}

double Channel::prob(std::size_t input_flat, std::size_t output_index) const {
  return rows_[input_flat * output_.alphabet.size() + output_index];
}

Pmf Channel::row(std::size_t input_flat) const {
  const std::size_t z = output_.alphabet.size();
  std::vector<double> mass(rows_.begin() + input_flat * z, rows_.begin() + (input_flat + 1) * z);
  return Pmf(output_.alphabet, std::move(mass));
}

// --- operations -------------------------------------------------------------

JointPmf marginalize(const JointPmf& joint, const std::vector<std::string>& keep) {
  if (keep.empty()) throw DomainError("marginalize requires at least one kept axis");
  std::vector<bool> kept(joint.arity(), false);
  for (const std::string& name : keep) kept[joint.axis_index(name)] = true;

  std::vector<Axis> out_axes;
  for (std::size_t i = 0; i < joint.arity(); ++i)
    if (kept[i]) out_axes.push_back(joint.axis(i));

  std::size_t out_size = 1;
  for (const Axis& a : out_axes) out_size *= a.alphabet.size();

  std::vector<double> out_mass(out_size, 0.0);
  std::vector<std::size_t> idx(joint.arity());
  for (std::size_t flat = 0; flat < joint.size(); ++flat) {
    joint.unflatten(flat, idx);
    std::size_t out_flat = 0;
    for (std::size_t i = 0; i < joint.arity(); ++i)
      if (kept[i]) out_flat = out_flat * joint.axis(i).alphabet.size() + idx[i];
    out_mass[out_flat] += joint.mass(flat);
  }
  return JointPmf(std::move(out_axes), std::move(out_mass));
}

JointPmf condition(const JointPmf& joint, std::string_view axis, std::string_view value) {
  const std::size_t ax = joint.axis_index(axis);
  const auto value_index = joint.axis(ax).alphabet.index_of(value);
  if (!value_index) throw DomainError("unknown symbol '" + std::string(value) + "' on axis " + std::string(axis));
  if (joint.arity() < 2) throw DomainError("conditioning requires at least two axes");

  std::vector<Axis> out_axes;
  for (std::size_t i = 0; i < joint.arity(); ++i)
    if (i != ax) out_axes.push_back(joint.axis(i));

  std::size_t out_size = 1;
  for (const Axis& a : out_axes) out_size *= a.alphabet.size();

  std::vector<double> out_mass(out_size, 0.0);
  long double marginal = 0.0L;
  std::vector<std::size_t> idx(joint.arity());
  for (std::size_t flat = 0; flat < joint.size(); ++flat) {
    joint.unflatten(flat, idx);
    if (idx[ax] != *value_index) continue;
    std::size_t out_flat = 0;
    for (std::size_t i = 0; i < joint.arity(); ++i)
      if (i != ax) out_flat = out_flat * joint.axis(i).alphabet.size() + idx[i];
    out_mass[out_flat] = joint.mass(flat);
    marginal += joint.mass(flat);
  }
  if (!(marginal > 0.0L))
    throw DomainError("conditioning on zero-probability value '" + std::string(value) + "'");
  for (double& m : out_mass) m /= static_cast<double>(marginal);
  return JointPmf(std::move(out_axes), std::move(out_mass));
}

JointPmf product(const Pmf& p, const Pmf& q, const std::string& name_p, const std::string& name_q) {
  std::vector<double> mass;
  mass.reserve(p.size() * q.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j) mass.push_back(p.mass(i) * q.mass(j));
  return JointPmf({Axis{name_p, p.alphabet()}, Axis{name_q, q.alphabet()}}, std::move(mass));
}

JointPmf iid_extension(const JointPmf& p, int n, const EnumCaps& caps) {
  if (n < 1) throw DomainError("iid extension requires n >= 1");
  if (n == 1) return p;

  double projected = 1.0;
  for (int i = 0; i < n; ++i) projected *= static_cast<double>(p.size());
  if (projected > static_cast<double>(caps.joint))
    throw ResourceCapError("iid extension exceeds the joint enumeration cap");

  std::vector<Axis> axes;
  for (const Axis& a : p.axes()) axes.push_back(Axis{a.name, a.alphabet.power(n, caps)});

  // Odometer over n per-copy flat indices; axis-major output layout is the
  // same as flattening per-axis power indices because strides factor cleanly.
  const std::size_t out_size = static_cast<std::size_t>(projected);
  std::vector<double> mass(out_size, 0.0);
  std::vector<std::size_t> copies(static_cast<std::size_t>(n), 0);
  std::vector<std::size_t> copy_idx(p.arity());
  std::vector<std::size_t> axis_digits(p.arity());

  for (std::size_t it = 0;; ++it) {
    double m = 1.0;
    std::fill(axis_digits.begin(), axis_digits.end(), 0);
    for (int c = 0; c < n; ++c) {
      m *= p.mass(copies[c]);
      p.unflatten(copies[c], copy_idx);
      for (std::size_t a = 0; a < p.arity(); ++a)
        axis_digits[a] = axis_digits[a] * p.axis(a).alphabet.size() + copy_idx[a];
    }
    std::size_t out_flat = 0;
    for (std::size_t a = 0; a < p.arity(); ++a) {
      std::size_t axis_extent = 1;
      for (int c = 0; c < n; ++c) axis_extent *= p.axis(a).alphabet.size();
      out_flat = out_flat * axis_extent + axis_digits[a];
    }
    mass[out_flat] = m;

    int pos = n - 1;
    while (pos >= 0 && ++copies[pos] == p.size()) copies[pos--] = 0;
    if (pos < 0) break;
  }
  return JointPmf(std::move(axes), std::move(mass));
}

Channel channel_iid_extension(const Channel& ch, int n, const EnumCaps& caps) {
  if (n < 1) throw DomainError("channel iid extension requires n >= 1");
  if (n == 1) return ch;

  const std::size_t in_copy = ch.input_size();
  const std::size_t out_copy = ch.output().alphabet.size();
  double projected = 1.0;
  for (int i = 0; i < n; ++i) projected *= static_cast<double>(in_copy) * out_copy;
  if (projected > static_cast<double>(caps.joint))
    throw ResourceCapError("channel iid extension exceeds the joint enumeration cap");

  std::vector<Axis> inputs;
  for (const Axis& a : ch.inputs()) inputs.push_back(Axis{a.name, a.alphabet.power(n, caps)});
  Axis output{ch.output().name, ch.output().alphabet.power(n, caps)};

  std::size_t in_total = 1, out_total = 1;
  for (int i = 0; i < n; ++i) {
    in_total *= in_copy;
    out_total *= out_copy;
  }

  std::vector<double> rows(in_total * out_total, 0.0);
  // Per-copy digit decomposition: the flat n-fold input with axis-major
  // layout maps to per-copy flat inputs by splitting each axis digit string.
  const std::size_t arity = ch.inputs().size();
  std::vector<std::size_t> axis_extent(arity);
  for (std::size_t a = 0; a < arity; ++a) axis_extent[a] = ch.inputs()[a].alphabet.size();

  for (std::size_t in_flat = 0; in_flat < in_total; ++in_flat) {
    // Decompose in_flat into per-axis n-digit strings, then per-copy inputs.
    std::vector<std::vector<std::size_t>> digits(arity, std::vector<std::size_t>(n));
    std::size_t rest = in_flat;
    for (std::size_t a = arity; a-- > 0;) {
      std::size_t axis_total = 1;
      for (int c = 0; c < n; ++c) axis_total *= axis_extent[a];
      std::size_t axis_val = rest % axis_total;
      rest /= axis_total;
      for (int c = n - 1; c >= 0; --c) {
        digits[a][c] = axis_val % axis_extent[a];
        axis_val /= axis_extent[a];
      }
    }
    for (std::size_t out_flat = 0; out_flat < out_total; ++out_flat) {
      std::size_t z = out_flat;
      std::vector<std::size_t> zdig(n);
      for (int c = n - 1; c >= 0; --c) {
        zdig[c] = z % out_copy;
        z /= out_copy;
      }
      double prob = 1.0;
      for (int c = 0; c < n && prob > 0.0; ++c) {
        std::size_t copy_in = 0;
        for (std::size_t a = 0; a < arity; ++a) copy_in = copy_in * axis_extent[a] + digits[a][c];
        prob *= ch.prob(copy_in, zdig[c]);
      }
      rows[in_flat * out_total + out_flat] = prob;
    }
  }
  return Channel(std::move(inputs), std::move(output), std::move(rows));
}

double tv_distance(const Pmf& p, const Pmf& q) {
  if (p.alphabet() != q.alphabet()) throw DomainError("tv_distance requires identical alphabets");
  long double acc = 0.0L;
  for (std::size_t i = 0; i < p.size(); ++i) acc += std::fabs(p.mass(i) - q.mass(i));
  return static_cast<double>(acc / 2.0L);
}

}  // namespace oneshot
