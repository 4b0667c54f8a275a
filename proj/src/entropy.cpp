#include "oneshot/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace oneshot {

namespace {

double shannon_bits(std::span<const double> mass) {
  long double acc = 0.0L;
  for (double m : mass)
    if (m > 0.0) acc -= static_cast<long double>(m) * std::log2(m);
  return static_cast<double>(acc);
}

// (1/(1-alpha)) log2 sum_{p>0} p^alpha, evaluated with the dominant atom
// factored out so very large |alpha| stays finite.
double renyi_finite_bits(std::span<const double> mass, double alpha) {
  double pivot = 0.0;  // max mass for alpha > 0, min positive mass otherwise
  if (alpha > 0.0) {
    for (double m : mass) pivot = std::max(pivot, m);
  } else {
    pivot = std::numeric_limits<double>::infinity();
    for (double m : mass)
      if (m > 0.0) pivot = std::min(pivot, m);
  }
  long double scaled_sum = 0.0L;
  for (double m : mass)
    if (m > 0.0) scaled_sum += std::exp2(alpha * (std::log2(m) - std::log2(pivot)));
  const double log_sum = alpha * std::log2(pivot) + std::log2(static_cast<double>(scaled_sum));
  return log_sum / (1.0 - alpha);
}

double renyi_bits(std::span<const double> mass, EntropyOrder order) {
  switch (order.kind) {
    case EntropyOrder::Kind::zero: {
      std::size_t support = 0;
      for (double m : mass)
        if (m > 0.0) ++support;
      return std::log2(static_cast<double>(support));
    }
    case EntropyOrder::Kind::infinity: {
      double max_mass = 0.0;
      for (double m : mass) max_mass = std::max(max_mass, m);
      return -std::log2(max_mass);
    }
    case EntropyOrder::Kind::neg_infinity: {
      double min_mass = std::numeric_limits<double>::infinity();
      for (double m : mass)
        if (m > 0.0) min_mass = std::min(min_mass, m);
      return -std::log2(min_mass);
    }
    case EntropyOrder::Kind::one:
      return shannon_bits(mass);
    case EntropyOrder::Kind::finite:
      return renyi_finite_bits(mass, order.alpha);
  }
  return 0.0;
}

}  // namespace

double shannon(const Pmf& p) { return shannon_bits(p.masses()); }
double shannon(const JointPmf& p) { return shannon_bits(p.masses()); }

double renyi(const Pmf& p, EntropyOrder order) { return renyi_bits(p.masses(), order); }
double renyi(const JointPmf& p, EntropyOrder order) { return renyi_bits(p.masses(), order); }

double renyi_conditional(const JointPmf& joint, std::string_view target_axis,
                         std::string_view given_axis, EntropyOrder order) {
  if (joint.arity() < 2) throw DomainError("conditional entropy requires at least two axes");
  JointPmf pair = joint.arity() == 2
                      ? joint
                      : marginalize(joint, {std::string(target_axis), std::string(given_axis)});
  const std::size_t t_ax = pair.axis_index(target_axis);
  const std::size_t g_ax = pair.axis_index(given_axis);
  const std::size_t n_target = pair.axis(t_ax).alphabet.size();
  const std::size_t n_given = pair.axis(g_ax).alphabet.size();

  // Row-major gather of P(target | given = y) for every y of positive mass.
  std::vector<double> row(n_target);
  std::vector<std::size_t> idx(2);
  bool any_row = false;
  double best = 0.0;

  for (std::size_t y = 0; y < n_given; ++y) {
    long double row_sum = 0.0L;
    for (std::size_t x = 0; x < n_target; ++x) {
      idx[t_ax] = x;
      idx[g_ax] = y;
      row[x] = pair.mass(pair.flatten(idx));
      row_sum += row[x];
    }
    if (!(row_sum > 0.0L)) continue;  // undefined conditional; skip the row
    for (double& v : row) v = static_cast<double>(v / row_sum);

    double value = 0.0;
    switch (order.kind) {
      case EntropyOrder::Kind::one:
        value = shannon_bits(row);  // alpha -> 1 limit keeps the max over rows
        break;
      case EntropyOrder::Kind::zero:
      case EntropyOrder::Kind::infinity:
      case EntropyOrder::Kind::neg_infinity:
      case EntropyOrder::Kind::finite:
        value = renyi_bits(row, order);
        break;
    }

    // The optimization over rows sits inside the log on the power sum, so in
    // value space: orders 0, 1, -inf and finite alpha < 1 take the max row;
    // order inf and finite alpha > 1 take the min row (the 1/(1-alpha)
    // factor flips the direction of the literal max over power sums).
    const bool take_max = order.kind == EntropyOrder::Kind::zero ||
                          order.kind == EntropyOrder::Kind::one ||
                          order.kind == EntropyOrder::Kind::neg_infinity ||
                          (order.kind == EntropyOrder::Kind::finite && order.alpha < 1.0);
    if (!any_row) {
      best = value;
      any_row = true;
    } else {
      best = take_max ? std::max(best, value) : std::min(best, value);
    }
  }
  if (!any_row) throw DomainError("conditional entropy of an empty distribution");
  return best;
}

}  // namespace oneshot
