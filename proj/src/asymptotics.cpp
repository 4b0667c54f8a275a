#include "oneshot/asymptotics.hpp"

#include <cmath>

#include "oneshot/entropy.hpp"

namespace oneshot {

double surprisal_deviation_bound(int n, double delta, std::uint64_t alphabet_size) {
  if (n < 1) throw DomainError("blocklength must be at least 1");
  if (!(delta >= 0.0)) throw DomainError("delta must be nonnegative");
  const double log_term = std::log2(static_cast<double>(alphabet_size) + 3.0);
  return std::exp2(-static_cast<double>(n) * delta * delta / (2.0 * log_term * log_term));
}

double n0_threshold(double eps0, std::uint64_t alphabet_size) {
  if (!(eps0 > 0.0) || eps0 >= 1.0) throw DomainError("eps0 must lie in (0, 1)");
  if (alphabet_size < 2)
    throw DomainError("the blocklength threshold needs an alphabet of at least 2 symbols");
  const double log_x = std::log2(static_cast<double>(alphabet_size));
  const double log_term = std::log2(static_cast<double>(alphabet_size) + 3.0);
  return std::sqrt(-2.0 * std::log2(eps0 / 2.0) * log_term * log_term / (log_x * log_x * eps0 * eps0));
}

namespace {

void check_power_cap(std::size_t alphabet, int n, const EnumCaps& caps) {
  double projected = 1.0;
  for (int i = 0; i < n; ++i) {
    projected *= static_cast<double>(alphabet);
    if (projected > static_cast<double>(caps.alphabet))
      throw ResourceCapError("i.i.d. power exceeds the alphabet enumeration cap");
  }
}

}  // namespace

std::vector<ConvergenceRow> convergence_scan(const Pmf& p, double eps, int n_max,
                                             const EnumCaps& caps) {
  if (n_max < 1) throw DomainError("the scan needs n_max >= 1");
  check_power_cap(p.size(), n_max, caps);

  const double target = shannon(p);
  const auto base = spectrum::from_masses(p.masses());

  std::vector<ConvergenceRow> rows;
  rows.reserve(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    const auto s = spectrum::iid_power(base, n);
    ConvergenceRow row;
    row.n = n;
    row.value_per_n = spectrum::smooth_hneginf_bits(s, eps) / static_cast<double>(n);
    row.companion_per_n = spectrum::smooth_h0_bits(s, eps) / static_cast<double>(n);
    row.target = target;
    rows.push_back(row);
  }
  return rows;
}

TypicalityEntropyBound typicality_entropy_bound(const Pmf& p, int n, double eps_typ, const EnumCaps& caps) {
  if (n < 1) throw DomainError("blocklength must be at least 1");
  if (!(eps_typ >= 0.0) || eps_typ >= 1.0) throw DomainError("epsilon must lie in [0, 1)");
  check_power_cap(p.size(), n, caps);

  const double h = shannon(p);
  const auto s = spectrum::iid_power(spectrum::from_masses(p.masses()), n);

  // Mass of the classical typical set {x^n : |-(1/n) log2 P - H| <= eps}.
  long double typical_mass = 0.0L;
  for (const auto& run : s.runs) {
    const double per_copy_surprisal = -std::log2(run.mass) / static_cast<double>(n);
    if (std::fabs(per_copy_surprisal - h) <= eps_typ + 1e-12)
      typical_mass += static_cast<long double>(run.mass) * run.count;
  }

  TypicalityEntropyBound result;
  result.typical_mass = static_cast<double>(typical_mass);
  result.condition_met = 1.0 - result.typical_mass <= eps_typ + 1e-12;
  result.bound_per_n = h + eps_typ;
  result.value_per_n = spectrum::smooth_hneginf_bits(s, eps_typ) / static_cast<double>(n);
  return result;
}

SwAsymptoticTargets sw_asymptotic_targets(const JointPmf& joint) {
  if (joint.arity() != 2) throw DomainError("asymptotic targets require an arity-2 joint");
  const double h_xy = shannon(joint);
  const double h_x = shannon(marginalize(joint, {joint.axis(0).name}));
  const double h_y = shannon(marginalize(joint, {joint.axis(1).name}));
  return {h_xy - h_y, h_xy - h_x, h_xy};
}

}  // namespace oneshot
