#include "oneshot/typical.hpp"

#include <algorithm>
#include <cmath>

namespace oneshot {

namespace {

double log2_alphabet(const JointPmf& p) {
  double bits = 0.0;
  for (const Axis& a : p.axes()) bits += std::log2(static_cast<double>(a.alphabet.size()));
  return bits;
}

XiBounds xi_from_values(double h, double hinf_smooth, double hneginf_smooth, double delta,
                        double log_alphabet) {
  XiBounds b;
  b.delta = delta;
  b.entropy = h;
  b.log_alphabet = log_alphabet;
  b.hinf_smooth = hinf_smooth;
  b.hneginf_smooth = hneginf_smooth;
  b.xi_min = h - std::fabs(h - hinf_smooth) - delta * log_alphabet;
  b.xi_max = h + std::fabs(h - hneginf_smooth) + delta * log_alphabet;
  return b;
}

std::string axes_key(const JointPmf& p, const std::vector<std::size_t>& axis_ids) {
  std::string key;
  for (std::size_t a : axis_ids) key += p.axis(a).name;
  return key;
}

}  // namespace

XiBounds xi_bounds(const JointPmf& p, double delta) {
  const auto spec = spectrum::from_masses(p.masses());
  return xi_bounds_from_spectrum(spec, delta, log2_alphabet(p));
}

XiBounds xi_bounds_from_spectrum(const spectrum::MassSpectrum& s, double delta,
                                 double log_alphabet) {
  if (!(delta >= 0.0) || delta >= 1.0) throw DomainError("delta must lie in [0, 1)");
  return xi_from_values(spectrum::shannon_bits(s), spectrum::smooth_hinf_bits(s, delta),
                        spectrum::smooth_hneginf_bits(s, delta), delta, log_alphabet);
}

EpsilonBudget EpsilonBudget::equal_split(double eps) {
  EpsilonBudget b;
  b.total = eps;
  for (double& part : b.parts) part = eps / 4.0;
  b.validate();
  return b;
}

EpsilonBudget EpsilonBudget::with_parts(double eps, double e0, double e1, double e2, double e3) {
  EpsilonBudget b;
  b.total = eps;
  b.parts[0] = e0;
  b.parts[1] = e1;
  b.parts[2] = e2;
  b.parts[3] = e3;
  b.validate();
  return b;
}

void EpsilonBudget::validate() const {
  if (!(total > 0.0) || total >= 1.0) throw DomainError("epsilon budget total must lie in (0, 1)");
  long double sum = 0.0L;
  for (double part : parts) {
    if (!(part > 0.0)) throw DomainError("every epsilon budget part must be positive");
    sum += part;
  }
  if (static_cast<double>(sum) > total + 1e-12)
    throw DomainError("epsilon budget parts exceed the total");
}

TypicalSet::TypicalSet(JointPmf source, double delta, const EnumCaps& caps)
    : source_(std::move(source)), delta_(delta) {
  if (!(delta >= 0.0) || delta >= 1.0) throw DomainError("delta must lie in [0, 1)");
  if (source_.size() > caps.joint)
    throw ResourceCapError("typical-set enumeration exceeds the joint cap");

  const std::size_t arity = source_.arity();

  // Surprisal windows for every axis subset, then per-subset member flags for
  // the marginal levels so the joint predicate can be assembled bottom-up.
  std::vector<std::vector<std::size_t>> subsets;
  for (std::size_t mask = 1; mask < (1u << arity); ++mask) {
    std::vector<std::size_t> ids;
    for (std::size_t a = 0; a < arity; ++a)
      if (mask & (1u << a)) ids.push_back(a);
    subsets.push_back(std::move(ids));
  }
  std::sort(subsets.begin(), subsets.end(),
            [](const auto& a, const auto& b) { return a.size() < b.size(); });

  std::map<std::string, std::vector<char>> flags;

  for (const auto& ids : subsets) {
    const std::string key = axes_key(source_, ids);
    std::vector<std::string> names;
    for (std::size_t a : ids) names.push_back(source_.axis(a).name);
    JointPmf marg = ids.size() == arity ? source_ : marginalize(source_, names);
    const XiBounds xb = xi_bounds(marg, delta_);
    bounds_.emplace(key, xb);

    std::vector<char> member(marg.size(), 0);
    std::vector<std::size_t> idx(ids.size());
    for (std::size_t flat = 0; flat < marg.size(); ++flat) {
      const double m = marg.mass(flat);
      if (!(m > 0.0)) continue;  // zero-mass tuples are never members
      const double surprisal = -std::log2(m);
      if (surprisal < xb.xi_min - kEntropyTolerance || surprisal > xb.xi_max + kEntropyTolerance)
        continue;
      // Lower-order memberships: every sub-subset of these axes, checked via
      // the flags recorded for smaller subsets.
      bool ok = true;
      marg.unflatten(flat, idx);
      if (ids.size() >= 2) {
        for (std::size_t drop = 0; drop < ids.size() && ok; ++drop) {
          std::vector<std::size_t> sub_ids;
          std::vector<std::size_t> sub_idx;
          for (std::size_t j = 0; j < ids.size(); ++j) {
            if (j == drop) continue;
            sub_ids.push_back(ids[j]);
            sub_idx.push_back(idx[j]);
          }
          const std::string sub_key = axes_key(source_, sub_ids);
          std::size_t sub_flat = 0;
          for (std::size_t j = 0; j < sub_ids.size(); ++j)
            sub_flat = sub_flat * source_.axis(sub_ids[j]).alphabet.size() + sub_idx[j];
          if (!flags.at(sub_key)[sub_flat]) ok = false;
        }
      }
      member[flat] = ok ? 1 : 0;
    }
    flags.emplace(key, std::move(member));
  }

  member_flags_ = std::move(flags.at(axes_key(source_, subsets.back())));
  long double member_mass = 0.0L;
  for (std::size_t flat = 0; flat < source_.size(); ++flat) {
    if (member_flags_[flat]) {
      members_.push_back(flat);
      member_mass += source_.mass(flat);
    }
  }
  tail_ = static_cast<double>(1.0L - member_mass);
  if (tail_ < 0.0) tail_ = 0.0;
}

const XiBounds& TypicalSet::bounds_for(const std::string& key) const {
  auto it = bounds_.find(key);
  if (it == bounds_.end()) throw DomainError("no bounds recorded for axis subset '" + key + "'");
  return it->second;
}

std::vector<std::size_t> TypicalSet::conditional_slice(std::size_t y_index) const {
  if (source_.arity() != 2) throw DomainError("conditional slices require an arity-2 set");
  const std::size_t ny = source_.axis(1).alphabet.size();
  std::vector<std::size_t> xs;
  for (std::size_t flat : members_)
    if (flat % ny == y_index) xs.push_back(flat / ny);
  return xs;
}

std::vector<std::size_t> TypicalSet::conditional_slice(std::string_view y_label) const {
  if (source_.arity() != 2) throw DomainError("conditional slices require an arity-2 set");
  const auto idx = source_.axis(1).alphabet.index_of(y_label);
  if (!idx) throw DomainError("unknown symbol '" + std::string(y_label) + "' on the given axis");
  return conditional_slice(*idx);
}

double find_delta(const JointPmf& p, double eps0, double grid_step, const EnumCaps& caps) {
  if (!(eps0 > 0.0) || eps0 >= 1.0) throw DomainError("eps0 must lie in (0, 1)");
  if (!(grid_step > 0.0)) throw DomainError("grid step must be positive");
  for (double delta = 0.0; delta < 1.0; delta += grid_step) {
    if (TypicalSet(p, delta, caps).tail() <= eps0) return delta;
  }
  throw InfeasibilityError("no delta on the grid meets the tail target " + std::to_string(eps0));
}

}  // namespace oneshot
