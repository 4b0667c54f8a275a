#include "oneshot/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace oneshot {

namespace {

void check_eps(double eps) {
  if (!(eps >= 0.0) || eps >= 1.0) throw DomainError("smoothing epsilon must lie in [0, 1)");
}

// Atom indices sorted by (mass ascending, index ascending); zero atoms are
// excluded. The fixed index tie-break keeps every smoother deterministic.
std::vector<std::size_t> support_ascending(const std::vector<double>& mass) {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < mass.size(); ++i)
    if (mass[i] > 0.0) order.push_back(i);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (mass[a] != mass[b]) return mass[a] < mass[b];
    return a < b;
  });
  return order;
}

std::size_t largest_atom(const std::vector<double>& mass) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < mass.size(); ++i)
    if (mass[i] > mass[best]) best = i;
  return best;
}

// Largest m with sum over atoms of (m - mass)+ <= budget; the cap (typically
// 1/k) is applied afterwards because the feasible set is an interval.
double fill_level(const std::vector<std::pair<double, std::uint64_t>>& asc_runs, double budget,
                  double cap) {
  long double count = 0.0L, below_mass = 0.0L;
  double level = cap;
  for (std::size_t i = 0; i < asc_runs.size(); ++i) {
    count += static_cast<long double>(asc_runs[i].second);
    below_mass += static_cast<long double>(asc_runs[i].second) * asc_runs[i].first;
    const double piece_hi =
        i + 1 < asc_runs.size() ? asc_runs[i + 1].first : std::numeric_limits<double>::infinity();
    const double cand = static_cast<double>((budget + below_mass) / count);
    if (cand <= piece_hi) {
      level = cand;
      break;
    }
  }
  return std::min(cap, level);
}

// Smallest m with sum over atoms of (mass - m)+ <= budget.
double cut_level(const std::vector<std::pair<double, std::uint64_t>>& asc_runs, double budget) {
  long double count = 0.0L, above_mass = 0.0L;
  for (std::size_t i = asc_runs.size(); i-- > 0;) {
    count += static_cast<long double>(asc_runs[i].second);
    above_mass += static_cast<long double>(asc_runs[i].second) * asc_runs[i].first;
    const double piece_lo = i > 0 ? asc_runs[i - 1].first : 0.0;
    const double excess_at_lo = static_cast<double>(above_mass - piece_lo * count);
    if (excess_at_lo > budget) return static_cast<double>((above_mass - budget) / count);
  }
  return 0.0;
}

std::vector<std::pair<double, std::uint64_t>> runs_of_atoms(const std::vector<double>& mass,
                                                            const std::vector<std::size_t>& order,
                                                            std::size_t skip_prefix = 0) {
  std::vector<std::pair<double, std::uint64_t>> runs;
  for (std::size_t i = skip_prefix; i < order.size(); ++i) {
    const double m = mass[order[i]];
    if (!runs.empty() && runs.back().first == m)
      ++runs.back().second;
    else
      runs.emplace_back(m, 1);
  }
  return runs;
}

}  // namespace

// --- unconditional smoothers -------------------------------------------------

SmoothingResult smooth_h0(const Pmf& p, double eps) {
  check_eps(eps);
  const std::vector<double>& mass = p.masses();
  const auto order = support_ascending(mass);

  long double removed = 0.0L;
  std::size_t removed_count = 0;
  while (removed_count < order.size()) {
    const double m = mass[order[removed_count]];
    if (static_cast<double>(removed + m) > eps + kBudgetSlack) break;
    removed += m;
    ++removed_count;
  }

  std::vector<double> witness = mass;
  for (std::size_t i = 0; i < removed_count; ++i) witness[order[i]] = 0.0;
  witness[largest_atom(witness)] += static_cast<double>(removed);

  Pmf witness_pmf(p.alphabet(), std::move(witness));
  return SmoothingResult{std::log2(static_cast<double>(order.size() - removed_count)),
                         std::move(witness_pmf), static_cast<double>(removed),
                         SmoothingMethod::exact_greedy};
}

SmoothingResult smooth_hinf(const Pmf& p, double eps) {
  check_eps(eps);
  const std::vector<double>& mass = p.masses();
  const auto order = support_ascending(mass);
  const auto runs = runs_of_atoms(mass, order);

  const double flat = 1.0 / static_cast<double>(order.size());
  const double level = std::max(cut_level(runs, eps), flat);

  // Cut everything above the level, then refill below-level atoms in fixed
  // alphabet order; headroom is guaranteed because level >= 1/|support|.
  std::vector<double> witness = mass;
  long double pool = 0.0L;
  for (std::size_t i : order) {
    if (witness[i] > level) {
      pool += witness[i] - level;
      witness[i] = level;
    }
  }
  for (std::size_t i : order) {
    if (pool <= 0.0L) break;
    if (witness[i] < level) {
      const double add = std::min(static_cast<double>(pool), level - witness[i]);
      witness[i] += add;
      pool -= add;
    }
  }

  Pmf witness_pmf(p.alphabet(), std::move(witness));
  const double moved = tv_distance(p, witness_pmf);
  return SmoothingResult{-std::log2(level), std::move(witness_pmf), moved,
                         SmoothingMethod::exact_greedy};
}

SmoothingResult smooth_hneginf(const Pmf& p, double eps) {
  check_eps(eps);
  const std::vector<double>& mass = p.masses();
  const auto order = support_ascending(mass);

  // Keep-top-k: dropping the cheapest prefix dominates every other subset of
  // the same size, and the reachable level only grows as k shrinks, so the
  // smallest feasible k is optimal.
  long double removed = 0.0L;
  std::size_t removed_count = 0;
  while (removed_count < order.size()) {
    const double m = mass[order[removed_count]];
    if (static_cast<double>(removed + m) > eps + kBudgetSlack) break;
    removed += m;
    ++removed_count;
  }
  const std::size_t kept = order.size() - removed_count;
  const auto kept_runs = runs_of_atoms(mass, order, removed_count);
  const double level = fill_level(kept_runs, eps, 1.0 / static_cast<double>(kept));

  std::vector<double> witness = mass;
  for (std::size_t i = 0; i < removed_count; ++i) witness[order[i]] = 0.0;

  long double need = 0.0L;
  for (std::size_t i = removed_count; i < order.size(); ++i)
    if (witness[order[i]] < level) need += level - witness[order[i]];

  if (removed >= need) {
    // The dropped pool covers all fills; the surplus rides on the top atom.
    for (std::size_t i = removed_count; i < order.size(); ++i)
      if (witness[order[i]] < level) witness[order[i]] = level;
    witness[order.back()] += static_cast<double>(removed - need);
  } else {
    long double deficit = need - removed;
    for (std::size_t i = removed_count; i < order.size(); ++i)
      if (witness[order[i]] < level) witness[order[i]] = level;
    // Fund the remaining fills by cutting the largest atoms down toward the
    // level (never below it).
    for (std::size_t i = order.size(); i-- > removed_count && deficit > 1e-18L;) {
      const double reducible = witness[order[i]] - level;
      if (reducible <= 0.0) continue;
      const double take = std::min(reducible, static_cast<double>(deficit));
      witness[order[i]] -= take;
      deficit -= take;
    }
  }

  Pmf witness_pmf(p.alphabet(), std::move(witness));
  const double moved = tv_distance(p, witness_pmf);
  return SmoothingResult{-std::log2(level), std::move(witness_pmf), moved,
                         SmoothingMethod::exact_greedy};
}

// --- conditional greedy bounds -----------------------------------------------

namespace {

struct PairView {
  JointPmf pair;            // axes ordered (target, given)
  std::size_t n_target = 0;
  std::size_t n_given = 0;

  std::size_t flat(std::size_t x, std::size_t y) const { return x * n_given + y; }
};

PairView make_pair_view(const JointPmf& joint, std::string_view target, std::string_view given) {
  if (joint.arity() < 2) throw DomainError("conditional smoothing requires at least two axes");
  JointPmf reduced = joint.arity() == 2
                         ? joint
                         : marginalize(joint, {std::string(target), std::string(given)});
  // Normalize the axis order to (target, given).
  if (reduced.axis_index(target) != 0) {
    const std::size_t nx = reduced.axis(1).alphabet.size();
    const std::size_t ny = reduced.axis(0).alphabet.size();
    std::vector<double> transposed(reduced.size());
    for (std::size_t a = 0; a < ny; ++a)
      for (std::size_t b = 0; b < nx; ++b) transposed[b * ny + a] = reduced.mass(a * nx + b);
    reduced = JointPmf({reduced.axis(1), reduced.axis(0)}, std::move(transposed));
  }
  PairView view{reduced, reduced.axis(0).alphabet.size(), reduced.axis(1).alphabet.size()};
  return view;
}

}  // namespace

JointSmoothingResult smooth_conditional_h0(const JointPmf& joint, std::string_view target_axis,
                                           std::string_view given_axis, double eps) {
  check_eps(eps);
  const PairView view = make_pair_view(joint, target_axis, given_axis);
  std::vector<double> mass = view.pair.masses();

  std::vector<std::size_t> row_support(view.n_given, 0);
  for (std::size_t x = 0; x < view.n_target; ++x)
    for (std::size_t y = 0; y < view.n_given; ++y)
      if (mass[view.flat(x, y)] > 0.0) ++row_support[y];

  long double deleted = 0.0L;
  for (;;) {
    const std::size_t max_support = *std::max_element(row_support.begin(), row_support.end());
    if (max_support <= 1) break;

    // One batch: the smallest-mass atom of every row attaining the max.
    std::vector<std::size_t> batch;
    long double batch_cost = 0.0L;
    for (std::size_t y = 0; y < view.n_given; ++y) {
      if (row_support[y] != max_support) continue;
      std::size_t best = view.pair.size();
      for (std::size_t x = 0; x < view.n_target; ++x) {
        const std::size_t f = view.flat(x, y);
        if (mass[f] <= 0.0) continue;
        if (best == view.pair.size() || mass[f] < mass[best]) best = f;
      }
      batch.push_back(best);
      batch_cost += mass[best];
    }
    if (static_cast<double>(deleted + batch_cost) > eps + kBudgetSlack) break;

    deleted += batch_cost;
    for (std::size_t f : batch) {
      mass[f] = 0.0;
      --row_support[f % view.n_given];
    }
  }

  mass[largest_atom(mass)] += static_cast<double>(deleted);

  JointPmf witness(view.pair.axes(), std::move(mass));
  const double moved = tv_distance(view.pair.flattened(), witness.flattened());
  return JointSmoothingResult{
      std::log2(static_cast<double>(*std::max_element(row_support.begin(), row_support.end()))),
      std::move(witness), moved, SmoothingMethod::greedy_heuristic};
}

namespace {

// Per-row keep-top-k transform cost, all in conditional units: removing the
// (support-k) smallest atoms costs their mass, filling the kept ones to the
// level costs the fill, and the budget charge is the larger of the two.
double row_cost_to_level(const std::vector<double>& cond_asc, double level) {
  const std::size_t support = cond_asc.size();
  double best = std::numeric_limits<double>::infinity();
  long double removed = 0.0L;
  // prefix_fill[k] relates to kept suffix; evaluate k descending so the
  // removal accumulator can run forward over the sorted atoms.
  for (std::size_t drop = 0; drop < support; ++drop) {
    const std::size_t k = support - drop;
    if (level <= 1.0 / static_cast<double>(k) + 1e-15) {
      long double fill = 0.0L;
      for (std::size_t i = drop; i < support; ++i) {
        if (cond_asc[i] >= level) break;
        fill += level - cond_asc[i];
      }
      best = std::min(best, std::max(static_cast<double>(removed), static_cast<double>(fill)));
    }
    removed += cond_asc[drop];
  }
  return best;
}

}  // namespace

JointSmoothingResult smooth_conditional_hneginf(const JointPmf& joint, std::string_view target_axis,
                                                std::string_view given_axis, double eps) {
  check_eps(eps);
  const PairView view = make_pair_view(joint, target_axis, given_axis);
  const std::vector<double>& mass = view.pair.masses();

  struct Row {
    std::size_t y = 0;
    double marginal = 0.0;
    std::vector<double> cond_asc;  // positive conditional masses, ascending
  };
  std::vector<Row> rows;
  for (std::size_t y = 0; y < view.n_given; ++y) {
    Row row;
    row.y = y;
    long double sum = 0.0L;
    for (std::size_t x = 0; x < view.n_target; ++x) sum += mass[view.flat(x, y)];
    if (!(sum > 0.0L)) continue;
    row.marginal = static_cast<double>(sum);
    for (std::size_t x = 0; x < view.n_target; ++x) {
      const double m = mass[view.flat(x, y)];
      if (m > 0.0) row.cond_asc.push_back(m / row.marginal);
    }
    std::sort(row.cond_asc.begin(), row.cond_asc.end());
    rows.push_back(std::move(row));
  }

  double current_min = std::numeric_limits<double>::infinity();
  for (const Row& r : rows) current_min = std::min(current_min, r.cond_asc.front());

  // Joint-scale cost of lifting every row's min conditional mass to `t`.
  const auto total_cost = [&](double t) {
    long double cost = 0.0L;
    for (const Row& r : rows) {
      if (r.cond_asc.front() >= t) continue;
      const double c = row_cost_to_level(r.cond_asc, t);
      if (!std::isfinite(c)) return std::numeric_limits<double>::infinity();
      cost += static_cast<long double>(c) * r.marginal;
    }
    return static_cast<double>(cost);
  };

  // Largest equalized level within budget; the level is capped by the best
  // any single row could reach with the entire budget.
  double lo = current_min, hi = 1.0;
  if (total_cost(hi) <= eps) {
    lo = hi;
  } else {
    for (int iter = 0; iter < 100; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (total_cost(mid) <= eps)
        lo = mid;
      else
        hi = mid;
    }
  }
  const double level = lo;

  // Materialize the witness: per affected row, pick the cheapest feasible k,
  // drop the prefix, fill to the level, and settle the row-internal balance
  // on the row's largest atom.
  std::vector<double> witness = mass;
  for (const Row& r : rows) {
    if (r.cond_asc.front() >= level) continue;
    const std::size_t support = r.cond_asc.size();
    std::size_t best_k = support;
    double best_cost = std::numeric_limits<double>::infinity();
    long double removed = 0.0L;
    for (std::size_t drop = 0; drop < support; ++drop) {
      const std::size_t k = support - drop;
      if (level <= 1.0 / static_cast<double>(k) + 1e-15) {
        long double fill = 0.0L;
        for (std::size_t i = drop; i < support; ++i) {
          if (r.cond_asc[i] >= level) break;
          fill += level - r.cond_asc[i];
        }
        const double c = std::max(static_cast<double>(removed), static_cast<double>(fill));
        if (c < best_cost) {
          best_cost = c;
          best_k = k;
        }
      }
      removed += r.cond_asc[drop];
    }

    // Row atoms sorted ascending by conditional mass with index tie-break.
    std::vector<std::size_t> atom_order;
    for (std::size_t x = 0; x < view.n_target; ++x)
      if (mass[view.flat(x, r.y)] > 0.0) atom_order.push_back(x);
    std::stable_sort(atom_order.begin(), atom_order.end(), [&](std::size_t a, std::size_t b) {
      return mass[view.flat(a, r.y)] < mass[view.flat(b, r.y)];
    });

    const std::size_t drop = support - best_k;
    long double pool = 0.0L;  // joint-scale mass freed inside this row
    for (std::size_t i = 0; i < drop; ++i) {
      pool += witness[view.flat(atom_order[i], r.y)];
      witness[view.flat(atom_order[i], r.y)] = 0.0;
    }
    const double joint_level = level * r.marginal;
    long double need = 0.0L;
    for (std::size_t i = drop; i < support; ++i) {
      const std::size_t f = view.flat(atom_order[i], r.y);
      if (witness[f] < joint_level) need += joint_level - witness[f];
    }
    for (std::size_t i = drop; i < support; ++i) {
      const std::size_t f = view.flat(atom_order[i], r.y);
      if (witness[f] < joint_level) witness[f] = joint_level;
    }
    if (pool >= need) {
      witness[view.flat(atom_order.back(), r.y)] += static_cast<double>(pool - need);
    } else {
      long double deficit = need - pool;
      for (std::size_t i = support; i-- > drop && deficit > 1e-18L;) {
        const std::size_t f = view.flat(atom_order[i], r.y);
        const double reducible = witness[f] - joint_level;
        if (reducible <= 0.0) continue;
        const double take = std::min(reducible, static_cast<double>(deficit));
        witness[f] -= take;
        deficit -= take;
      }
    }
  }

  JointPmf witness_joint(view.pair.axes(), std::move(witness));
  const double moved = tv_distance(view.pair.flattened(), witness_joint.flattened());
  return JointSmoothingResult{-std::log2(level), std::move(witness_joint), moved,
                              SmoothingMethod::greedy_heuristic};
}

// --- exhaustive oracle --------------------------------------------------------

namespace {

constexpr std::size_t kOracleAtomCap = 12;

struct SupportAtoms {
  std::vector<std::size_t> index;  // atom flat index, sorted (mass asc, idx asc)
  std::vector<double> mass;
};

SupportAtoms oracle_support(const std::vector<double>& mass) {
  SupportAtoms s;
  s.index = support_ascending(mass);
  if (s.index.size() > kOracleAtomCap)
    throw ResourceCapError("exhaustive oracle supports at most 12 atoms");
  if (s.index.empty()) throw DomainError("oracle requires a nonempty support");
  s.mass.reserve(s.index.size());
  for (std::size_t i : s.index) s.mass.push_back(mass[i]);
  return s;
}

}  // namespace

SmoothingResult oracle_smooth(const Pmf& p, double eps, EntropyOrder order) {
  check_eps(eps);
  const SupportAtoms atoms = oracle_support(p.masses());
  const std::size_t n = atoms.index.size();

  double best_value = 0.0;
  std::vector<double> best_witness;
  bool have_best = false;

  for (std::uint64_t subset = 1; subset < (1ull << n); ++subset) {
    long double dropped = 0.0L;
    std::vector<std::pair<double, std::uint64_t>> kept_runs;
    std::size_t kept_count = 0;
    for (std::size_t i = 0; i < n; ++i) {  // ascending-mass order on purpose
      if (subset & (1ull << i)) {
        if (!kept_runs.empty() && kept_runs.back().first == atoms.mass[i])
          ++kept_runs.back().second;
        else
          kept_runs.emplace_back(atoms.mass[i], 1);
        ++kept_count;
      } else {
        dropped += atoms.mass[i];
      }
    }
    if (static_cast<double>(dropped) > eps + kBudgetSlack) continue;

    double value = 0.0;
    double level = 0.0;
    switch (order.kind) {
      case EntropyOrder::Kind::zero:
        value = std::log2(static_cast<double>(kept_count));
        break;
      case EntropyOrder::Kind::infinity: {
        // Budget left for cutting after paying the drop cost.
        const double cut_budget = std::max(0.0, eps - static_cast<double>(dropped));
        level = std::max(cut_level(kept_runs, cut_budget), 1.0 / static_cast<double>(kept_count));
        value = -std::log2(level);
        break;
      }
      case EntropyOrder::Kind::neg_infinity:
        level = fill_level(kept_runs, eps, 1.0 / static_cast<double>(kept_count));
        value = -std::log2(level);
        break;
      default:
        throw DomainError("oracle smoothing supports orders 0, inf, -inf only");
    }

    // Order 0: minimize support. Order inf: minimize the max (value grows).
    // Order -inf: maximize the min (value shrinks).
    const bool better = !have_best ||
                        (order.kind == EntropyOrder::Kind::zero && value < best_value - 1e-15) ||
                        (order.kind == EntropyOrder::Kind::infinity && value > best_value + 1e-15) ||
                        (order.kind == EntropyOrder::Kind::neg_infinity && value < best_value - 1e-15);
    if (!better) continue;

    best_value = value;
    have_best = true;
    best_witness.assign(p.size(), 0.0);
    for (std::size_t i = 0; i < n; ++i)
      if (subset & (1ull << i)) best_witness[atoms.index[i]] = atoms.mass[i];

    if (order.kind == EntropyOrder::Kind::zero) {
      best_witness[largest_atom(best_witness)] += static_cast<double>(dropped);
    } else if (order.kind == EntropyOrder::Kind::infinity) {
      long double pool = dropped;
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t f = atoms.index[i];
        if ((subset & (1ull << i)) && best_witness[f] > level) {
          pool += best_witness[f] - level;
          best_witness[f] = level;
        }
      }
      for (std::size_t i = 0; i < n && pool > 1e-18L; ++i) {
        const std::size_t f = atoms.index[i];
        if ((subset & (1ull << i)) && best_witness[f] < level) {
          const double add = std::min(static_cast<double>(pool), level - best_witness[f]);
          best_witness[f] += add;
          pool -= add;
        }
      }
    } else {
      long double need = 0.0L;
      std::size_t top = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (!(subset & (1ull << i))) continue;
        top = i;
        if (atoms.mass[i] < level) need += level - atoms.mass[i];
      }
      for (std::size_t i = 0; i < n; ++i)
        if ((subset & (1ull << i)) && best_witness[atoms.index[i]] < level)
          best_witness[atoms.index[i]] = level;
      if (dropped >= need) {
        best_witness[atoms.index[top]] += static_cast<double>(dropped - need);
      } else {
        long double deficit = need - dropped;
        for (std::size_t i = n; i-- > 0 && deficit > 1e-18L;) {
          if (!(subset & (1ull << i))) continue;
          const std::size_t f = atoms.index[i];
          const double reducible = best_witness[f] - level;
          if (reducible <= 0.0) continue;
          const double take = std::min(reducible, static_cast<double>(deficit));
          best_witness[f] -= take;
          deficit -= take;
        }
      }
    }
  }

  Pmf witness_pmf(p.alphabet(), std::move(best_witness));
  const double moved = tv_distance(p, witness_pmf);
  return SmoothingResult{best_value, std::move(witness_pmf), moved,
                         SmoothingMethod::exhaustive_oracle};
}

JointSmoothingResult oracle_smooth_conditional(const JointPmf& joint, std::string_view target_axis,
                                               std::string_view given_axis, double eps,
                                               EntropyOrder order) {
  check_eps(eps);
  if (order.kind != EntropyOrder::Kind::zero && order.kind != EntropyOrder::Kind::neg_infinity)
    throw DomainError("conditional oracle supports orders 0 and -inf only");

  const PairView view = make_pair_view(joint, target_axis, given_axis);
  const std::vector<double>& mass = view.pair.masses();
  const SupportAtoms atoms = oracle_support(mass);
  const std::size_t n = atoms.index.size();

  double best_value = 0.0;
  std::vector<double> best_witness;
  bool have_best = false;

  const auto consider = [&](double value, std::vector<double>&& witness) {
    const bool better = !have_best || value < best_value - 1e-15;
    if (better) {
      best_value = value;
      best_witness = std::move(witness);
      have_best = true;
    }
  };

  for (std::uint64_t subset = 1; subset < (1ull << n); ++subset) {
    long double dropped = 0.0L;
    for (std::size_t i = 0; i < n; ++i)
      if (!(subset & (1ull << i))) dropped += atoms.mass[i];
    if (static_cast<double>(dropped) > eps + kBudgetSlack) continue;

    std::vector<double> witness(view.pair.size(), 0.0);
    for (std::size_t i = 0; i < n; ++i)
      if (subset & (1ull << i)) witness[atoms.index[i]] = atoms.mass[i];

    if (order.kind == EntropyOrder::Kind::zero) {
      std::vector<std::size_t> row_support(view.n_given, 0);
      for (std::size_t f = 0; f < witness.size(); ++f)
        if (witness[f] > 0.0) ++row_support[f % view.n_given];
      const std::size_t max_support = *std::max_element(row_support.begin(), row_support.end());
      witness[largest_atom(witness)] += static_cast<double>(dropped);
      consider(std::log2(static_cast<double>(max_support)), std::move(witness));
      continue;
    }

    // Order -inf: pour the dropped mass onto a singleton row when one exists
    // (its conditional stays degenerate), otherwise onto the global top atom,
    // then equalize all rows to the best shared level fundable within eps.
    std::vector<std::size_t> row_count(view.n_given, 0);
    for (std::size_t f = 0; f < witness.size(); ++f)
      if (witness[f] > 0.0) ++row_count[f % view.n_given];

    std::size_t pour_target = witness.size();
    for (std::size_t f = 0; f < witness.size(); ++f) {
      if (witness[f] <= 0.0 || row_count[f % view.n_given] != 1) continue;
      if (pour_target == witness.size() || witness[f] > witness[pour_target]) pour_target = f;
    }
    if (pour_target == witness.size()) pour_target = largest_atom(witness);
    witness[pour_target] += static_cast<double>(dropped);

    struct RowRef {
      double marginal = 0.0;
      std::vector<double> cond_asc;
    };
    std::vector<RowRef> rows;
    double min_cond = 1.0;
    double level_cap = 1.0;
    for (std::size_t y = 0; y < view.n_given; ++y) {
      RowRef row;
      long double sum = 0.0L;
      for (std::size_t x = 0; x < view.n_target; ++x) sum += witness[view.flat(x, y)];
      if (!(sum > 0.0L)) continue;
      row.marginal = static_cast<double>(sum);
      for (std::size_t x = 0; x < view.n_target; ++x) {
        const double m = witness[view.flat(x, y)];
        if (m > 0.0) row.cond_asc.push_back(m / row.marginal);
      }
      std::sort(row.cond_asc.begin(), row.cond_asc.end());
      min_cond = std::min(min_cond, row.cond_asc.front());
      level_cap = std::min(level_cap, 1.0 / static_cast<double>(row.cond_asc.size()));
      rows.push_back(std::move(row));
    }

    const double fill_budget = std::max(0.0, eps - static_cast<double>(dropped));
    const auto fills_cost = [&](double t) {
      long double cost = 0.0L;
      for (const RowRef& r : rows)
        for (double c : r.cond_asc) {
          if (c >= t) break;
          cost += (t - c) * static_cast<long double>(r.marginal);
        }
      return static_cast<double>(cost);
    };
    double lo = min_cond, hi = level_cap;
    if (hi > lo && fills_cost(hi) <= fill_budget) {
      lo = hi;
    } else if (hi > lo) {
      for (int iter = 0; iter < 100; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (fills_cost(mid) <= fill_budget)
          lo = mid;
        else
          hi = mid;
      }
    }
    const double level = lo;

    // Apply per row: lift low atoms to the level, funded by cutting that
    // row's top atoms down toward the level.
    for (std::size_t y = 0; y < view.n_given; ++y) {
      std::vector<std::size_t> atom_order;
      long double marginal = 0.0L;
      for (std::size_t x = 0; x < view.n_target; ++x) {
        const std::size_t f = view.flat(x, y);
        if (witness[f] > 0.0) {
          atom_order.push_back(x);
          marginal += witness[f];
        }
      }
      if (atom_order.empty()) continue;
      std::stable_sort(atom_order.begin(), atom_order.end(), [&](std::size_t a, std::size_t b) {
        return witness[view.flat(a, y)] < witness[view.flat(b, y)];
      });
      const double joint_level = level * static_cast<double>(marginal);
      long double need = 0.0L;
      for (std::size_t x : atom_order) {
        const std::size_t f = view.flat(x, y);
        if (witness[f] < joint_level) need += joint_level - witness[f];
      }
      if (need <= 0.0L) continue;
      for (std::size_t x : atom_order) {
        const std::size_t f = view.flat(x, y);
        if (witness[f] < joint_level) witness[f] = joint_level;
      }
      long double deficit = need;
      for (std::size_t i = atom_order.size(); i-- > 0 && deficit > 1e-18L;) {
        const std::size_t f = view.flat(atom_order[i], y);
        const double reducible = witness[f] - joint_level;
        if (reducible <= 0.0) continue;
        const double take = std::min(reducible, static_cast<double>(deficit));
        witness[f] -= take;
        deficit -= take;
      }
    }

    consider(-std::log2(level), std::move(witness));
  }

  // The greedy witness belongs to the searched family by construction; fold
  // it in so the reported optimum can never sit on the wrong side of it.
  if (order.kind == EntropyOrder::Kind::neg_infinity) {
    JointSmoothingResult greedy =
        smooth_conditional_hneginf(view.pair, view.pair.axis(0).name, view.pair.axis(1).name, eps);
    consider(greedy.value_bits, std::vector<double>(greedy.witness.masses()));
  }

  JointPmf witness_joint(view.pair.axes(), std::move(best_witness));
  const double moved = tv_distance(view.pair.flattened(), witness_joint.flattened());
  return JointSmoothingResult{best_value, std::move(witness_joint), moved,
                              SmoothingMethod::exhaustive_oracle};
}

// --- spectrum core -------------------------------------------------------------

namespace spectrum {

std::uint64_t MassSpectrum::support_size() const {
  std::uint64_t total = 0;
  for (const Run& r : runs) total += r.count;
  return total;
}

double MassSpectrum::total_mass() const {
  long double total = 0.0L;
  for (const Run& r : runs) total += static_cast<long double>(r.mass) * r.count;
  return static_cast<double>(total);
}

namespace {

MassSpectrum merge_sorted(std::vector<MassSpectrum::Run> runs) {
  std::sort(runs.begin(), runs.end(),
            [](const MassSpectrum::Run& a, const MassSpectrum::Run& b) { return a.mass < b.mass; });
  MassSpectrum out;
  for (const auto& r : runs) {
    if (!out.runs.empty() &&
        std::fabs(out.runs.back().mass - r.mass) <= 1e-12 * std::max(out.runs.back().mass, r.mass)) {
      // ulp-split duplicates of the same product value; average keeps the
      // representative stable against fold order.
      MassSpectrum::Run& back = out.runs.back();
      const long double total = static_cast<long double>(back.mass) * back.count +
                                static_cast<long double>(r.mass) * r.count;
      back.count += r.count;
      back.mass = static_cast<double>(total / back.count);
    } else {
      out.runs.push_back(r);
    }
  }
  return out;
}

}  // namespace

MassSpectrum from_masses(const std::vector<double>& masses) {
  std::vector<MassSpectrum::Run> runs;
  for (double m : masses)
    if (m > 0.0) runs.push_back({m, 1});
  if (runs.empty()) throw DomainError("spectrum requires a nonempty support");
  return merge_sorted(std::move(runs));
}

MassSpectrum iid_power(const MassSpectrum& base, int n) {
  if (n < 1) throw DomainError("spectrum power requires n >= 1");
  MassSpectrum acc;
  acc.runs = {{1.0, 1}};
  for (int i = 0; i < n; ++i) {
    std::vector<MassSpectrum::Run> next;
    next.reserve(acc.runs.size() * base.runs.size());
    for (const auto& a : acc.runs)
      for (const auto& b : base.runs) next.push_back({a.mass * b.mass, a.count * b.count});
    acc = merge_sorted(std::move(next));
    if (acc.runs.size() > 1'000'000)
      throw ResourceCapError("spectrum power produced too many distinct mass values");
  }
  return acc;
}

double shannon_bits(const MassSpectrum& s) {
  long double acc = 0.0L;
  for (const auto& r : s.runs)
    acc -= static_cast<long double>(r.count) * r.mass * std::log2(r.mass);
  return static_cast<double>(acc);
}

double h0_bits(const MassSpectrum& s) { return std::log2(static_cast<double>(s.support_size())); }
double hinf_bits(const MassSpectrum& s) { return -std::log2(s.runs.back().mass); }
double hneginf_bits(const MassSpectrum& s) { return -std::log2(s.runs.front().mass); }

namespace {

// Ascending removal shared by the order-0 and order--inf smoothers: how many
// atoms (and how much mass) the budget deletes from the low end.
struct Removal {
  std::uint64_t atoms = 0;
  long double mass = 0.0L;
  std::size_t full_runs = 0;      // runs entirely removed
  std::uint64_t partial = 0;      // atoms removed from runs[full_runs]
};

Removal remove_ascending(const MassSpectrum& s, double eps) {
  Removal r;
  for (const auto& run : s.runs) {
    const long double whole = static_cast<long double>(run.mass) * run.count;
    if (static_cast<double>(r.mass + whole) <= eps + kBudgetSlack) {
      r.mass += whole;
      r.atoms += run.count;
      ++r.full_runs;
      continue;
    }
    const double room = eps + kBudgetSlack - static_cast<double>(r.mass);
    std::uint64_t take = room > 0.0 ? static_cast<std::uint64_t>(room / run.mass) : 0;
    take = std::min(take, run.count);
    if (take == run.count) take = run.count - 1;  // never empty the support
    r.partial = take;
    r.atoms += take;
    r.mass += static_cast<long double>(take) * run.mass;
    break;
  }
  if (r.full_runs == s.runs.size()) {  // keep at least one atom
    --r.full_runs;
    r.partial = s.runs.back().count - 1;
    r.atoms = 0;
    r.mass = 0.0L;
    for (std::size_t i = 0; i < r.full_runs; ++i) {
      r.atoms += s.runs[i].count;
      r.mass += static_cast<long double>(s.runs[i].mass) * s.runs[i].count;
    }
    r.atoms += r.partial;
    r.mass += static_cast<long double>(r.partial) * s.runs.back().mass;
  }
  return r;
}

std::vector<std::pair<double, std::uint64_t>> kept_after(const MassSpectrum& s, const Removal& r) {
  std::vector<std::pair<double, std::uint64_t>> kept;
  for (std::size_t i = r.full_runs; i < s.runs.size(); ++i) {
    std::uint64_t count = s.runs[i].count;
    if (i == r.full_runs) count -= r.partial;
    if (count > 0) kept.emplace_back(s.runs[i].mass, count);
  }
  return kept;
}

std::vector<std::pair<double, std::uint64_t>> all_runs(const MassSpectrum& s) {
  std::vector<std::pair<double, std::uint64_t>> out;
  out.reserve(s.runs.size());
  for (const auto& r : s.runs) out.emplace_back(r.mass, r.count);
  return out;
}

}  // namespace

double smooth_h0_bits(const MassSpectrum& s, double eps) {
  check_eps(eps);
  const Removal r = remove_ascending(s, eps);
  return std::log2(static_cast<double>(s.support_size() - r.atoms));
}

double smooth_hinf_bits(const MassSpectrum& s, double eps) {
  check_eps(eps);
  const double flat = 1.0 / static_cast<double>(s.support_size());
  return -std::log2(std::max(cut_level(all_runs(s), eps), flat));
}

double smooth_hneginf_bits(const MassSpectrum& s, double eps) {
  check_eps(eps);
  const Removal r = remove_ascending(s, eps);
  const std::uint64_t kept_atoms = s.support_size() - r.atoms;
  const double level =
      fill_level(kept_after(s, r), eps, 1.0 / static_cast<double>(kept_atoms));
  return -std::log2(level);
}

}  // namespace spectrum

}  // namespace oneshot
