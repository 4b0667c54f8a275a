#include "oneshot/mac.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

namespace oneshot {

namespace {

constexpr double kZeroSurprisal = 1e18;  // sentinel for zero-mass projections

unsigned mask_of(TripleProjection p) { return static_cast<unsigned>(p); }

}  // namespace

JointPmf induced_joint(const Pmf& p_x, const Pmf& p_y, const Channel& ch) {
  if (ch.inputs().size() != 2) throw DomainError("a two-user channel needs two input axes");
  if (ch.inputs()[0].alphabet != p_x.alphabet() || ch.inputs()[1].alphabet != p_y.alphabet())
    throw DomainError("channel input alphabets do not match the source marginals");

  const std::size_t nx = p_x.size(), ny = p_y.size(), nz = ch.output().alphabet.size();
  std::vector<double> mass(nx * ny * nz);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y)
      for (std::size_t z = 0; z < nz; ++z)
        mass[(x * ny + y) * nz + z] = p_x.mass(x) * p_y.mass(y) * ch.prob(x * ny + y, z);
  return JointPmf({ch.inputs()[0], ch.inputs()[1], ch.output()}, std::move(mass));
}

TripleContext::TripleContext(JointPmf per_copy, int n, double delta, const EnumCaps& caps)
    : per_copy_(std::move(per_copy)), n_(n), delta_(delta) {
  if (per_copy_.arity() != 3) throw DomainError("triple context requires an arity-3 joint");
  if (n_ < 1) throw DomainError("blocklength must be at least 1");
  if (!(delta_ >= 0.0) || delta_ >= 1.0) throw DomainError("delta must lie in [0, 1)");

  for (int a = 0; a < 3; ++a) extents_[a] = per_copy_.axis(a).alphabet.size();

  // Per-projection marginals drive both the surprisal tables (per-copy
  // contributions) and the n-fold windows (via the mass spectrum; products of
  // i.i.d. copies never need the dense n-fold joint).
  for (unsigned mask = 1; mask <= 7; ++mask) {
    std::vector<std::string> names;
    double log_alpha = 0.0;
    for (int a = 0; a < 3; ++a) {
      if (mask & (1u << a)) {
        names.push_back(per_copy_.axis(a).name);
        log_alpha += std::log2(static_cast<double>(extents_[a]));
      }
    }
    const JointPmf marg = mask == 7 ? per_copy_ : marginalize(per_copy_, names);
    surprisal_[mask].resize(marg.size());
    for (std::size_t f = 0; f < marg.size(); ++f)
      surprisal_[mask][f] = marg.mass(f) > 0.0 ? -std::log2(marg.mass(f)) : kZeroSurprisal;
    bounds_[mask] = xi_bounds_from_spectrum(spectrum::iid_power(spectrum::from_masses(marg.masses()), n_),
                                            delta_, static_cast<double>(n_) * log_alpha);
  }
  accumulate_tail(caps);
}

double TripleContext::copy_surprisal(unsigned mask, std::size_t x, std::size_t y,
                                     std::size_t z) const {
  std::size_t flat = 0;
  if (mask & 1u) flat = flat * extents_[0] + x;
  if (mask & 2u) flat = flat * extents_[1] + y;
  if (mask & 4u) flat = flat * extents_[2] + z;
  return surprisal_[mask][flat];
}

void TripleContext::accumulate_tail(const EnumCaps& caps) {
  // Exact member mass: walk all sequences of per-copy support atoms with a
  // running surprisal vector; anything involving a zero-mass atom is outside
  // the set by definition and contributes straight to the tail.
  std::vector<std::size_t> support;
  for (std::size_t f = 0; f < per_copy_.size(); ++f)
    if (per_copy_.mass(f) > 0.0) support.push_back(f);

  double sequences = 1.0;
  for (int i = 0; i < n_; ++i) {
    sequences *= static_cast<double>(support.size());
    if (sequences > static_cast<double>(caps.joint))
      throw ResourceCapError("triple typicality scan exceeds the joint enumeration cap");
  }

  // Per-support-atom data: mass and the seven surprisal contributions.
  const std::size_t ns = support.size();
  std::vector<double> atom_mass(ns);
  std::vector<std::array<double, 8>> contrib(ns);
  std::vector<std::size_t> digits(3);
  for (std::size_t i = 0; i < ns; ++i) {
    atom_mass[i] = per_copy_.mass(support[i]);
    per_copy_.unflatten(support[i], digits);
    for (unsigned mask = 1; mask <= 7; ++mask)
      contrib[i][mask] = copy_surprisal(mask, digits[0], digits[1], digits[2]);
  }

  long double member_mass = 0.0L;
  std::vector<std::size_t> choice(static_cast<std::size_t>(n_), 0);
  std::vector<std::array<double, 8>> partial(static_cast<std::size_t>(n_) + 1);
  std::vector<double> partial_mass(static_cast<std::size_t>(n_) + 1, 1.0);
  partial[0].fill(0.0);

  int depth = 0;
  for (;;) {
    if (depth == n_) {
      bool member = true;
      for (unsigned mask = 1; mask <= 7 && member; ++mask) {
        const double s = partial[depth][mask];
        const XiBounds& b = bounds_[mask];
        if (s < b.xi_min - tol_ || s > b.xi_max + tol_) member = false;
      }
      if (member) member_mass += partial_mass[depth];
      // Backtrack to the next sequence.
      while (depth > 0 && ++choice[depth - 1] == ns) {
        choice[depth - 1] = 0;
        --depth;
      }
      if (depth == 0) break;
      --depth;
    }
    const std::size_t pick = choice[depth];
    for (unsigned mask = 1; mask <= 7; ++mask)
      partial[depth + 1][mask] = partial[depth][mask] + contrib[pick][mask];
    partial_mass[depth + 1] = partial_mass[depth] * atom_mass[pick];
    ++depth;
  }

  tail_ = std::max(0.0, static_cast<double>(1.0L - member_mass));
}

const XiBounds& TripleContext::bounds_for(TripleProjection p) const { return bounds_[mask_of(p)]; }

bool TripleContext::contains(std::uint64_t x, std::uint64_t y, std::uint64_t z) const {
  std::array<double, 8> sums{};
  std::uint64_t rx = x, ry = y, rz = z;
  for (int i = 0; i < n_; ++i) {
    const std::size_t dx = static_cast<std::size_t>(rx % extents_[0]);
    const std::size_t dy = static_cast<std::size_t>(ry % extents_[1]);
    const std::size_t dz = static_cast<std::size_t>(rz % extents_[2]);
    rx /= extents_[0];
    ry /= extents_[1];
    rz /= extents_[2];
    for (unsigned mask = 1; mask <= 7; ++mask) sums[mask] += copy_surprisal(mask, dx, dy, dz);
  }
  for (unsigned mask = 1; mask <= 7; ++mask) {
    const XiBounds& b = bounds_[mask];
    if (sums[mask] < b.xi_min - tol_ || sums[mask] > b.xi_max + tol_) return false;
  }
  return true;
}

std::uint64_t TripleContext::axis_size(int axis) const {
  std::uint64_t total = 1;
  for (int i = 0; i < n_; ++i) total *= extents_[axis];
  return total;
}

MacRateRegion mac_achievable_region(const TripleContext& ctx, const EpsilonBudget& budget) {
  budget.validate();
  if (ctx.tail() > budget.parts[0] + kBudgetSlack)
    throw DomainError("triple typical-set tail " + std::to_string(ctx.tail()) +
                      " exceeds eps0 = " + std::to_string(budget.parts[0]));
  const double xi_max_xyz = ctx.bounds_for(TripleProjection::XYZ).xi_max;
  MacRateRegion r;
  r.budget = budget;
  r.delta = ctx.delta();
  r.c1_max = ctx.bounds_for(TripleProjection::X).xi_min +
             ctx.bounds_for(TripleProjection::YZ).xi_min - xi_max_xyz + std::log2(budget.parts[1]);
  r.c2_max = ctx.bounds_for(TripleProjection::Y).xi_min +
             ctx.bounds_for(TripleProjection::XZ).xi_min - xi_max_xyz + std::log2(budget.parts[2]);
  r.sum_max = ctx.bounds_for(TripleProjection::X).xi_min +
              ctx.bounds_for(TripleProjection::Y).xi_min +
              ctx.bounds_for(TripleProjection::Z).xi_min - xi_max_xyz +
              std::log2(budget.parts[3]);
  return r;
}

MacRateRegion mac_achievable_region(const JointPmf& joint3, const EpsilonBudget& budget,
                                    double delta, const EnumCaps& caps) {
  return mac_achievable_region(TripleContext(joint3, 1, delta, caps), budget);
}

std::pair<unsigned, unsigned> mac_pick_rates(const MacRateRegion& region) {
  const auto floor0 = [](double v) {
    return v < 0.0 ? 0u : static_cast<unsigned>(std::floor(v + 1e-9));
  };
  const unsigned cap1 = floor0(region.c1_max);
  const unsigned cap2 = floor0(region.c2_max);
  const unsigned cap_sum = std::min(floor0(region.sum_max), cap1 + cap2);

  // Largest total rate inside all caps; balance ties, then favor sender 1.
  for (unsigned total = cap_sum;; --total) {
    unsigned best_c1 = 0;
    bool found = false;
    for (unsigned c1 = 0; c1 <= std::min(total, cap1); ++c1) {
      const unsigned c2 = total - c1;
      if (c2 > cap2) continue;
      if (!found) {
        best_c1 = c1;
        found = true;
        continue;
      }
      const auto balance = [total](unsigned a) {
        return std::max(a, total - a) - std::min(a, total - a);
      };
      if (balance(c1) < balance(best_c1) || (balance(c1) == balance(best_c1) && c1 > best_c1))
        best_c1 = c1;
    }
    if (found) return {best_c1, total - best_c1};
    if (total == 0) return {0, 0};
  }
}

double mac_union_bound(const TripleContext& ctx, unsigned c1, unsigned c2, double eps0) {
  const double xi_max_xyz = ctx.bounds_for(TripleProjection::XYZ).xi_max;
  const double a1 = ctx.bounds_for(TripleProjection::X).xi_min +
                    ctx.bounds_for(TripleProjection::YZ).xi_min - xi_max_xyz;
  const double a2 = ctx.bounds_for(TripleProjection::Y).xi_min +
                    ctx.bounds_for(TripleProjection::XZ).xi_min - xi_max_xyz;
  const double a3 = ctx.bounds_for(TripleProjection::X).xi_min +
                    ctx.bounds_for(TripleProjection::Y).xi_min +
                    ctx.bounds_for(TripleProjection::Z).xi_min - xi_max_xyz;
  return eps0 + std::exp2(static_cast<double>(c1) - a1) + std::exp2(static_cast<double>(c2) - a2) +
         std::exp2(static_cast<double>(c1) + static_cast<double>(c2) - a3);
}

double mac_union_bound(const JointPmf& joint3, unsigned c1, unsigned c2, double delta, double eps0,
                       const EnumCaps& caps) {
  return mac_union_bound(TripleContext(joint3, 1, delta, caps), c1, c2, eps0);
}

MacCode generate_codebooks(const Pmf& p_x, const Pmf& p_y, int n, unsigned c1, unsigned c2,
                           const TripleContext& decoder_set, RngStream& rng) {
  if (c1 > 20 || c2 > 20) throw ResourceCapError("codebooks above 2^20 entries are not supported");
  MacCode code;
  code.c1 = c1;
  code.c2 = c2;
  code.decoder_set = &decoder_set;

  const auto draw_word = [n, &rng](const Pmf& p) {
    std::uint64_t flat = 0;
    for (int i = 0; i < n; ++i) flat = flat * p.size() + p.sample_index(rng);
    return flat;
  };
  code.codebook_x.reserve(1ull << c1);
  for (std::uint64_t m = 0; m < (1ull << c1); ++m) code.codebook_x.push_back(draw_word(p_x));
  code.codebook_y.reserve(1ull << c2);
  for (std::uint64_t m = 0; m < (1ull << c2); ++m) code.codebook_y.push_back(draw_word(p_y));
  return code;
}

MacDecodeResult mac_decode(std::uint64_t z, const MacCode& code) {
  MacDecodeResult result;
  for (std::uint64_t m1 = 0; m1 < code.codebook_x.size(); ++m1) {
    for (std::uint64_t m2 = 0; m2 < code.codebook_y.size(); ++m2) {
      if (!code.decoder_set->contains(code.codebook_x[m1], code.codebook_y[m2], z)) continue;
      if (result.outcome == MacDecodeResult::Outcome::decoded) {
        result.outcome = MacDecodeResult::Outcome::ambiguous;
        return result;
      }
      result.outcome = MacDecodeResult::Outcome::decoded;
      result.m1 = m1;
      result.m2 = m2;
    }
  }
  return result;
}

SimulationReport mac_simulate(const Pmf& p_x, const Pmf& p_y, const Channel& ch, int n,
                              unsigned c1, unsigned c2, const TripleContext& ctx,
                              std::uint64_t trials, std::uint64_t master_seed,
                              double target_epsilon, const std::optional<MacRateRegion>& region,
                              SimMode mode) {
  if (trials < 1) throw DomainError("simulation needs at least one trial");
  if (ch.inputs().size() != 2) throw DomainError("a two-user channel needs two input axes");

  double eps0 = ctx.tail();
  if (region) {
    eps0 = region->budget.parts[0];
    if (static_cast<double>(c1) > region->c1_max + 1e-9 ||
        static_cast<double>(c2) > region->c2_max + 1e-9 ||
        static_cast<double>(c1) + static_cast<double>(c2) > region->sum_max + 1e-9)
      std::cerr << "warning: rates (" << c1 << ", " << c2
                << ") exceed the achievable caps; the error guarantee does not apply\n";
  }
  const double analytic = mac_union_bound(ctx, c1, c2, eps0);

  const std::size_t ny = p_y.size();
  const std::size_t nz = ch.output().alphabet.size();

  std::uint64_t failures = 0;
  long double mean_acc = 0.0L, m2_acc = 0.0L;
  std::uint64_t exceed = 0;

  std::vector<std::size_t> dx(static_cast<std::size_t>(n)), dy(static_cast<std::size_t>(n));
  for (std::uint64_t t = 0; t < trials; ++t) {
    RngStream rng(master_seed, t);
    const MacCode code = generate_codebooks(p_x, p_y, n, c1, c2, ctx, rng);
    const std::uint64_t x = code.codebook_x[0];
    const std::uint64_t y = code.codebook_y[0];

    // Per-copy digits of the transmitted pair (copy 0 most significant).
    std::uint64_t rx = x, ry = y;
    for (int i = n - 1; i >= 0; --i) {
      dx[static_cast<std::size_t>(i)] = static_cast<std::size_t>(rx % p_x.size());
      dy[static_cast<std::size_t>(i)] = static_cast<std::size_t>(ry % ny);
      rx /= p_x.size();
      ry /= ny;
    }

    if (mode == SimMode::per_draw) {
      std::uint64_t z = 0;
      for (int i = 0; i < n; ++i) {
        const std::size_t row = dx[static_cast<std::size_t>(i)] * ny + dy[static_cast<std::size_t>(i)];
        const double u = rng.next_unit();
        long double cum = 0.0L;
        std::size_t zi = nz - 1;
        for (std::size_t cand = 0; cand < nz; ++cand) {
          const double pr = ch.prob(row, cand);
          if (pr <= 0.0) continue;
          cum += pr;
          if (u < static_cast<double>(cum)) {
            zi = cand;
            break;
          }
        }
        z = z * nz + zi;
      }
      const MacDecodeResult decoded = mac_decode(z, code);
      if (decoded.outcome != MacDecodeResult::Outcome::decoded || decoded.m1 != 0 ||
          decoded.m2 != 0)
        ++failures;
    } else {
      // Exact conditional error for this codebook: sum the channel law over
      // every output block.
      std::uint64_t z_total = 1;
      for (int i = 0; i < n; ++i) {
        z_total *= nz;
        if (z_total > (1ull << 24))
          throw ResourceCapError("exact-per-seed mode cannot enumerate this output space");
      }
      long double err = 0.0L;
      std::vector<std::size_t> zd(static_cast<std::size_t>(n), 0);
      for (std::uint64_t z = 0; z < z_total; ++z) {
        std::uint64_t rz = z;
        for (int i = n - 1; i >= 0; --i) {
          zd[static_cast<std::size_t>(i)] = static_cast<std::size_t>(rz % nz);
          rz /= nz;
        }
        double pr = 1.0;
        for (int i = 0; i < n && pr > 0.0; ++i)
          pr *= ch.prob(dx[static_cast<std::size_t>(i)] * ny + dy[static_cast<std::size_t>(i)],
                        zd[static_cast<std::size_t>(i)]);
        if (pr <= 0.0) continue;
        const MacDecodeResult decoded = mac_decode(z, code);
        if (decoded.outcome != MacDecodeResult::Outcome::decoded || decoded.m1 != 0 ||
            decoded.m2 != 0)
          err += pr;
      }
      const double pe = static_cast<double>(err);
      if (pe > target_epsilon) ++exceed;
      const long double delta_mean = pe - mean_acc;
      mean_acc += delta_mean / static_cast<long double>(t + 1);
      m2_acc += delta_mean * (pe - mean_acc);
    }
  }

  if (mode == SimMode::per_draw) return make_draw_report(trials, failures, analytic, target_epsilon);
  const double variance =
      trials > 1 ? static_cast<double>(m2_acc / static_cast<long double>(trials - 1)) : 0.0;
  return make_exact_report(trials, static_cast<double>(mean_acc), variance, exceed, analytic,
                           target_epsilon);
}

double mac_find_delta(const JointPmf& per_copy, int n, double eps0, double grid_step,
                      const EnumCaps& caps) {
  if (!(eps0 > 0.0) || eps0 >= 1.0) throw DomainError("eps0 must lie in (0, 1)");
  if (!(grid_step > 0.0)) throw DomainError("grid step must be positive");
  for (double delta = 0.0; delta < 1.0; delta += grid_step) {
    if (TripleContext(per_copy, n, delta, caps).tail() <= eps0) return delta;
  }
  throw InfeasibilityError("no delta on the grid meets the tail target " + std::to_string(eps0));
}

}  // namespace oneshot
