#include "oneshot/slepian_wolf.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace oneshot {

namespace {

void require_pair(const JointPmf& joint, const char* who) {
  if (joint.arity() != 2) throw DomainError(std::string(who) + " requires an arity-2 joint");
}

unsigned ceil_bits(double v) {
  if (v <= 0.0) return 0;
  const double c = std::ceil(v - 1e-9);
  if (c > static_cast<double>(kMaxCodeBits))
    throw DomainError("required code length exceeds the 64-bit cap");
  return static_cast<unsigned>(c);
}

}  // namespace

SwLowerBounds sw_lower_bounds(const JointPmf& joint, double eps) {
  require_pair(joint, "sw_lower_bounds");
  const std::string x = joint.axis(0).name, y = joint.axis(1).name;
  SwLowerBounds lb;
  lb.l_x = smooth_conditional_h0(joint, x, y, eps).value_bits;
  lb.l_y = smooth_conditional_h0(joint, y, x, eps).value_bits;
  lb.l_sum = smooth_h0(joint.flattened(), eps).value_bits;
  lb.l_x_heuristic = true;
  lb.l_y_heuristic = true;
  return lb;
}

SwRateRegion sw_achievable_region(const JointPmf& joint, const EpsilonBudget& budget, double delta,
                                  const EnumCaps& caps) {
  require_pair(joint, "sw_achievable_region");
  budget.validate();

  const TypicalSet set(joint, delta, caps);
  if (set.tail() > budget.parts[0] + kBudgetSlack)
    throw DomainError("typical-set tail " + std::to_string(set.tail()) +
                      " exceeds eps0 = " + std::to_string(budget.parts[0]) +
                      " at delta = " + std::to_string(delta));

  const std::string kx = joint.axis(0).name, ky = joint.axis(1).name;
  SwRateRegion region;
  region.budget = budget;
  region.delta = delta;
  region.xi_xy = set.bounds_for(kx + ky);
  region.xi_x = set.bounds_for(kx);
  region.xi_y = set.bounds_for(ky);

  const auto clamp0 = [](double v, bool& flag) {
    if (v < 0.0) {
      flag = true;
      return 0.0;
    }
    return v;
  };
  region.achievable_x = clamp0(
      region.xi_xy.xi_max - region.xi_y.xi_min - std::log2(budget.parts[1]), region.clamped_x);
  region.achievable_y = clamp0(
      region.xi_xy.xi_max - region.xi_x.xi_min - std::log2(budget.parts[2]), region.clamped_y);
  region.achievable_sum =
      clamp0(region.xi_xy.xi_max - std::log2(budget.parts[3]), region.clamped_sum);

  region.lower = sw_lower_bounds(joint, budget.total);
  return region;
}

std::pair<unsigned, unsigned> sw_pick_lengths(const SwRateRegion& region) {
  unsigned lx = ceil_bits(region.achievable_x);
  unsigned ly = ceil_bits(region.achievable_y);
  // Grow the shorter code until the sum constraint is met as well.
  while (static_cast<double>(lx) + static_cast<double>(ly) < region.achievable_sum - 1e-9) {
    if (lx <= ly)
      ++lx;
    else
      ++ly;
    if (lx + ly > 2 * kMaxCodeBits) throw DomainError("sum-rate constraint exceeds the length cap");
  }
  return {lx, ly};
}

std::uint64_t sw_encode_x(std::size_t x_index, const SwProtocol& proto) {
  return hash_eval(proto.seed_x, x_index);
}

std::uint64_t sw_encode_y(std::size_t y_index, const SwProtocol& proto) {
  return hash_eval(proto.seed_y, y_index);
}

SwDecodeResult sw_decode(std::uint64_t code_x, std::uint64_t code_y, const SwProtocol& proto) {
  const JointPmf& src = proto.decoder_set->source();
  const std::size_t ny = src.axis(1).alphabet.size();
  SwDecodeResult result;
  for (std::size_t flat : proto.decoder_set->members()) {
    const std::size_t x = flat / ny, y = flat % ny;
    if (hash_eval(proto.seed_x, x) != code_x || hash_eval(proto.seed_y, y) != code_y) continue;
    if (result.outcome == SwDecodeResult::Outcome::decoded) {
      result.outcome = SwDecodeResult::Outcome::ambiguous;
      return result;
    }
    result.outcome = SwDecodeResult::Outcome::decoded;
    result.x_index = x;
    result.y_index = y;
  }
  return result;
}

double sw_union_bound(const JointPmf& joint, unsigned len_x, unsigned len_y, double delta,
                      double eps0, const EnumCaps& caps) {
  require_pair(joint, "sw_union_bound");
  const TypicalSet set(joint, delta, caps);
  const std::string kx = joint.axis(0).name, ky = joint.axis(1).name;
  const double xi_max_xy = set.bounds_for(kx + ky).xi_max;
  const double xi_min_x = set.bounds_for(kx).xi_min;
  const double xi_min_y = set.bounds_for(ky).xi_min;
  return eps0 + std::exp2(xi_max_xy - xi_min_y - static_cast<double>(len_x)) +
         std::exp2(xi_max_xy - xi_min_x - static_cast<double>(len_y)) +
         std::exp2(xi_max_xy - static_cast<double>(len_x) - static_cast<double>(len_y));
}

SimulationReport sw_simulate(const JointPmf& joint, unsigned len_x, unsigned len_y, double delta,
                             std::uint64_t trials, std::uint64_t master_seed, double target_epsilon,
                             double eps0, SimMode mode, const EnumCaps& caps) {
  require_pair(joint, "sw_simulate");
  if (trials < 1) throw DomainError("simulation needs at least one trial");

  const TypicalSet set(joint, delta, caps);
  const std::size_t nx = joint.axis(0).alphabet.size();
  const std::size_t ny = joint.axis(1).alphabet.size();
  if (mode == SimMode::exact_per_seed) {
    if (nx * ny > (1u << 16))
      throw DomainError("exact-per-seed mode is limited to sources of at most 2^16 pairs");
    if (len_x + len_y > 64)
      throw DomainError("exact-per-seed mode needs the code pair to fit in 64 bits");
  }
  const double analytic = sw_union_bound(joint, len_x, len_y, delta, eps0, caps);

  // Per-trial symbol code tables; the decoder scan then reduces to integer
  // comparisons over the member list.
  std::vector<std::uint64_t> code_x(nx), code_y(ny);

  std::uint64_t failures = 0;
  long double mean_acc = 0.0L, m2_acc = 0.0L;  // Welford over per-seed error
  std::uint64_t exceed = 0;

  for (std::uint64_t t = 0; t < trials; ++t) {
    RngStream rng(master_seed, t);
    const HashSeed seed_x = draw_seed(nx, len_x, rng);
    const HashSeed seed_y = draw_seed(ny, len_y, rng);
    for (std::size_t x = 0; x < nx; ++x) code_x[x] = hash_eval(seed_x, x);
    for (std::size_t y = 0; y < ny; ++y) code_y[y] = hash_eval(seed_y, y);

    if (mode == SimMode::per_draw) {
      const std::size_t source = joint.sample_flat(rng);
      const std::size_t sx = source / ny, sy = source % ny;
      const std::uint64_t cx = code_x[sx], cy = code_y[sy];

      std::size_t hits = 0, hx = 0, hy = 0;
      for (std::size_t flat : set.members()) {
        const std::size_t x = flat / ny, y = flat % ny;
        if (code_x[x] != cx || code_y[y] != cy) continue;
        if (++hits > 1) break;
        hx = x;
        hy = y;
      }
      if (hits != 1 || hx != sx || hy != sy) ++failures;
    } else {
      // Decoding succeeds exactly on members whose code pair is unique, so
      // the per-seed error is one minus the mass of singleton buckets.
      std::unordered_map<std::uint64_t, std::pair<std::uint32_t, double>> buckets;
      buckets.reserve(set.members().size() * 2);
      for (std::size_t flat : set.members()) {
        const std::size_t x = flat / ny, y = flat % ny;
        const std::uint64_t key = (code_x[x] << len_y) | code_y[y];
        auto& slot = buckets[key];
        ++slot.first;
        slot.second = joint.mass(flat);
      }
      long double correct = 0.0L;
      for (const auto& [key, slot] : buckets)
        if (slot.first == 1) correct += slot.second;
      const double pe = static_cast<double>(1.0L - correct);
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

}  // namespace oneshot
