#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "oneshot/pmf.hpp"
#include "oneshot/report.hpp"
#include "oneshot/typical.hpp"

namespace oneshot {

// P(x, y, z) = p_x(x) p_y(y) ch(z | x, y).
JointPmf induced_joint(const Pmf& p_x, const Pmf& p_y, const Channel& ch);

// Axis subsets of a triple, used to key surprisal windows and projections.
enum class TripleProjection : unsigned { X = 1, Y = 2, Z = 4, XY = 3, XZ = 5, YZ = 6, XYZ = 7 };

// n-fold memoryless view of a triple source built from a per-copy joint.
// Everything is evaluated in product form: surprisal windows come from mass
// spectra, typicality of a tuple is a sum of per-copy surprisals checked
// against the windows, and the tail is an exact sum over the n-fold support.
// The dense n-fold joint itself is never materialized, which is what keeps
// blocklengths like n = 8 over a ternary output inside the enumeration caps.
class TripleContext {
 public:
  TripleContext(JointPmf per_copy, int n, double delta, const EnumCaps& caps = {});

  const JointPmf& per_copy() const { return per_copy_; }
  int blocklength() const { return n_; }
  double delta() const { return delta_; }
  double tail() const { return tail_; }
  const XiBounds& bounds_for(TripleProjection p) const;

  // Per-axis indices are flat indices into the n-fold power alphabets.
  bool contains(std::uint64_t x, std::uint64_t y, std::uint64_t z) const;

  std::uint64_t axis_size(int axis) const;  // |alphabet|^n for axis 0..2

 private:
  JointPmf per_copy_;
  int n_;
  double delta_;
  double tail_ = 0.0;
  std::array<std::size_t, 3> extents_{};            // per-copy alphabet sizes
  std::array<XiBounds, 8> bounds_{};                // indexed by projection mask
  std::array<std::vector<double>, 8> surprisal_{};  // per-copy tables per mask
  double tol_ = kEntropyTolerance;

  double copy_surprisal(unsigned mask, std::size_t x, std::size_t y, std::size_t z) const;
  void accumulate_tail(const EnumCaps& caps);
};

struct MacRateRegion {
  double c1_max = 0.0;   // ximin(X) + ximin(YZ) - ximax(XYZ) + log2 eps1
  double c2_max = 0.0;   // ximin(Y) + ximin(XZ) - ximax(XYZ) + log2 eps2
  double sum_max = 0.0;  // ximin(X)+ximin(Y)+ximin(Z) - ximax(XYZ) + log2 eps3
  EpsilonBudget budget;
  double delta = 0.0;
};

// DomainError when the triple typical set's tail at this delta exceeds eps0.
// Values may be negative (empty one-shot region) and are reported as-is.
MacRateRegion mac_achievable_region(const TripleContext& ctx, const EpsilonBudget& budget);
MacRateRegion mac_achievable_region(const JointPmf& joint3, const EpsilonBudget& budget,
                                    double delta, const EnumCaps& caps = {});

// Largest integer rate pair inside all three caps; ties prefer balance, then
// the first sender. Negative caps clamp the corresponding rate to 0.
std::pair<unsigned, unsigned> mac_pick_rates(const MacRateRegion& region);

// eps0 + 2^{C1 - A1} + 2^{C2 - A2} + 2^{C1 + C2 - A3} with the A_i the
// window combinations from the region formulas (log2 eps_i excluded).
double mac_union_bound(const TripleContext& ctx, unsigned c1, unsigned c2, double eps0);
double mac_union_bound(const JointPmf& joint3, unsigned c1, unsigned c2, double delta, double eps0,
                       const EnumCaps& caps = {});

// Random codebooks, i.i.d. per the input marginals; deterministic per stream.
struct MacCode {
  std::vector<std::uint64_t> codebook_x;  // 2^c1 entries, n-fold X indices
  std::vector<std::uint64_t> codebook_y;  // 2^c2 entries
  unsigned c1 = 0, c2 = 0;
  const TripleContext* decoder_set = nullptr;
};

MacCode generate_codebooks(const Pmf& p_x, const Pmf& p_y, int n, unsigned c1, unsigned c2,
                           const TripleContext& decoder_set, RngStream& rng);

struct MacDecodeResult {
  enum class Outcome { decoded, no_candidate, ambiguous };
  Outcome outcome = Outcome::no_candidate;
  std::uint64_t m1 = 0, m2 = 0;
};

// Unique message pair whose triple with z is typical; otherwise an error
// declaration (a decoding-error outcome, not a fault).
MacDecodeResult mac_decode(std::uint64_t z, const MacCode& code);

// Per trial: fresh codebooks, fixed message pair (1,1) (random-code symmetry
// makes the conditional error independent of the pair), channel draw, decode.
// exact_per_seed instead sums the channel law over all outputs per codebook.
// Rates above the region caps only warn; the run proceeds.
SimulationReport mac_simulate(const Pmf& p_x, const Pmf& p_y, const Channel& ch, int n,
                              unsigned c1, unsigned c2, const TripleContext& ctx,
                              std::uint64_t trials, std::uint64_t master_seed,
                              double target_epsilon,
                              const std::optional<MacRateRegion>& region = std::nullopt,
                              SimMode mode = SimMode::per_draw);

// First grid delta whose triple tail is <= eps0 (same contract as the
// typical-set scan).
double mac_find_delta(const JointPmf& per_copy, int n, double eps0, double grid_step,
                      const EnumCaps& caps = {});

}  // namespace oneshot
