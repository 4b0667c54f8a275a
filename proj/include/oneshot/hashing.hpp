#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oneshot/rng.hpp"

namespace oneshot {

// Two-universal family: uniformly random l x b bit matrix over GF(2).
// For x != x', Pr[Mx = Mx'] = Pr[M(x xor x') = 0] = 2^-l exactly.
struct HashSeed {
  std::vector<std::uint64_t> rows;  // rows.size() == output_bits, b bits each
  unsigned input_bits = 1;          // b = ceil(log2 domain), at least 1
  unsigned output_bits = 0;         // l, up to 64

  std::string to_hex() const;  // "<l>x<b>:" + fixed-width hex per row
  static HashSeed from_hex(const std::string& text);
};

inline constexpr unsigned kMaxCodeBits = 64;

unsigned input_bits_for_domain(std::uint64_t domain_size);

// Matrix rows drawn from the stream in order; deterministic per stream.
HashSeed draw_seed(std::uint64_t domain_size, unsigned output_bits, RngStream& rng);

// GF(2) matrix-vector product of the index's bit expansion. Bit i of the
// code is the parity of rows[i] & index.
std::uint64_t hash_eval(const HashSeed& seed, std::uint64_t index);

struct CollisionStats {
  double max_pair_probability = 0.0;
  double mean_pair_probability = 0.0;
  std::uint64_t trials = 0;  // matrices enumerated or sampled
  bool exact = false;
};

// Full seed enumeration; requires output_bits * input_bits <= 24 and a sane
// number of (pair, matrix) combinations.
CollisionStats collision_probability_exact(std::uint64_t domain_size, unsigned output_bits);

// Random (seed, pair) sampling; the pooled estimate concentrates on 2^-l.
CollisionStats collision_probability_monte_carlo(std::uint64_t domain_size, unsigned output_bits,
                                                 std::uint64_t trials, RngStream& rng);

}  // namespace oneshot
