#include "oneshot/hashing.hpp"

#include <bit>
#include <cmath>

#include "oneshot/errors.hpp"

namespace oneshot {

namespace {

std::uint64_t row_mask(unsigned bits) {
  return bits >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << bits) - 1);
}

unsigned hex_width(unsigned bits) { return (bits + 3) / 4; }

}  // namespace

unsigned input_bits_for_domain(std::uint64_t domain_size) {
  if (domain_size < 1) throw DomainError("hash domain must be nonempty");
  unsigned bits = 1;
  while ((std::uint64_t{1} << bits) < domain_size) ++bits;
  return bits;
}

HashSeed draw_seed(std::uint64_t domain_size, unsigned output_bits, RngStream& rng) {
  if (output_bits > kMaxCodeBits)
    throw DomainError("hash codes are limited to " + std::to_string(kMaxCodeBits) + " bits");
  HashSeed seed;
  seed.input_bits = input_bits_for_domain(domain_size);
  seed.output_bits = output_bits;
  seed.rows.reserve(output_bits);
  const std::uint64_t mask = row_mask(seed.input_bits);
  for (unsigned i = 0; i < output_bits; ++i) seed.rows.push_back(rng.next_u64() & mask);
  return seed;
}

std::uint64_t hash_eval(const HashSeed& seed, std::uint64_t index) {
  if (seed.input_bits < 64 && index >= (std::uint64_t{1} << seed.input_bits))
    throw DomainError("hash input index out of range");
  std::uint64_t code = 0;
  for (unsigned i = 0; i < seed.output_bits; ++i)
    code |= static_cast<std::uint64_t>(std::popcount(seed.rows[i] & index) & 1) << i;
  return code;
}

std::string HashSeed::to_hex() const {
  std::string out = std::to_string(output_bits) + "x" + std::to_string(input_bits) + ":";
  const unsigned width = hex_width(input_bits);
  static const char* digits = "0123456789abcdef";
  for (std::uint64_t row : rows)
    for (unsigned d = width; d-- > 0;) out += digits[(row >> (4 * d)) & 0xF];
  return out;
}

HashSeed HashSeed::from_hex(const std::string& text) {
  const auto x_pos = text.find('x');
  const auto colon = text.find(':');
  if (x_pos == std::string::npos || colon == std::string::npos || x_pos > colon)
    throw DomainError("malformed hash seed string");
  HashSeed seed;
  seed.output_bits = static_cast<unsigned>(std::stoul(text.substr(0, x_pos)));
  seed.input_bits = static_cast<unsigned>(std::stoul(text.substr(x_pos + 1, colon - x_pos - 1)));
  const unsigned width = hex_width(seed.input_bits);
  const std::string body = text.substr(colon + 1);
  if (body.size() != static_cast<std::size_t>(width) * seed.output_bits)
    throw DomainError("hash seed payload has the wrong length");
  for (unsigned r = 0; r < seed.output_bits; ++r) {
    std::uint64_t row = 0;
    for (unsigned d = 0; d < width; ++d) {
      const char c = body[static_cast<std::size_t>(r) * width + d];
      row <<= 4;
      if (c >= '0' && c <= '9')
        row |= static_cast<std::uint64_t>(c - '0');
      else if (c >= 'a' && c <= 'f')
        row |= static_cast<std::uint64_t>(c - 'a' + 10);
      else
        throw DomainError("invalid hex digit in hash seed");
    }
    seed.rows.push_back(row);
  }
  return seed;
}

CollisionStats collision_probability_exact(std::uint64_t domain_size, unsigned output_bits) {
  const unsigned b = input_bits_for_domain(domain_size);
  if (static_cast<std::uint64_t>(output_bits) * b > 24)
    throw ResourceCapError("exact collision enumeration requires output_bits * input_bits <= 24");
  const std::uint64_t n_matrices = std::uint64_t{1} << (static_cast<std::uint64_t>(output_bits) * b);
  const std::uint64_t pairs = domain_size * (domain_size - 1) / 2;
  if (pairs == 0) throw DomainError("collision statistics need at least two domain points");
  if (pairs > (std::uint64_t{1} << 30) / std::max<std::uint64_t>(n_matrices, 1))
    throw ResourceCapError("exact collision enumeration is too large for this domain");

  // Collisions depend only on the xor difference d = x ^ x', so enumerate
  // matrices once per pair difference.
  CollisionStats stats;
  stats.exact = true;
  stats.trials = n_matrices;
  long double total_prob = 0.0L;
  const std::uint64_t mask = row_mask(b);
  for (std::uint64_t x = 0; x < domain_size; ++x) {
    for (std::uint64_t y = x + 1; y < domain_size; ++y) {
      const std::uint64_t d = (x ^ y) & mask;
      std::uint64_t collisions = 0;
      for (std::uint64_t m = 0; m < n_matrices; ++m) {
        bool zero = true;
        for (unsigned r = 0; r < output_bits && zero; ++r) {
          const std::uint64_t row = (m >> (static_cast<std::uint64_t>(r) * b)) & mask;
          if (std::popcount(row & d) & 1) zero = false;
        }
        if (zero) ++collisions;
      }
      const double prob = static_cast<double>(collisions) / static_cast<double>(n_matrices);
      stats.max_pair_probability = std::max(stats.max_pair_probability, prob);
      total_prob += prob;
    }
  }
  stats.mean_pair_probability = static_cast<double>(total_prob / pairs);
  if (output_bits == 0) {
    stats.max_pair_probability = 1.0;  // the empty code always collides
    stats.mean_pair_probability = 1.0;
  }
  return stats;
}

CollisionStats collision_probability_monte_carlo(std::uint64_t domain_size, unsigned output_bits,
                                                 std::uint64_t trials, RngStream& rng) {
  if (domain_size < 2) throw DomainError("collision statistics need at least two domain points");
  if (trials < 1) throw DomainError("monte carlo collision check needs at least one trial");
  std::uint64_t collisions = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const HashSeed seed = draw_seed(domain_size, output_bits, rng);
    const std::uint64_t x = rng.next_below(domain_size);
    std::uint64_t y = rng.next_below(domain_size - 1);
    if (y >= x) ++y;  // uniform over pairs with y != x
    if (hash_eval(seed, x) == hash_eval(seed, y)) ++collisions;
  }
  CollisionStats stats;
  stats.exact = false;
  stats.trials = trials;
  stats.mean_pair_probability = static_cast<double>(collisions) / static_cast<double>(trials);
  stats.max_pair_probability = stats.mean_pair_probability;
  return stats;
}

}  // namespace oneshot
