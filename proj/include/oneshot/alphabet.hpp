#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "oneshot/errors.hpp"

namespace oneshot {

// Ordered finite set of distinct symbol labels. Iteration order is fixed at
// construction and used everywhere (sampling, tie-breaking, serialization).
class Alphabet {
 public:
  explicit Alphabet(std::vector<std::string> symbols);

  std::size_t size() const { return symbols_.size(); }
  const std::string& symbol(std::size_t i) const { return symbols_[i]; }
  const std::vector<std::string>& symbols() const { return symbols_; }
  std::optional<std::size_t> index_of(std::string_view label) const;

  bool operator==(const Alphabet& other) const { return symbols_ == other.symbols_; }
  bool operator!=(const Alphabet& other) const { return !(*this == other); }

  // n-fold Cartesian power in odometer order (last position fastest), so the
  // resulting labels are lexicographic over position tuples. Single-character
  // labels concatenate directly ("0","1" -> "010"); longer labels join with a
  // comma to keep labels unambiguous.
  Alphabet power(int n, const EnumCaps& caps = {}) const;

  static Alphabet binary() { return Alphabet({"0", "1"}); }
  static Alphabet indexed(std::size_t k, const std::string& prefix = "s");

 private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace oneshot
