#include "oneshot/alphabet.hpp"

#include <algorithm>

namespace oneshot {

Alphabet::Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
  if (symbols_.empty()) throw DomainError("alphabet must contain at least one symbol");
  index_.reserve(symbols_.size());
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (!index_.emplace(symbols_[i], i).second)
      throw DomainError("duplicate alphabet symbol '" + symbols_[i] + "'");
  }
}

std::optional<std::size_t> Alphabet::index_of(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Alphabet Alphabet::power(int n, const EnumCaps& caps) const {
  if (n < 1) throw DomainError("alphabet power requires n >= 1");
  if (n == 1) return *this;

  double projected = 1.0;
  for (int i = 0; i < n; ++i) projected *= static_cast<double>(size());
  if (projected > static_cast<double>(caps.alphabet))
    throw ResourceCapError("alphabet power exceeds the enumeration cap");

  const bool single_char =
      std::all_of(symbols_.begin(), symbols_.end(), [](const std::string& s) { return s.size() == 1; });
  const char* sep = single_char ? "" : ",";

  std::vector<std::string> out{""};
  for (int copy = 0; copy < n; ++copy) {
    std::vector<std::string> next;
    next.reserve(out.size() * size());
    for (const std::string& prefix : out)
      for (const std::string& s : symbols_)
        next.push_back(prefix.empty() ? s : prefix + sep + s);
    out = std::move(next);
  }
  return Alphabet(std::move(out));
}

Alphabet Alphabet::indexed(std::size_t k, const std::string& prefix) {
  std::vector<std::string> symbols;
  symbols.reserve(k);
  for (std::size_t i = 0; i < k; ++i) symbols.push_back(prefix + std::to_string(i));
  return Alphabet(std::move(symbols));
}

}  // namespace oneshot
