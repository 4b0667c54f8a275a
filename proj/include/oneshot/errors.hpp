#pragma once

#include <stdexcept>
#include <string>

namespace oneshot {

// Bad arguments, mismatched alphabets, malformed inputs. CLI exit code 2.
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// A requested target cannot be met (e.g. no grid point satisfies the tail
// condition). CLI exit code 3.
class InfeasibilityError : public std::runtime_error {
 public:
  explicit InfeasibilityError(const std::string& what) : std::runtime_error(what) {}
};

// An enumeration would exceed the configured cap. CLI exit code 4.
class ResourceCapError : public std::runtime_error {
 public:
  explicit ResourceCapError(const std::string& what) : std::runtime_error(what) {}
};

// Enumeration limits for dense constructions. Overridable per call site.
struct EnumCaps {
  std::uint64_t alphabet = 1ull << 20;  // single-axis alphabet size
  std::uint64_t joint = 1ull << 24;     // flat entries of a joint / typical-set scan
};

}  // namespace oneshot
