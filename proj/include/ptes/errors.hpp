#pragma once

#include <stdexcept>
#include <string>

namespace ptes {

/// An enumeration or expansion would exceed its configured size cap.
class CapExceeded : public std::runtime_error {
 public:
  explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// A p-adic computation lost all of its remaining precision.
class PrecisionExhausted : public std::runtime_error {
 public:
  explicit PrecisionExhausted(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or inconsistent problem description.
class SpecError : public std::invalid_argument {
 public:
  explicit SpecError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace ptes
