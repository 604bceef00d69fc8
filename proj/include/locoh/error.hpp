#pragma once

#include <stdexcept>
#include <string>

namespace locoh {

// Contract violation: bad input, mismatched moduli, malformed data.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A resource guard tripped: dimension, order, or elimination-work cap.
// Callers that treat "too big" as a clean decline catch this subtype.
struct CapError : Error {
  explicit CapError(const std::string& what) : Error(what) {}
};

}  // namespace locoh
