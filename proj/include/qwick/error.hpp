#pragma once

#include <stdexcept>
#include <string>

namespace qwick {

/// An input violates a mathematical hypothesis of the operation. The message
/// names the hypothesis (e.g. "|q| < 1", "f^(0) != 0").
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An enumeration or dense construction would exceed its configured cap.
class CapExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace qwick
