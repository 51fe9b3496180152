#pragma once

#include <stdexcept>
#include <string>

namespace chronofrft {

/// Caller passed something that violates a documented precondition
/// (bad grid size, negative mode index, mismatched grids).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical guard tripped: angle outside the lens-coefficient domain,
/// aliasing margin exceeded, truncated support, basis residual too large,
/// memory bandwidth budget exceeded, degenerate fit.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace chronofrft
