#pragma once

#include <stdexcept>
#include <string>

namespace viscodual {

/// Input data violates a structural invariant (negative rate, non-PSD weight,
/// schema mismatch). Maps to CLI exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical step failed its own consistency check (bracket without sign
/// change, non-real pencil eigenvalue, residue outside the PSD cone).
/// Maps to CLI exit code 3.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace viscodual
