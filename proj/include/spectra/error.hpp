#pragma once

#include <stdexcept>
#include <string>

namespace spectra {

// Bad input: malformed files, violated preconditions, incompatible options.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computation ran but its result failed a numerical-quality gate
// (non-definite factor, complex eigenvalues, bracketing failure, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace spectra
