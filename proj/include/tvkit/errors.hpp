#pragma once

#include <stdexcept>
#include <string>

namespace tvkit {

/// Malformed or out-of-contract input (maps to CLI exit code 2).
class input_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation failed to reach its tolerance (maps to CLI exit code 3).
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Density requested exactly at a critical value where it is infinite.
class singular_point_error : public numeric_error {
 public:
  using numeric_error::numeric_error;
};

/// Request outside the supported size range (e.g. dimension or n too large).
class unsupported_error : public input_error {
 public:
  using input_error::input_error;
};

}  // namespace tvkit
