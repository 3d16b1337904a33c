#pragma once

#include <stdexcept>
#include <string>

namespace partial_search {

/// Invalid problem parameters or a violated scheme constraint. Maps to CLI exit code 1.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Request exceeds a hard computational cap (enumeration length, simulator size).
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Root bracketing failed or a quantity is undefined (e.g. zero success probability).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computed probability drifted outside [0,1] beyond rounding noise.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace partial_search
