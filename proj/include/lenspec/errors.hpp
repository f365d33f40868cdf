#pragma once

#include <stdexcept>
#include <string>

namespace lenspec {

// Malformed input: bad generator index, schema violation, bad parameters.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A stated precondition of a bound does not hold (e.g. L <= 6D).
class PreconditionError : public InputError {
 public:
  using InputError::InputError;
};

// Matrix overflow, failed decomposition, non-finite values.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A configured enumeration or frontier cap was exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Uniform-cost search ran past its radius without reaching the target.
// Distinct from "not generated": the free group is infinite, so an exhausted
// search never proves unreachability.
class SearchExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lenspec
