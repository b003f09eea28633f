#pragma once

#include <stdexcept>
#include <string>

namespace mrgp {

// Bad input: shapes, ranges, malformed files.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical breakdown, e.g. a matrix that stays indefinite after jitter.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mrgp
