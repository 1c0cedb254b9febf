#pragma once

#include <stdexcept>
#include <string>

namespace swaporder {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Moment matching N2B is not solvable (mean <= variance or mean <= 0).
class InvalidMoments : public Error {
 public:
  using Error::Error;
};

/// theta == 0 in the min-of-two-normals moments with non point-mass operands.
class DegenerateTheta : public Error {
 public:
  using Error::Error;
};

/// A swap order is not a permutation of the interior nodes of the path.
class InvalidOrder : public Error {
 public:
  using Error::Error;
};

/// An enumeration would exceed its configured cap.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// A memory budget admits no allocation with every link >= 1.
class Infeasible : public Error {
 public:
  using Error::Error;
};

/// The computed time slot is not positive for the given hardware/timing.
class SlotNonpositive : public Error {
 public:
  using Error::Error;
};

/// A path document does not conform to the schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

}  // namespace swaporder
