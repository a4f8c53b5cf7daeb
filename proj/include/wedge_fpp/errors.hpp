#pragma once

#include <stdexcept>
#include <string>

namespace wedge {

// Error taxonomy mirrored by the CLI exit codes:
//   ValidationError -> 1, ResourceError -> 2, StatisticalFailure -> 3.
// InternalError signals a broken invariant (a bug), never a user mistake.

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : Error {
  using Error::Error;
};

struct ResourceError : Error {
  using Error::Error;
};

struct StatisticalFailure : Error {
  using Error::Error;
};

struct InternalError : Error {
  using Error::Error;
};

}  // namespace wedge
