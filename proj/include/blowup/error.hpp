#pragma once

#include <stdexcept>
#include <string>

namespace blowup {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition or domain violation by the caller.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// The integrator could not continue (v reached 0, step underflow, step budget).
class IntegrationFailure : public Error {
 public:
  using Error::Error;
};

// A requested target cannot be met inside the numeric precision ceiling.
class Infeasible : public Error {
 public:
  using Error::Error;
};

}  // namespace blowup
