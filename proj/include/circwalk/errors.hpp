#pragma once

#include <stdexcept>
#include <string>

namespace circwalk {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidArgument : Error {
  using Error::Error;
};

// Thrown when C(n,k) exceeds the caller's cap.
struct StateSpaceTooLarge : Error {
  using Error::Error;
};

// A numerical tripwire fired (Perron relation, branch proximity, ...).
struct NumericalGuard : Error {
  using Error::Error;
};

struct DegenerateEvaluation : NumericalGuard {
  using NumericalGuard::NumericalGuard;
};

}  // namespace circwalk
