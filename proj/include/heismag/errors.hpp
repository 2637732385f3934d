#pragma once

#include <stdexcept>
#include <string>

namespace heismag {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a function or family.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Adaptive step fell below the configured minimum.
class StepUnderflow : public Error {
 public:
  using Error::Error;
};

/// Integration produced a non-finite state.
class IntegratorOverflow : public Error {
 public:
  using Error::Error;
};

class QuadratureFailure : public Error {
 public:
  using Error::Error;
};

/// Reduced orbit leaves every bounded set before the end of the requested grid.
class UnboundedOrbit : public Error {
 public:
  using Error::Error;
};

class Unsupported : public Error {
 public:
  using Error::Error;
};

/// Finite-difference evaluation needs at least five samples around the point.
class GridTooCoarse : public Error {
 public:
  using Error::Error;
};

class ParamMismatch : public Error {
 public:
  using Error::Error;
};

class UnknownFamily : public Error {
 public:
  using Error::Error;
};

}  // namespace heismag
