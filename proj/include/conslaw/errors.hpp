#pragma once

#include <stdexcept>
#include <string>

namespace conslaw {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument values (bad keys, unsorted levels, non-unit vectors, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A ball, cone or target grid that does not fit the data's domain.
class GeometryError : public Error {
 public:
  using Error::Error;
};

class StabilityError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A caller-guaranteed precondition that sampling shows to be false.
class ContractError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class ConstructionError : public Error {
 public:
  using Error::Error;
};

/// A backward characteristic found no admissible foot point.
class LevelLostError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace conslaw
