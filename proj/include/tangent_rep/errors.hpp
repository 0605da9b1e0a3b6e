#pragma once

#include <stdexcept>
#include <string>

namespace tangent_rep {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Operands live on different groups.
class SpecMismatch : public Error {
 public:
  using Error::Error;
};

/// Matrix fails the membership test of its group or algebra.
class MembershipError : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

/// Exponential argument too large to evaluate without overflow.
class MagnitudeError : public Error {
 public:
  using Error::Error;
};

/// A finite-difference quotient produced a non-finite value.
class StepSizeError : public Error {
 public:
  using Error::Error;
};

class DescriptorError : public Error {
 public:
  using Error::Error;
};

class UnknownRepresentation : public Error {
 public:
  using Error::Error;
};

}  // namespace tangent_rep
