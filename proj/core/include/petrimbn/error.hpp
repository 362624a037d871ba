#pragma once

#include <stdexcept>
#include <string>

namespace pmbn {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TypeMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidArity : public Error {
 public:
  using Error::Error;
};

/// A matrix violates the (sub-)stochastic invariants.
class InvalidMatrix : public Error {
 public:
  using Error::Error;
};

/// The observations have probability zero under the prior.
class InconsistentEvidence : public Error {
 public:
  using Error::Error;
};

class NotEnabled : public Error {
 public:
  using Error::Error;
};

/// A step whose support contains no real transition.
class DegenerateStep : public Error {
 public:
  using Error::Error;
};

/// A resource guard (places, wires, factor entries) was exceeded.
class TooLarge : public Error {
 public:
  using Error::Error;
};

class MissingPlace : public Error {
 public:
  using Error::Error;
};

class BadOrder : public Error {
 public:
  using Error::Error;
};

class InvalidNet : public Error {
 public:
  using Error::Error;
};

class InvalidStep : public Error {
 public:
  using Error::Error;
};

class InvalidGraph : public Error {
 public:
  using Error::Error;
};

class InvalidTerm : public Error {
 public:
  using Error::Error;
};

class InvalidDecomposition : public Error {
 public:
  using Error::Error;
};

/// Malformed input file; the message names the offending field.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace pmbn
