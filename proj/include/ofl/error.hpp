#pragma once

#include <stdexcept>
#include <string>

namespace ofl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A location that does not belong to the space it is measured in.
class MalformedLocation : public Error {
 public:
  using Error::Error;
};

/// A metric space whose construction data violates the metric axioms.
class InvalidMetric : public Error {
 public:
  using Error::Error;
};

class EmptyCandidates : public Error {
 public:
  EmptyCandidates() : Error("nearest: empty candidate set") {}
};

class InstanceTooLarge : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The requested predictor kind cannot operate in the given space.
class UnsupportedOperation : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace ofl
