#pragma once

#include <stdexcept>
#include <string>

namespace pointdet {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two points (or a point and its partner on a chord) coincide.
class DegenerateConfiguration : public Error {
 public:
  using Error::Error;
};

/// A hyperbolic point lies on or outside the ball boundary.
class PointOutsideBall : public Error {
 public:
  using Error::Error;
};

/// The past light cone of an event misses a (superluminal) world line.
class NoPastIntersection : public Error {
 public:
  using Error::Error;
};

class IntersectingWorldLines : public Error {
 public:
  using Error::Error;
};

class CoincidentEvents : public Error {
 public:
  using Error::Error;
};

/// A world line with speed >= 1 was supplied without opting in.
class SuperluminalWorldLine : public Error {
 public:
  using Error::Error;
};

/// u_ij and u_ji coincide, so v_ij ^ v_ji vanishes.
class DegenerateDirection : public Error {
 public:
  using Error::Error;
};

class SamplingExhausted : public Error {
 public:
  using Error::Error;
};

class InvalidField : public Error {
 public:
  using Error::Error;
};

/// Input document does not match the expected JSON layout.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Input is well-formed but violates a configuration invariant.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, int index, const std::string& what)
      : Error(field + (index >= 0 ? "[" + std::to_string(index) + "]" : std::string{}) + ": " + what),
        field_(std::move(field)),
        index_(index) {}

  const std::string& field() const noexcept { return field_; }
  int index() const noexcept { return index_; }

 private:
  std::string field_;
  int index_;
};

}  // namespace pointdet
