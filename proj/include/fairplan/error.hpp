#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fairplan {

/// Error classes map one-to-one onto CLI exit codes.
enum class ErrorKind {
  Parse,      // malformed formula or document (exit 2)
  Validation, // well-formed input that violates a model invariant (exit 2)
  Capacity,   // a state/letter budget was exceeded (exit 3)
  Invariant,  // internal consistency breach (exit 4)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(ErrorKind::Parse,
              what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what)
      : Error(ErrorKind::Validation, what) {}
};

class CapacityError : public Error {
 public:
  explicit CapacityError(const std::string& what)
      : Error(ErrorKind::Capacity, what) {}
};

class InvariantError : public Error {
 public:
  explicit InvariantError(const std::string& what)
      : Error(ErrorKind::Invariant, what) {}
};

}  // namespace fairplan
