#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace algproc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ill-formed use of a theory: unknown operation, arity mismatch, guard outside
/// the declared atoms, probability outside [0,1], mixing backends.
class TheoryError : public Error {
 public:
  using Error::Error;
};

/// Surface-syntax error. `offset` is a byte offset into the parsed text.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : Error(message + " at offset " + std::to_string(offset)), message_(message), offset_(offset) {}
  [[nodiscard]] std::size_t offset() const { return offset_; }
  /// The message without the offset suffix.
  [[nodiscard]] const std::string& message() const { return message_; }

 private:
  std::string message_;
  std::size_t offset_;
};

/// Malformed input files (JSON, equation systems, proofs).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// An internal invariant was breached, e.g. the reachable-state cap was hit.
class InternalError : public Error {
 public:
  using Error::Error;
};

/// Milner elimination was asked to solve a system that is not guarded.
class UnguardedSystem : public Error {
 public:
  using Error::Error;
};

}  // namespace algproc
