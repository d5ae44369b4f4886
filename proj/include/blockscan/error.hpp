#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace blockscan {

// Base for every recoverable failure raised by the library. Contract
// violations (wrong shapes, mismatched dimensions) use std::invalid_argument.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class DecodeErrorKind {
  kMalformedHeader,
  kTruncatedData,
  kUnsupportedMaxval,
  kZeroDimension,
  kBadSample,
};

class DecodeError : public Error {
 public:
  DecodeError(DecodeErrorKind kind, std::size_t offset, const std::string& what)
      : Error(what), kind_(kind), offset_(offset) {}

  DecodeErrorKind kind() const { return kind_; }
  // Byte offset into the input where the problem was detected.
  std::size_t offset() const { return offset_; }

 private:
  DecodeErrorKind kind_;
  std::size_t offset_;
};

// Image too small to hold a single 4x4 block.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Too few points for the requested cluster count, or non-finite input.
class ClusteringError : public Error {
 public:
  using Error::Error;
};

enum class IndexErrorKind {
  kUnsupportedVersion,
  kMalformedLine,
  kDuplicateId,
  kCentroidCount,
  kWeightSum,
  kInvalidValue,
  kParameterMismatch,
};

class IndexError : public Error {
 public:
  // line is 1-based; 0 when the error is not tied to a specific line.
  IndexError(IndexErrorKind kind, std::size_t line, const std::string& what)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        kind_(kind),
        line_(line) {}

  IndexErrorKind kind() const { return kind_; }
  std::size_t line() const { return line_; }

 private:
  IndexErrorKind kind_;
  std::size_t line_;
};

// Malformed image identifier.
class InvalidIdError : public Error {
 public:
  using Error::Error;
};

}  // namespace blockscan
