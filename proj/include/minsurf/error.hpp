#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace minsurf {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. offset is a byte offset into the input.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& message)
      : Error("parse error at offset " + std::to_string(offset) + ": " + message), offset_(offset) {}

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// A computation had no usable sample points (everything masked).
class EmptyReportError : public Error {
 public:
  using Error::Error;
};

class InsufficientSamplesError : public Error {
 public:
  InsufficientSamplesError(std::size_t count, std::size_t required)
      : Error("insufficient samples: " + std::to_string(count) + " usable, " + std::to_string(required) +
              " required"),
        count_(count) {}

  std::size_t count() const { return count_; }

 private:
  std::size_t count_;
};

/// An integration path runs into a pole or an excluded point.
class PathThroughPoleError : public Error {
 public:
  using Error::Error;
};

/// A refinement level of a convergence study produced an empty report.
class ConvergenceLevelError : public EmptyReportError {
 public:
  ConvergenceLevelError(int level, const std::string& what)
      : EmptyReportError("convergence study level " + std::to_string(level) + ": " + what), level_(level) {}

  int level() const { return level_; }

 private:
  int level_;
};

}  // namespace minsurf
