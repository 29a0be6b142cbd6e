#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tered {

// Base of every data-level failure raised by the library. The CLI maps these
// to exit code 2; anything else escaping is a bug.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonFiniteError : public Error {
 public:
  NonFiniteError(std::string channel, std::size_t sample)
      : Error("non-finite value in channel '" + channel + "' at sample " + std::to_string(sample)),
        channel_(std::move(channel)),
        sample_(sample) {}
  /// With the 1-based file position the value was read from.
  NonFiniteError(std::string channel, std::size_t sample, std::size_t line, std::size_t column)
      : Error("non-finite value in channel '" + channel + "' at sample " + std::to_string(sample) + " (line " +
              std::to_string(line) + ", column " + std::to_string(column) + ")"),
        channel_(std::move(channel)),
        sample_(sample),
        line_(line),
        column_(column) {}
  const std::string& channel() const noexcept { return channel_; }
  std::size_t sample() const noexcept { return sample_; }
  std::size_t line() const noexcept { return line_; }  // 0 when unknown
  std::size_t column() const noexcept { return column_; }

 private:
  std::string channel_;
  std::size_t sample_;
  std::size_t line_ = 0;
  std::size_t column_ = 0;
};

class DuplicateLabelError : public Error {
 public:
  explicit DuplicateLabelError(std::string label)
      : Error("duplicate channel label '" + label + "'"), label_(std::move(label)) {}
  const std::string& label() const noexcept { return label_; }

 private:
  std::string label_;
};

class LengthMismatchError : public Error {
 public:
  using Error::Error;
};

class ConstantChannelError : public Error {
 public:
  explicit ConstantChannelError(std::string label)
      : Error("channel '" + label + "' has (near) zero variance"), label_(std::move(label)) {}
  const std::string& label() const noexcept { return label_; }

 private:
  std::string label_;
};

class InvalidPmfError : public Error {
 public:
  using Error::Error;
};

class UnstableError : public Error {
 public:
  using Error::Error;
};

class RegionUndefinedError : public Error {
 public:
  using Error::Error;
};

class SingularCovarianceError : public Error {
 public:
  using Error::Error;
};

class TooShortError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class DegenerateGeometryError : public Error {
 public:
  using Error::Error;
};

class SameProcessError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error("parse error at line " + std::to_string(line) + ", column " + std::to_string(column) +
              ": " + what),
        line_(line),
        column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

}  // namespace tered
