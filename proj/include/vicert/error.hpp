#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vicert {

enum class ErrorCode : std::uint8_t {
  kInvalidArgument,
  kDimensionMismatch,
  kValidation,
  kConfiguration,
  kDivergence,
  kParse,
  kIo,
};

/// Base error for everything thrown by the library. The code is what crosses
/// the C boundary; the message is kept for diagnostics.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class DimensionError : public Error {
 public:
  DimensionError(std::string_view context, std::int64_t expected,
                 std::int64_t actual)
      : Error(ErrorCode::kDimensionMismatch,
              std::string(context) + ": dimension mismatch (expected " +
                  std::to_string(expected) + ", got " +
                  std::to_string(actual) + ")"),
        expected_(expected),
        actual_(actual) {}

  std::int64_t expected() const noexcept { return expected_; }
  std::int64_t actual() const noexcept { return actual_; }

 private:
  std::int64_t expected_;
  std::int64_t actual_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what)
      : Error(ErrorCode::kValidation, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what)
      : Error(ErrorCode::kConfiguration, what) {}
};

class DivergenceError : public Error {
 public:
  explicit DivergenceError(std::int64_t iteration)
      : Error(ErrorCode::kDivergence,
              "non-finite iterate at iteration " + std::to_string(iteration)),
        iteration_(iteration) {}

  std::int64_t iteration() const noexcept { return iteration_; }

 private:
  std::int64_t iteration_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::int64_t line = 0,
             std::int64_t column = 0)
      : Error(ErrorCode::kParse, what), line_(line), column_(column) {}

  std::int64_t line() const noexcept { return line_; }
  std::int64_t column() const noexcept { return column_; }

 private:
  std::int64_t line_;
  std::int64_t column_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCode::kIo, what) {}
};

}  // namespace vicert
