#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace cotagnet {

// Process exit codes shared by every command.
enum class ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kData = 2,
  kNumeric = 3,
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  [[nodiscard]] virtual ExitCode exit_code() const noexcept = 0;
  [[nodiscard]] virtual const char* kind() const noexcept = 0;
};

class UsageError : public Error {
 public:
  using Error::Error;
  [[nodiscard]] ExitCode exit_code() const noexcept override { return ExitCode::kUsage; }
  [[nodiscard]] const char* kind() const noexcept override { return "usage"; }
};

class DataError : public Error {
 public:
  using Error::Error;
  [[nodiscard]] ExitCode exit_code() const noexcept override { return ExitCode::kData; }
  [[nodiscard]] const char* kind() const noexcept override { return "data"; }
};

// Input that could not be tokenized. Carries the byte offset of the failure
// when the source is a stream.
class ParseError : public DataError {
 public:
  ParseError(const std::string& what, std::optional<std::uint64_t> byte_offset = std::nullopt)
      : DataError(byte_offset ? what + " (at byte " + std::to_string(*byte_offset) + ")" : what),
        message_(what),
        byte_offset_(byte_offset) {}

  // Same error, message prefixed with the file it came from.
  [[nodiscard]] ParseError in_file(const std::string& file) const {
    return ParseError(file + ": " + message_, byte_offset_);
  }

  [[nodiscard]] std::optional<std::uint64_t> byte_offset() const noexcept { return byte_offset_; }
  [[nodiscard]] const char* kind() const noexcept override { return "parse"; }

 private:
  std::string message_;
  std::optional<std::uint64_t> byte_offset_;
};

class NumericError : public Error {
 public:
  using Error::Error;
  [[nodiscard]] ExitCode exit_code() const noexcept override { return ExitCode::kNumeric; }
  [[nodiscard]] const char* kind() const noexcept override { return "numeric"; }
};

}  // namespace cotagnet
