#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pulse {

using Timestamp = std::int64_t;  // unix seconds
using Seconds = std::int64_t;

enum class ErrorKind {
  file_missing,
  parse_error,
  validation_error,
  unknown_building,
  malformed_line,
  io_error,
  config_error,
  invalid_span,
  invalid_argument,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace pulse
