#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace panelcast {

enum class ErrorKind {
  range,
  geometry,
  domain,
  format,
  parse,
  config,
  io,
};

constexpr std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::range: return "range_error";
    case ErrorKind::geometry: return "geometry_error";
    case ErrorKind::domain: return "domain_error";
    case ErrorKind::format: return "format_error";
    case ErrorKind::parse: return "parse_error";
    case ErrorKind::config: return "config_error";
    case ErrorKind::io: return "io_error";
  }
  return "error";
}

/// Every module error carries a kind so the CLI can report
/// `error_kind: message` on a single line.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace panelcast
