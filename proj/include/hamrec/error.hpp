#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hamrec {

enum class ErrorKind {
  dimension,  // length / dimension mismatch
  domain,     // argument outside the mathematical domain
  contract,   // caller broke a documented precondition
  resource,   // exhaustive ceiling or scan bound exceeded
  config,     // inconsistent experiment configuration
};

std::string_view to_string(ErrorKind kind) noexcept;

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

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) fail(kind, message);
}

}  // namespace hamrec
