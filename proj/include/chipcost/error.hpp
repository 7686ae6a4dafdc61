#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace chipcost {

enum class ErrorKind {
  io,          // file missing or unreadable
  parse,       // malformed structured text
  validation,  // record violates a documented invariant
  not_found,   // unknown node / bump tech / package class / panel
  domain,      // numeric precondition violated
  model,       // model cannot produce a result (die too large, infeasible system, ...)
  limit,       // configured cap exceeded
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  // Same error, message prefixed with the component that raised it.
  Error within(std::string_view component) const {
    return Error(kind_, std::string(component) + ": " + what());
  }

 private:
  ErrorKind kind_;
};

}  // namespace chipcost
