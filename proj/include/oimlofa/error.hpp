#pragma once

#include <stdexcept>
#include <string>

namespace oimlofa {

enum class ErrorKind {
  invalid_argument,
  parse,
  io,
  budget_exhausted,
  too_large,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace oimlofa
