#pragma once

#include <stdexcept>
#include <string>

namespace cmreg {

enum class ErrorKind {
  invalid_argument,
  pole,
  unsupported,
  divergence,
  nonconvergence,
  precondition,
  internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) throw Error(kind, message);
}

}  // namespace cmreg
