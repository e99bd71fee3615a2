#pragma once

#include <stdexcept>
#include <string>

namespace stm {

/// Error categories; the CLI maps each one onto its exit code.
enum class ErrorKind { Usage = 1, Validation = 2, Io = 3, Consistency = 4 };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct ValidationError : Error {
  explicit ValidationError(const std::string& what) : Error(ErrorKind::Validation, what) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

/// Raised when internal invariants break (non-finite weights, count drift).
struct ConsistencyError : Error {
  explicit ConsistencyError(const std::string& what) : Error(ErrorKind::Consistency, what) {}
};

}  // namespace stm
