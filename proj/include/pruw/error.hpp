#ifndef PRUW_ERROR_HPP_
#define PRUW_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <vector>

namespace pruw {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Field arithmetic violations: modulus mismatch, non-invertible element,
/// dimension mismatch in vector/matrix operations.
class FieldError : public Error {
 public:
  explicit FieldError(const std::string& what) : Error(what) {}
};

/// Raised by the exact linear solver. pivot_column is 1-based.
class SingularMatrixError : public FieldError {
 public:
  SingularMatrixError(const std::string& what, std::size_t pivot_column)
      : FieldError(what), pivot_column(pivot_column) {}
  std::size_t pivot_column;
};

/// Parameter validation failure carrying every violated constraint.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> violations)
      : Error(join(violations)), violations(std::move(violations)) {}
  std::vector<std::string> violations;

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out = "invalid parameters:";
    for (const auto& s : v) {
      out += "\n  - " + s;
    }
    return out;
  }
};

/// Protocol contract violations (bad pair counts, out-of-range positions, ...).
class ProtocolError : public Error {
 public:
  explicit ProtocolError(const std::string& what) : Error(what) {}
};

/// Config file problems (missing keys, bad values, unknown keys).
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

}  // namespace pruw

#endif  // PRUW_ERROR_HPP_
