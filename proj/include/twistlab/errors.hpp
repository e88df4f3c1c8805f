#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace twistlab {

// How a failure should surface to callers of the command-line tool.
//   validation — bad or out-of-domain input (exit code 2)
//   budget     — the requested computation exceeds the enumeration budget (exit code 3)
//   internal   — an internal consistency check failed; indicates a bug (exit code 4)
enum class ErrorCategory : int {
  validation = 2,
  budget = 3,
  internal = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message),
        category_(category),
        code_(std::move(code)) {}

  ErrorCategory category() const noexcept { return category_; }

  // Stable machine-readable tag, e.g. "CtxMismatch", "BudgetExceeded".
  const std::string& code() const noexcept { return code_; }

 private:
  ErrorCategory category_;
  std::string code_;
};

struct ValidationError : Error {
  ValidationError(std::string code, const std::string& message)
      : Error(ErrorCategory::validation, std::move(code), message) {}
};

struct BudgetError : Error {
  BudgetError(std::string code, const std::string& message)
      : Error(ErrorCategory::budget, std::move(code), message) {}
};

struct InternalError : Error {
  InternalError(std::string code, const std::string& message)
      : Error(ErrorCategory::internal, std::move(code), message) {}
};

}  // namespace twistlab
