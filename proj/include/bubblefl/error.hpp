#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bfl {

enum class ErrorKind {
  DuplicateSymbol,
  ArityMismatch,
  CycleCreated,
  CorruptStore,
  SyntaxError,
  NonLinearLhs,
  UnknownIdentifier,
  UnboundWhereName,
  NotInductivelySequential,
  NotNormalForm,
  IsRoot,
  NotAChoice,
  BadDominator,
  TooLarge,
  NotStaticallyEnumerable,
  ArithmeticOverflow,
  InvariantViolation,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so callers (and tests)
// can dispatch without parsing messages.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

} // namespace bfl
