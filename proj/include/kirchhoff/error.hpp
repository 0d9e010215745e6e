#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kirchhoff {

enum class ErrorCode {
  DuplicateId,
  UnknownEndpoint,
  UnknownEdge,
  NotUnicyclic,
  MissingPhase,
  ForeignCircuit,
  NotEulerZero,
  MissingGaugeValue,
  Disconnected,
  StaleCorrespondence,
  BasisMismatch,
  NonSquare,
  NonPositiveResistance,
  AssumptionViolated,
  SingularTreeSystem,
  NoForests,
  InvalidW,
  SyntaxError,
  SemanticError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace kirchhoff
