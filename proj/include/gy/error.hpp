#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gy {

/// Failure categories surfaced by the library. CLI maps them onto exit codes.
enum class ErrorKind {
  // graph construction / lookup
  NonPositiveMeasure,
  NonPositiveWeight,
  SelfLoop,
  DuplicateEdge,
  UnknownVertexInEdge,
  UnknownVertex,
  // domains
  DisconnectedDomain,
  EmptyDomain,
  EmptyInterior,
  // spectra / spaces
  BadExponent,
  NonPositivePotential,
  TrivialAdmissibleSpace,
  // variational / solvers
  InadmissibleField,
  HypothesisViolation,
  GeometryNotFound,
  MaxIterations,
  StalledPath,
  NoNehariRoot,
  SingularJacobian,
  // generators / io
  DisconnectedAfterRetries,
  ParseError,
  VertexMismatch,
  IoError,
  UsageError,
};

std::string_view to_string(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace gy
