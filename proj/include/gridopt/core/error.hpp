#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gridopt {

enum class ErrorKind {
  DuplicateModule,
  UnknownModule,
  MissingInput,
  UnresolvedRegistryEntry,
  PhaseViolation,
  Duplicate,
  NonFiniteCoefficient,
  OrphanTimepoint,
  OrphanTimeseries,
  NonContiguousPositions,
  ConfigError,
  MissingEnergyCost,
  DanglingZone,
  InputError,
  IntegrityError,
  IterationLimit,
  NodeLimit,
  SolverProcessFailure,
  ParseError,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DuplicateModule: return "DuplicateModule";
    case ErrorKind::UnknownModule: return "UnknownModule";
    case ErrorKind::MissingInput: return "MissingInput";
    case ErrorKind::UnresolvedRegistryEntry: return "UnresolvedRegistryEntry";
    case ErrorKind::PhaseViolation: return "PhaseViolation";
    case ErrorKind::Duplicate: return "Duplicate";
    case ErrorKind::NonFiniteCoefficient: return "NonFiniteCoefficient";
    case ErrorKind::OrphanTimepoint: return "OrphanTimepoint";
    case ErrorKind::OrphanTimeseries: return "OrphanTimeseries";
    case ErrorKind::NonContiguousPositions: return "NonContiguousPositions";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::MissingEnergyCost: return "MissingEnergyCost";
    case ErrorKind::DanglingZone: return "DanglingZone";
    case ErrorKind::InputError: return "InputError";
    case ErrorKind::IntegrityError: return "IntegrityError";
    case ErrorKind::IterationLimit: return "IterationLimit";
    case ErrorKind::NodeLimit: return "NodeLimit";
    case ErrorKind::SolverProcessFailure: return "SolverProcessFailure";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

// All library failures are reported through this one exception type; `kind`
// lets callers and tests dispatch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace gridopt
