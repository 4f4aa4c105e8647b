#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace singap {

enum class ErrorCode {
  PoleProximity,
  LatticeDegenerate,
  BranchPointsNotSorted,
  SingularLinearSystem,
  RootOutsideGap,
  PathCrossesCut,
  DivisorPointInsideZone,
  InvalidCurve,
  PathTooCloseToPole,
  StepSizeUnderflow,
  RootClusterUnresolved,
  FrobeniusSeriesDivergence,
  DualDivisorUnavailable,
  FitIllConditioned,
  ContourHitsSecondPole,
  DiagonalEvaluation,
  WindowNotIntegerPeriods,
  MultiplierMismatch,
  ZeroWeight,
  DecayTooSlow,
  EtaVanishesOnGrid,
  GroundStateNotFound,
  Collision,
  NewtonDiverged,
  NonPhysicalSolution,
  OrbitAmbiguity,
  ConfigInvalid,
  CheckFailed,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every recoverable numerical failure in the library is reported through
/// this exception; `code()` identifies the failure class.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace singap
