#include "singap/error.hpp"

namespace singap {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::PoleProximity: return "PoleProximity";
    case ErrorCode::LatticeDegenerate: return "LatticeDegenerate";
    case ErrorCode::BranchPointsNotSorted: return "BranchPointsNotSorted";
    case ErrorCode::SingularLinearSystem: return "SingularLinearSystem";
    case ErrorCode::RootOutsideGap: return "RootOutsideGap";
    case ErrorCode::PathCrossesCut: return "PathCrossesCut";
    case ErrorCode::DivisorPointInsideZone: return "DivisorPointInsideZone";
    case ErrorCode::InvalidCurve: return "InvalidCurve";
    case ErrorCode::PathTooCloseToPole: return "PathTooCloseToPole";
    case ErrorCode::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorCode::RootClusterUnresolved: return "RootClusterUnresolved";
    case ErrorCode::FrobeniusSeriesDivergence: return "FrobeniusSeriesDivergence";
    case ErrorCode::DualDivisorUnavailable: return "DualDivisorUnavailable";
    case ErrorCode::FitIllConditioned: return "FitIllConditioned";
    case ErrorCode::ContourHitsSecondPole: return "ContourHitsSecondPole";
    case ErrorCode::DiagonalEvaluation: return "DiagonalEvaluation";
    case ErrorCode::WindowNotIntegerPeriods: return "WindowNotIntegerPeriods";
    case ErrorCode::MultiplierMismatch: return "MultiplierMismatch";
    case ErrorCode::ZeroWeight: return "ZeroWeight";
    case ErrorCode::DecayTooSlow: return "DecayTooSlow";
    case ErrorCode::EtaVanishesOnGrid: return "EtaVanishesOnGrid";
    case ErrorCode::GroundStateNotFound: return "GroundStateNotFound";
    case ErrorCode::Collision: return "Collision";
    case ErrorCode::NewtonDiverged: return "NewtonDiverged";
    case ErrorCode::NonPhysicalSolution: return "NonPhysicalSolution";
    case ErrorCode::OrbitAmbiguity: return "OrbitAmbiguity";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::CheckFailed: return "CheckFailed";
  }
  return "Unknown";
}

}  // namespace singap
