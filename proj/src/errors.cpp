#include "torsion/errors.hpp"

namespace torsion {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::ToleranceNotMet: return "ToleranceNotMet";
    case ErrorCode::Blowup: return "Blowup";
    case ErrorCode::SingularityUnhandled: return "SingularityUnhandled";
    case ErrorCode::NotBracketed: return "NotBracketed";
    case ErrorCode::NotMonotone: return "NotMonotone";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::InternalMismatch: return "InternalMismatch";
    case ErrorCode::NonPositiveLambda: return "NonPositiveLambda";
    case ErrorCode::FormDisagreement: return "FormDisagreement";
    case ErrorCode::InsufficientRoom: return "InsufficientRoom";
    case ErrorCode::CurvatureOrderViolated: return "CurvatureOrderViolated";
    case ErrorCode::InconclusiveGrowth: return "InconclusiveGrowth";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::UnknownQuantity: return "UnknownQuantity";
    case ErrorCode::Admissibility: return "Admissibility";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "UnknownError";
}

}  // namespace torsion
