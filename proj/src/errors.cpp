#include "qgraph/errors.hpp"

namespace qgraph {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidGraph: return "InvalidGraph";
    case ErrorCode::InvalidCut: return "InvalidCut";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::EpsilonTooLarge: return "EpsilonTooLarge";
    case ErrorCode::DuplicatePoint: return "DuplicatePoint";
    case ErrorCode::ScanStepTooCoarse: return "ScanStepTooCoarse";
    case ErrorCode::NotSelfAdjointFamily: return "NotSelfAdjointFamily";
    case ErrorCode::DegenerateEigenvalue: return "DegenerateEigenvalue";
    case ErrorCode::NotAnEigenvalue: return "NotAnEigenvalue";
    case ErrorCode::VertexZero: return "VertexZero";
    case ErrorCode::ConditionMismatch: return "ConditionMismatch";
    case ErrorCode::DirichletResonance: return "DirichletResonance";
    case ErrorCode::PathNotFound: return "PathNotFound";
    case ErrorCode::BranchLost: return "BranchLost";
    case ErrorCode::DegenerateAtZero: return "DegenerateAtZero";
    case ErrorCode::ZeroAtCut: return "ZeroAtCut";
    case ErrorCode::SignFlipAtCut: return "SignFlipAtCut";
    case ErrorCode::EvaluationFailed: return "EvaluationFailed";
    case ErrorCode::ImproperPartition: return "ImproperPartition";
  }
  return "Unknown";
}

}  // namespace qgraph
