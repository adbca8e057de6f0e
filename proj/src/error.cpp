#include "cartan/error.hpp"

namespace cartan {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotClosed: return "NotClosed";
    case ErrorCode::DependentBasis: return "DependentBasis";
    case ErrorCode::JacobiViolation: return "JacobiViolation";
    case ErrorCode::AlgebraMismatch: return "AlgebraMismatch";
    case ErrorCode::NotSubalgebra: return "NotSubalgebra";
    case ErrorCode::NotHModule: return "NotHModule";
    case ErrorCode::NotAdInvariant: return "NotAdInvariant";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::UnknownModel: return "UnknownModel";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownVariable: return "UnknownVariable";
    case ErrorCode::OutOfChart: return "OutOfChart";
    case ErrorCode::ChartMismatch: return "ChartMismatch";
    case ErrorCode::EvaluationError: return "EvaluationError";
    case ErrorCode::ValueSpaceMismatch: return "ValueSpaceMismatch";
    case ErrorCode::SideMismatch: return "SideMismatch";
    case ErrorCode::DegreeOverflow: return "DegreeOverflow";
    case ErrorCode::DegreeUnderflow: return "DegreeUnderflow";
    case ErrorCode::SingularTetrad: return "SingularTetrad";
    case ErrorCode::NoSplit: return "NoSplit";
    case ErrorCode::DegenerateInnerMetric: return "DegenerateInnerMetric";
    case ErrorCode::NotInH: return "NotInH";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace cartan
