#include "cdis/error.hpp"

namespace cdis {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidEdge: return "InvalidEdge";
    case ErrorCode::InvalidSize: return "InvalidSize";
    case ErrorCode::InvalidCoupling: return "InvalidCoupling";
    case ErrorCode::InconsistentParams: return "InconsistentParams";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::SingularResolvent: return "SingularResolvent";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::MissingElement: return "MissingElement";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NonMonotonicGrid: return "NonMonotonicGrid";
    case ErrorCode::PeakNotFound: return "PeakNotFound";
    case ErrorCode::UnresolvedWidth: return "UnresolvedWidth";
    case ErrorCode::MissingDipole: return "MissingDipole";
    case ErrorCode::ConfigParse: return "ConfigParse";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace cdis
