#include "rw/error.hpp"
#include "rw/verdict.hpp"

namespace rw {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SignatureMismatch: return "SignatureMismatch";
    case ErrorCode::InvalidStructure: return "InvalidStructure";
    case ErrorCode::InvalidCategory: return "InvalidCategory";
    case ErrorCode::MissingIsoData: return "MissingIsoData";
    case ErrorCode::EmptyHom: return "EmptyHom";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::TrivialColoring: return "TrivialColoring";
    case ErrorCode::ArrowDoesNotHold: return "ArrowDoesNotHold";
    case ErrorCode::FactorSearchFailed: return "FactorSearchFailed";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::TruncationOverflow: return "TruncationOverflow";
    case ErrorCode::InvalidTransformation: return "InvalidTransformation";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::CorruptCertificate: return "CorruptCertificate";
    case ErrorCode::MalformedInput: return "MalformedInput";
    case ErrorCode::Usage: return "Usage";
  }
  return "Unknown";
}

std::string_view to_string(Status s) {
  switch (s) {
    case Status::Holds: return "HOLDS";
    case Status::Fails: return "FAILS";
    case Status::Unknown: return "UNKNOWN-AT-BOUND";
  }
  return "?";
}

}  // namespace rw
