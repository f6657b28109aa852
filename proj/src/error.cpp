#include "tivreg/error.hpp"

namespace tivreg {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::EmptySelection: return "EmptySelection";
    case ErrorCode::DegenerateBounds: return "DegenerateBounds";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::NormalizationDegenerate: return "NormalizationDegenerate";
    case ErrorCode::NoCorrespondences: return "NoCorrespondences";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace tivreg
