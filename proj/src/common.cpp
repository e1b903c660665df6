#include "radoncomp/common.hpp"

namespace radoncomp {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::BandwidthExceeded: return "BandwidthExceeded";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::NotEven: return "NotEven";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::ConstructionFailed: return "ConstructionFailed";
    case ErrorCode::DecayTooSlow: return "DecayTooSlow";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::CertificateRequired: return "CertificateRequired";
    case ErrorCode::TailTooHeavy: return "TailTooHeavy";
    case ErrorCode::InputInvalid: return "InputInvalid";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorCode::ArityError: return "ArityError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Error";
}

}  // namespace radoncomp
