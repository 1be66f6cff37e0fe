#include "scenetok/errors.hpp"

namespace scenetok {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::Usage: return "usage";
        case ErrorCode::Io: return "io";
        case ErrorCode::Config: return "config";
        case ErrorCode::Schema: return "schema";
        case ErrorCode::StyleMix: return "style-mix";
        case ErrorCode::StyleMismatch: return "style-mismatch";
        case ErrorCode::NonFinite: return "non-finite";
        case ErrorCode::UnknownToken: return "unknown-token";
        case ErrorCode::DuplicateToken: return "duplicate-token";
        case ErrorCode::ShapeCodeLength: return "shape-code-length";
        case ErrorCode::Grammar: return "grammar";
        case ErrorCode::EmptyInput: return "empty-input";
        case ErrorCode::LengthMismatch: return "length-mismatch";
        case ErrorCode::OddDimension: return "odd-dimension";
        case ErrorCode::ShapeMismatch: return "shape-mismatch";
        case ErrorCode::ImageLength: return "image-length";
        case ErrorCode::PlacementInfeasible: return "placement-infeasible";
        case ErrorCode::TargetNotFound: return "target-not-found";
        case ErrorCode::AmbiguousReference: return "ambiguous-reference";
        case ErrorCode::RaggedInput: return "ragged-input";
        case ErrorCode::OutOfRange: return "out-of-range";
    }
    return "unknown";
}

}  // namespace scenetok
