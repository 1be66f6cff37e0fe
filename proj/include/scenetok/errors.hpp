#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace scenetok {

// Stable numeric codes. The CLI uses these as process exit codes, so never
// renumber an existing entry.
enum class ErrorCode : int {
    Usage = 2,
    Io = 3,
    Config = 4,
    Schema = 10,
    StyleMix = 11,
    StyleMismatch = 12,
    NonFinite = 13,
    UnknownToken = 14,
    DuplicateToken = 15,
    ShapeCodeLength = 16,
    Grammar = 17,
    EmptyInput = 18,
    LengthMismatch = 19,
    OddDimension = 20,
    ShapeMismatch = 21,
    ImageLength = 22,
    PlacementInfeasible = 23,
    TargetNotFound = 24,
    AmbiguousReference = 25,
    RaggedInput = 26,
    OutOfRange = 27,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

#define SCENETOK_DEFINE_ERROR(Name, Code)                                          \
    class Name : public Error {                                                    \
    public:                                                                        \
        explicit Name(const std::string& what) : Error(ErrorCode::Code, what) {}   \
    };

SCENETOK_DEFINE_ERROR(UsageError, Usage)
SCENETOK_DEFINE_ERROR(IoError, Io)
SCENETOK_DEFINE_ERROR(ConfigError, Config)
SCENETOK_DEFINE_ERROR(SchemaError, Schema)
SCENETOK_DEFINE_ERROR(StyleMixError, StyleMix)
SCENETOK_DEFINE_ERROR(StyleMismatchError, StyleMismatch)
SCENETOK_DEFINE_ERROR(NonFiniteError, NonFinite)
SCENETOK_DEFINE_ERROR(UnknownTokenError, UnknownToken)
SCENETOK_DEFINE_ERROR(DuplicateTokenError, DuplicateToken)
SCENETOK_DEFINE_ERROR(ShapeCodeLengthError, ShapeCodeLength)
SCENETOK_DEFINE_ERROR(EmptyInputError, EmptyInput)
SCENETOK_DEFINE_ERROR(LengthMismatchError, LengthMismatch)
SCENETOK_DEFINE_ERROR(OddDimensionError, OddDimension)
SCENETOK_DEFINE_ERROR(ShapeMismatchError, ShapeMismatch)
SCENETOK_DEFINE_ERROR(ImageLengthError, ImageLength)
SCENETOK_DEFINE_ERROR(PlacementInfeasibleError, PlacementInfeasible)
SCENETOK_DEFINE_ERROR(TargetNotFoundError, TargetNotFound)
SCENETOK_DEFINE_ERROR(AmbiguousReferenceError, AmbiguousReference)
SCENETOK_DEFINE_ERROR(RaggedInputError, RaggedInput)
SCENETOK_DEFINE_ERROR(OutOfRangeError, OutOfRange)

#undef SCENETOK_DEFINE_ERROR

// Strict-mode parse failure; `position` is the token index where the grammar broke.
class GrammarError : public Error {
public:
    GrammarError(std::size_t position, const std::string& what)
        : Error(ErrorCode::Grammar, "token " + std::to_string(position) + ": " + what),
          position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

}  // namespace scenetok
