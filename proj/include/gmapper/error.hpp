#ifndef GMAPPER_ERROR_HPP
#define GMAPPER_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace gmapper {

enum class ErrorCode {
    InvalidArgument,
    TooFewPoints,
    ZeroVariance,
    Degenerate,
    DegenerateSplit,
    EmptyLens,
    InvalidRange,
    TooFewDistinctValues,
    DimensionMismatch,
    ZeroVariancePoint,
    DegenerateNormalization,
    EmptyCover,
    IoError,
    ParseError,
    RaggedRows,
    SpecInvalid,
    UnsupportedFormat,
};

constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::TooFewPoints: return "TooFewPoints";
        case ErrorCode::ZeroVariance: return "ZeroVariance";
        case ErrorCode::Degenerate: return "Degenerate";
        case ErrorCode::DegenerateSplit: return "DegenerateSplit";
        case ErrorCode::EmptyLens: return "EmptyLens";
        case ErrorCode::InvalidRange: return "InvalidRange";
        case ErrorCode::TooFewDistinctValues: return "TooFewDistinctValues";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::ZeroVariancePoint: return "ZeroVariancePoint";
        case ErrorCode::DegenerateNormalization: return "DegenerateNormalization";
        case ErrorCode::EmptyCover: return "EmptyCover";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::RaggedRows: return "RaggedRows";
        case ErrorCode::SpecInvalid: return "SpecInvalid";
        case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    }
    return "Unknown";
}

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace gmapper

#endif  // GMAPPER_ERROR_HPP
