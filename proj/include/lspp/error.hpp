#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lspp {

enum class ErrorCode {
    InvalidArgument,
    ParseError,
    ZeroVarianceColumn,
    ZeroVariance,
    DegenerateCorrelation,
    CyclicPrior,
    PriorUnsatisfiable,
    InvalidK,
    GenerationFailed,
    SingularDesign,
    LengthMismatch,
    OverlappingTiers,
    TooManyFeatures,
    DegenerateDistribution,
    EmptyTrainingSet,
    SingleClass,
    DegeneratePairs,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so the
// CLI can map it onto a process exit status.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Raised by standardize(); remembers which column was constant.
class ZeroVarianceColumnError : public Error {
public:
    explicit ZeroVarianceColumnError(std::size_t column)
        : Error(ErrorCode::ZeroVarianceColumn, "column " + std::to_string(column) + " is constant"),
          column_(column) {}

    std::size_t column() const noexcept { return column_; }

private:
    std::size_t column_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

inline void require(bool condition, ErrorCode code, const std::string& message) {
    if (!condition) fail(code, message);
}

}  // namespace lspp
