#pragma once

#include <stdexcept>
#include <string>

namespace rcsub {

enum class ErrorCode {
    invalid_argument,
    too_few_nodes,
    bad_resolution,
    unknown_function,
    unknown_figure,
    io,
    index_out_of_range,
    singularities_too_close,
    singularity_near_boundary,
    row_without_singularity,
    row_with_multiple_singularities,
    ill_conditioned,
    degenerate_smoothness,
};

// Process exit status for each failure family: 2 input, 3 detection, 4 numerical.
inline int exit_status(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::invalid_argument:
    case ErrorCode::too_few_nodes:
    case ErrorCode::bad_resolution:
    case ErrorCode::unknown_function:
    case ErrorCode::unknown_figure:
    case ErrorCode::io:
        return 2;
    case ErrorCode::singularities_too_close:
    case ErrorCode::singularity_near_boundary:
    case ErrorCode::row_without_singularity:
    case ErrorCode::row_with_multiple_singularities:
        return 3;
    case ErrorCode::index_out_of_range:
    case ErrorCode::ill_conditioned:
    case ErrorCode::degenerate_smoothness:
        return 4;
    }
    return 4;
}

inline const char* to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::too_few_nodes: return "TooFewNodes";
    case ErrorCode::bad_resolution: return "BadN";
    case ErrorCode::unknown_function: return "UnknownFunction";
    case ErrorCode::unknown_figure: return "UnknownFigure";
    case ErrorCode::io: return "IoError";
    case ErrorCode::index_out_of_range: return "IndexOutOfRange";
    case ErrorCode::singularities_too_close: return "MultipleSingularitiesTooClose";
    case ErrorCode::singularity_near_boundary: return "SingularityNearBoundary";
    case ErrorCode::row_without_singularity: return "RowWithoutSingularity";
    case ErrorCode::row_with_multiple_singularities: return "RowWithMultipleSingularities";
    case ErrorCode::ill_conditioned: return "IllConditioned";
    case ErrorCode::degenerate_smoothness: return "DegenerateSmoothness";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace rcsub
