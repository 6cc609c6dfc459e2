#pragma once

#include <stdexcept>
#include <string>

namespace fieldxfer {

// Validation failures (bad arguments, malformed files) map to CLI exit 2,
// runtime/numerical failures map to exit 1.
struct InvalidArgument : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DegenerateGeometry : InvalidArgument {
    using InvalidArgument::InvalidArgument;
};

struct PointOutsideDomain : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SingularSystem : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TrainingDiverged : std::runtime_error {
    TrainingDiverged(const std::string& msg, int iter)
        : std::runtime_error(msg), iteration(iter) {}
    int iteration;
};

struct NotFitted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UndefinedMetric : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : InvalidArgument {
    ParseError(const std::string& msg, long line = -1)
        : InvalidArgument(line >= 0 ? msg + " (line " + std::to_string(line) + ")" : msg),
          line_number(line) {}
    long line_number;
};

} // namespace fieldxfer
