#pragma once

#include <stdexcept>
#include <string>

namespace absim {

// Every failure the library can raise, one code per contract violation.
// The CLI maps these onto process exit codes.
enum class ErrorCode {
    // chart ingestion
    BadMagic,
    UnsupportedShapeType,
    RecordCountMismatch,
    TruncatedFile,
    SchemaError,
    GeometryError,
    UnknownClass,
    // graph / planning
    EmptyChart,
    EmptyGraph,
    NoRoute,
    // dynamics
    SingularMassMatrix,
    NonFiniteState,
    DeltaOutOfRange,
    NonFiniteCost,
    // metrics
    TooFewWaypoints,
    ZeroSpeed,
    TooFewSamples,
    LengthMismatch,
    DegeneratePath,
    // scenario / engine
    ChartError,
    PlanningError,
    ModelFault,
    ConfigError,
    IoError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace absim
