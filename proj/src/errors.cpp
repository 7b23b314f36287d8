#include "absim/errors.hpp"

namespace absim {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::BadMagic: return "BadMagic";
        case ErrorCode::UnsupportedShapeType: return "UnsupportedShapeType";
        case ErrorCode::RecordCountMismatch: return "RecordCountMismatch";
        case ErrorCode::TruncatedFile: return "TruncatedFile";
        case ErrorCode::SchemaError: return "SchemaError";
        case ErrorCode::GeometryError: return "GeometryError";
        case ErrorCode::UnknownClass: return "UnknownClass";
        case ErrorCode::EmptyChart: return "EmptyChart";
        case ErrorCode::EmptyGraph: return "EmptyGraph";
        case ErrorCode::NoRoute: return "NoRoute";
        case ErrorCode::SingularMassMatrix: return "SingularMassMatrix";
        case ErrorCode::NonFiniteState: return "NonFiniteState";
        case ErrorCode::DeltaOutOfRange: return "DeltaOutOfRange";
        case ErrorCode::NonFiniteCost: return "NonFiniteCost";
        case ErrorCode::TooFewWaypoints: return "TooFewWaypoints";
        case ErrorCode::ZeroSpeed: return "ZeroSpeed";
        case ErrorCode::TooFewSamples: return "TooFewSamples";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::DegeneratePath: return "DegeneratePath";
        case ErrorCode::ChartError: return "ChartError";
        case ErrorCode::PlanningError: return "PlanningError";
        case ErrorCode::ModelFault: return "ModelFault";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::IoError: return "IoError";
    }
    return "UnknownError";
}

} // namespace absim
