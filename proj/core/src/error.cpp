#include "qlambda/error.hpp"

namespace qlambda {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::SpacelikeVector: return "SpacelikeVector";
        case ErrorCode::NonpositiveEnergy: return "NonpositiveEnergy";
        case ErrorCode::SuperluminalBoost: return "SuperluminalBoost";
        case ErrorCode::BelowThreshold: return "BelowThreshold";
        case ErrorCode::OffShellInput: return "OffShellInput";
        case ErrorCode::MasslessAtRest: return "MasslessAtRest";
        case ErrorCode::ZeroWavevector: return "ZeroWavevector";
        case ErrorCode::StepTooLarge: return "StepTooLarge";
        case ErrorCode::DegenerateLevels: return "DegenerateLevels";
        case ErrorCode::IncommensurateFrequencies: return "IncommensurateFrequencies";
        case ErrorCode::PoleEncountered: return "PoleEncountered";
        case ErrorCode::ForwardSingularity: return "ForwardSingularity";
        case ErrorCode::CorrectionTooLarge: return "CorrectionTooLarge";
        case ErrorCode::SignMismatch: return "SignMismatch";
        case ErrorCode::RealPairThreshold: return "RealPairThreshold";
        case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    }
    return "Unknown";
}

}  // namespace qlambda
