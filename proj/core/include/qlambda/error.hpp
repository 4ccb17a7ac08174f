#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qlambda {

enum class ErrorCode {
    InvalidArgument,
    ParseError,
    // kinematics
    SpacelikeVector,
    NonpositiveEnergy,
    SuperluminalBoost,
    BelowThreshold,
    OffShellInput,
    // spinors
    MasslessAtRest,
    ZeroWavevector,
    // dynamics
    StepTooLarge,
    DegenerateLevels,
    IncommensurateFrequencies,
    // amplitudes
    PoleEncountered,
    ForwardSingularity,
    CorrectionTooLarge,
    SignMismatch,
    // vacuum polarization
    RealPairThreshold,
    GridTooCoarse,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it onto an exit status.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace qlambda
