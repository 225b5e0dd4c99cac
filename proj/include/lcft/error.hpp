#pragma once

#include <stdexcept>
#include <string>

namespace lcft {

enum class Errc {
    NonPositiveGamma,
    NonPositiveMu,
    PoleAtNonpositiveInteger,
    QuadratureFailure,
    ShiftPoleFailure,
    PoleOfDozz,
    PoleOfReflection,
    DegenerateDual,
    FactorizationFailure,
    TooManyCells,
    GammaOutOfRange,
    InsertionMismatch,
    InadmissibleWeights,
    GammaPole,
    NonIntegrable,
    AlphaOutOfRange,
    HorizonTooShort,
    StepTooCoarse,
    WindowEmpty,
    DegenerateC,
    DomainExceeded,
    IntegerDegeneracy,
    PoleEncountered,
    CentralChargeTooLarge,
    NoRealSolution,
    InvalidArgument,
    ParseError,
    ConflictError,
    IoError,
};

const char* errc_name(Errc c) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace lcft
