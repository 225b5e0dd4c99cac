#include "lcft/error.hpp"

namespace lcft {

const char* errc_name(Errc c) noexcept {
    switch (c) {
        case Errc::NonPositiveGamma: return "NonPositiveGamma";
        case Errc::NonPositiveMu: return "NonPositiveMu";
        case Errc::PoleAtNonpositiveInteger: return "PoleAtNonpositiveInteger";
        case Errc::QuadratureFailure: return "QuadratureFailure";
        case Errc::ShiftPoleFailure: return "ShiftPoleFailure";
        case Errc::PoleOfDozz: return "PoleOfDozz";
        case Errc::PoleOfReflection: return "PoleOfReflection";
        case Errc::DegenerateDual: return "DegenerateDual";
        case Errc::FactorizationFailure: return "FactorizationFailure";
        case Errc::TooManyCells: return "TooManyCells";
        case Errc::GammaOutOfRange: return "GammaOutOfRange";
        case Errc::InsertionMismatch: return "InsertionMismatch";
        case Errc::InadmissibleWeights: return "InadmissibleWeights";
        case Errc::GammaPole: return "GammaPole";
        case Errc::NonIntegrable: return "NonIntegrable";
        case Errc::AlphaOutOfRange: return "AlphaOutOfRange";
        case Errc::HorizonTooShort: return "HorizonTooShort";
        case Errc::StepTooCoarse: return "StepTooCoarse";
        case Errc::WindowEmpty: return "WindowEmpty";
        case Errc::DegenerateC: return "DegenerateC";
        case Errc::DomainExceeded: return "DomainExceeded";
        case Errc::IntegerDegeneracy: return "IntegerDegeneracy";
        case Errc::PoleEncountered: return "PoleEncountered";
        case Errc::CentralChargeTooLarge: return "CentralChargeTooLarge";
        case Errc::NoRealSolution: return "NoRealSolution";
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::ParseError: return "ParseError";
        case Errc::ConflictError: return "ConflictError";
        case Errc::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace lcft
