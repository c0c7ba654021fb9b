#include "cartan/errors.hpp"

namespace cartan {

const char* code_name(ErrorCode c) {
    switch (c) {
    case ErrorCode::MalformedInput: return "MalformedInput";
    case ErrorCode::UnknownId: return "UnknownId";
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::WeightSumMismatch: return "WeightSumMismatch";
    case ErrorCode::DuplicateAtom: return "DuplicateAtom";
    case ErrorCode::TooManyAtoms: return "TooManyAtoms";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::SearchBudgetExceeded: return "SearchBudgetExceeded";
    case ErrorCode::NotOrthogonal: return "NotOrthogonal";
    case ErrorCode::NotPresent: return "NotPresent";
    case ErrorCode::NotGenerating: return "NotGenerating";
    case ErrorCode::DecompositionFailure: return "DecompositionFailure";
    case ErrorCode::NotBijective: return "NotBijective";
    case ErrorCode::NotPseudogroup: return "NotPseudogroup";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NumericallySingular: return "NumericallySingular";
    case ErrorCode::RelativeCommutantViolation: return "RelativeCommutantViolation";
    case ErrorCode::IncompleteGermFamily: return "IncompleteGermFamily";
    case ErrorCode::NotStronglyNormal: return "NotStronglyNormal";
    case ErrorCode::NonErgodic: return "NonErgodic";
    case ErrorCode::NotPrincipal: return "NotPrincipal";
    }
    return "Unknown";
}

} // namespace cartan
