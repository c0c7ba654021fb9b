#pragma once

#include <stdexcept>
#include <string>

namespace cartan {

enum class ErrorCode {
    MalformedInput,
    UnknownId,
    NonPositiveWeight,
    WeightSumMismatch,
    DuplicateAtom,
    TooManyAtoms,
    CapExceeded,
    SearchBudgetExceeded,
    NotOrthogonal,
    NotPresent,
    NotGenerating,
    DecompositionFailure,
    NotBijective,
    NotPseudogroup,
    DimensionMismatch,
    NumericallySingular,
    RelativeCommutantViolation,
    IncompleteGermFamily,
    NotStronglyNormal,
    NonErgodic,
    NotPrincipal,
};

const char* code_name(ErrorCode c);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(code_name(code)) + ": " + what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

} // namespace cartan
