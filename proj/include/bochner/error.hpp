#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bochner {

enum class ErrorKind {
    PreconditionViolated,
    DuplicateAbscissa,
    FullRank,
    Inconsistent,
    Underdetermined,
    NotConic,
    NotBiquadratic,
    Degenerate,
    ModulusNotRepresentable,
    StepDegenerate,
    DistinctnessViolated,
    SpectrumDegenerate,
    DegreeCollapse,
    IrreducibilityViolated,
    DegenerateWindow,
    NotPolynomial,
    WindowDegenerate,
    NotTriangular,
    ZeroFactor,
    NullNorm,
    NotEigenvalue,
    ParseError,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so callers (the CLI in
/// particular) can map it onto an exit status without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace bochner
