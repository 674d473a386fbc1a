#pragma once

#include <stdexcept>
#include <string>

namespace wideopen {

enum class ErrorCode {
    DivisionByZero,
    BadRational,
    NotPrime,
    IncompatibleTails,
    RadiusBelowTailCertificate,
    NotAUnit,
    DegreeZero,
    WindowNotCertifiable,
    OverlappingDiscs,
    DuplicateCenters,
    RadiusOutOfRange,
    TailObscuresResidue,
    PoleOnAnnulus,
    PoleInsideDomain,
    PoleInsideAffinoid,
    NotAnAnnularOverlap,
    ModeViolation,
    NoInvertibleMinor,
    SingularMatrix,
    SchemaError,
};

const char* error_name(ErrorCode c);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

} // namespace wideopen
