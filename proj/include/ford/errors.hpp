#pragma once

#include <stdexcept>
#include <string>

namespace ford {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a computation contradicts a packing theorem. The CLI maps
/// this class to exit code 2.
class FalsificationError : public Error {
public:
    using Error::Error;
};

#define FORD_DEFINE_ERROR(Name, Base)   \
    class Name : public Base {          \
    public:                             \
        using Base::Base;               \
    }

FORD_DEFINE_ERROR(ContextError, Error);
FORD_DEFINE_ERROR(ParseError, Error);
FORD_DEFINE_ERROR(NotAnOrder, Error);
FORD_DEFINE_ERROR(NotStarClosed, Error);
FORD_DEFINE_ERROR(UnknownOrder, Error);
FORD_DEFINE_ERROR(PreconditionError, Error);
FORD_DEFINE_ERROR(DivisionFailed, Error);
FORD_DEFINE_ERROR(NotCompletable, Error);
FORD_DEFINE_ERROR(CompletionUnknown, Error);
FORD_DEFINE_ERROR(DegenerateQuadric, Error);
FORD_DEFINE_ERROR(NotTangent, Error);
FORD_DEFINE_ERROR(BudgetExceeded, Error);
FORD_DEFINE_ERROR(DescentStuck, Error);
FORD_DEFINE_ERROR(DegenerateMediant, Error);
FORD_DEFINE_ERROR(ExactHit, Error);
FORD_DEFINE_ERROR(NotACluster, Error);
FORD_DEFINE_ERROR(BadAxes, Error);

// Theorem violations.
FORD_DEFINE_ERROR(StructureError, FalsificationError);
FORD_DEFINE_ERROR(DuplicateTangencyMismatch, FalsificationError);
FORD_DEFINE_ERROR(OverlapDetected, FalsificationError);

#undef FORD_DEFINE_ERROR

}  // namespace ford
