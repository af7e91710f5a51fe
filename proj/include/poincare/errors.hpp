#pragma once

#include <stdexcept>
#include <string>

namespace poincare {

/// Base of every failure raised by the library. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define POINCARE_DEFINE_ERROR(Name)            \
    class Name : public Error {                \
    public:                                    \
        using Error::Error;                    \
    };

POINCARE_DEFINE_ERROR(DomainError)
POINCARE_DEFINE_ERROR(NonConvergence)
POINCARE_DEFINE_ERROR(CriticalValueOnOrbit)
POINCARE_DEFINE_ERROR(NoSignChange)
POINCARE_DEFINE_ERROR(NotRepelling)
POINCARE_DEFINE_ERROR(ResonanceBlowup)
POINCARE_DEFINE_ERROR(NoUnivalentDisc)
POINCARE_DEFINE_ERROR(TargetInsideCore)
POINCARE_DEFINE_ERROR(EmptyLevelSet)
POINCARE_DEFINE_ERROR(TruncationTooSmall)
POINCARE_DEFINE_ERROR(ChainBreak)
POINCARE_DEFINE_ERROR(NoBranches)
POINCARE_DEFINE_ERROR(WordBlowup)
POINCARE_DEFINE_ERROR(Infeasible)
POINCARE_DEFINE_ERROR(PreconditionUnverifiable)
POINCARE_DEFINE_ERROR(IoError)

#undef POINCARE_DEFINE_ERROR

/// Bad command line or configuration; the CLI maps this to exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace poincare
