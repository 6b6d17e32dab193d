#ifndef CHEMLV_ERRORS_HPP
#define CHEMLV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace chemlv {

/// Base class for all chemlv failures.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The weak-competition condition c1 < a1*b2/a2, c2 < a2*b1/a1 fails;
/// no positive coexistence equilibrium is guaranteed and the constants
/// that depend on it (eta0, m1, ...) are undefined.
struct WeakCompetitionViolated : Error {
    using Error::Error;
};

/// The kernel-constant integral diverges (n >= 2 with zero diameter).
struct DivergentIntegral : Error {
    using Error::Error;
};

/// Iterative linear solve hit its iteration cap before reaching tolerance.
struct SolveFailure : Error {
    using Error::Error;
};

/// The screened-Poisson solve returned a non-positive value somewhere.
/// The discrete operator is an M-matrix, so this signals a solver defect.
struct NonPositiveW : Error {
    using Error::Error;
};

/// min w dropped below the configured floor: the run is approaching the
/// singular regime the stability theory excludes.
struct WFloorViolation : Error {
    using Error::Error;
};

/// A density went negative after a step (CFL contract violated).
struct NegativeDensity : Error {
    using Error::Error;
};

/// Initial data violates u0,v0 >= 0 or has zero combined mass.
struct InvalidInitialData : Error {
    using Error::Error;
};

/// The logarithmic energy is undefined (some cell has u <= 0 or v <= 0).
struct UndefinedEnergy : Error {
    using Error::Error;
};

/// Too few trajectory records to run the requested diagnostic.
struct InsufficientData : Error {
    using Error::Error;
};

/// Dense factorization failed (impossible for mu > 0; fatal defect).
struct SingularMatrix : Error {
    using Error::Error;
};

/// Malformed or incomplete run configuration.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace chemlv

#endif
