#ifndef CHEMLV_VERIFY_SUITE_HPP
#define CHEMLV_VERIFY_SUITE_HPP

#include <string>
#include <vector>

#include "chemlv/config.hpp"

namespace chemlv {

struct VerifyCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct VerifySuiteResult {
    std::vector<VerifyCheck> checks;
    bool all_pass() const;
};

/// The self-verification battery behind `verify`: kernel-constant quadrature
/// against closed forms, constants-engine identities, chemical-solve
/// cross-checks against the dense oracle, scheme invariants (fixed point,
/// positivity guard, subsystem invariance, species-swap symmetry), the
/// homogeneous ODE comparison, and the trajectory inequality suite on a
/// short run of the configured model. Deterministic (fixed internal seeds).
VerifySuiteResult run_verify_suite(const RunConfig& cfg);

}  // namespace chemlv

#endif
