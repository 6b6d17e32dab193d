#ifndef CHEMLV_DIAGNOSTICS_HPP
#define CHEMLV_DIAGNOSTICS_HPP

#include <string>
#include <vector>

#include "chemlv/constants.hpp"
#include "chemlv/grid.hpp"
#include "chemlv/params.hpp"

namespace chemlv {

/// Per-record scalars tracked along a run. Distances are to the reference
/// equilibrium of the run (NaN when none applies). `energy` is NaN when a
/// species is not strictly positive everywhere.
struct DiagnosticsRecord {
    double t = 0;
    double mass_u = 0;       ///< integral of u
    double mass_v = 0;       ///< integral of v
    double mass_uv = 0;      ///< integral of u + v
    double mass_inv_p = 0;   ///< integral of (u+v)^(-p)
    double min_w = 0;
    double energy = 0;       ///< xi-weighted logarithmic energy
    double l2_u = 0, l2_v = 0, l2_w = 0;
    double linf_u = 0, linf_v = 0, linf_w = 0;
    // Per-inequality pass flags, evaluated against the run's constants.
    bool ok_mass_u = true;   ///< mass bound, species u
    bool ok_mass_v = true;   ///< mass bound, species v
    bool ok_w_floor = true;  ///< w >= 0.95 delta0 min{nu,lambda} integral(u+v)
    bool ok_holder = true;   ///< combined-mass vs inverse-moment bound
    bool ok_l2_w = true;     ///< chemical L2 distance bound
};

using Trajectory = std::vector<DiagnosticsRecord>;

/// Convexity gap x - c - c ln(x/c), evaluated as c*(r - log1p(r)) with a
/// series fallback near r = 0 so the result is nonnegative to rounding.
double log_gap(double x, double c);

/// E = xi1 * integral(u - u* - u* ln(u/u*)) + xi2 * integral(v - v* - v* ln(v/v*)).
/// Throws UndefinedEnergy when some cell has u <= 0 or v <= 0.
double energy(const Field& u, const Field& v, const Equilibrium& eq, const Xi& xi);

/// Everything the trajectory checks need to know about the run.
struct VerifyContext {
    ModelParams params;
    double measure = 0;      ///< |Omega|
    double delta0 = 0;
    double p = 1;            ///< persistence exponent used for mass_inv_p
    bool has_equilibrium = false;
    Equilibrium eq;
    double t_warmup = -1;    ///< < 0 selects the default 5/a_min
    double tol_E_factor = 1e-10;  ///< tol_E = factor * E(t_warmup)
};

struct LemmaCheck {
    std::string name;
    bool applicable = false;
    bool pass = true;
    double worst_margin = 0;  ///< most negative slack seen (>= 0 when passing)
    double worst_t = 0;
    long checked = 0;
};

struct InequalityReport {
    LemmaCheck mass_u;    ///< integral u(t) <= max{integral u(t0), a1|Omega|/b1}
    LemmaCheck mass_v;
    LemmaCheck w_floor;   ///< min w >= 0.95 delta0 min{nu,lambda} integral(u+v)
    LemmaCheck holder;    ///< integral(u+v) >= |Omega|^((p+1)/p) (integral (u+v)^-p)^(-1/p)
    LemmaCheck l2_w;      ///< integral(w-w*)^2 <= 2nu^2/mu^2 ... + 2lambda^2/mu^2 ...
    LemmaCheck energy_decay;  ///< E(t_{k+1}) <= E(t_k) + tol_E after warmup
    double eps_hat = 0;   ///< least-squares decay coefficient from E differences
    double t_warmup = 0;
    double tol_E = 0;
    bool eps_fit_valid = false;  ///< at least 3 post-warmup records were available

    bool all_pass() const;
};

/// Checks the inequality chain along a recorded trajectory. Mass-bound slack
/// is 1e-8 relative, the w floor carries the 0.95 discretization factor, the
/// Hoelder bound is exact up to 1e-12, the chemical L2 bound up to 1e-10 of
/// scale. Energy decay is verified after t_warmup; eps_hat is fit from
/// E-differences against the squared L2 distances.
/// Throws InsufficientData when fewer than 3 records exist but the
/// trajectory extends past warmup (recording too sparse to judge).
InequalityReport verify_inequalities(const Trajectory& records, const VerifyContext& ctx);

struct BoundCheck {
    std::string name;
    double bound = 0;
    double observed_tail_min = 0;
    bool satisfied = false;
    /// Set when the bound exceeds the equilibrium-implied reference value;
    /// the prediction is vacuously slack there, so a miss is informational.
    bool informational = false;
};

struct BoundsReport {
    std::vector<BoundCheck> checks;
    bool all_satisfied_or_informational() const;
};

/// Compares the tail minimum (last 20% of records) of the combined mass and
/// of min w against the predicted asymptotic lower bounds (both the
/// mu-bearing and as-printed variants, plus the equal-chi branch when it
/// applies), with tolerance factor 0.95.
BoundsReport asymptotic_bounds_check(const Trajectory& records,
                                     const ConditionReport& conditions,
                                     double measure);

std::string inequality_report_to_json(const InequalityReport& r);

}  // namespace chemlv

#endif
