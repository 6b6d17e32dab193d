#ifndef CHEMLV_PARAMS_HPP
#define CHEMLV_PARAMS_HPP

#include <string>

#include "chemlv/errors.hpp"

namespace chemlv {

/// The eleven positive coefficients of the two-species chemotaxis-competition
/// system
///
///   u_t = Lap u - chi1 div(u/w grad w) + u(a1 - b1 u - c1 v)
///   v_t = Lap v - chi2 div(v/w grad w) + v(a2 - b2 v - c2 u)
///   0   = Lap w - mu w + nu u + lambda v
///
/// with zero-flux boundary conditions.
struct ModelParams {
    double chi1 = 0.0;    ///< chemotaxis sensitivity, species u
    double chi2 = 0.0;    ///< chemotaxis sensitivity, species v
    double a1 = 1.0;      ///< intrinsic growth rate, u
    double a2 = 1.0;      ///< intrinsic growth rate, v
    double b1 = 1.0;      ///< intraspecific competition, u
    double b2 = 1.0;      ///< intraspecific competition, v
    double c1 = 0.5;      ///< interspecific competition on u from v
    double c2 = 0.5;      ///< interspecific competition on v from u
    double mu = 1.0;      ///< chemical degradation rate
    double nu = 1.0;      ///< chemical production rate by u
    double lambda = 1.0;  ///< chemical production rate by v

    /// Throws ConfigError naming the first non-positive field.
    void validate() const;

    /// Parameters with the two species' roles exchanged
    /// (chi1<->chi2, a1<->a2, b1<->b2, c1<->c2, nu<->lambda).
    ModelParams swapped() const;
};

/// The positive constant coexistence solution (exists under weak competition).
struct Equilibrium {
    double u_star = 0.0;
    double v_star = 0.0;
    double w_star = 0.0;
};

/// Result of the weak-competition test c1 < a1*b2/a2 and c2 < a2*b1/a1.
/// Margins are (rhs - lhs); the condition holds iff both are > 0 (strict).
struct WeakCompetition {
    bool holds = false;
    double margin1 = 0.0;  ///< a1*b2/a2 - c1
    double margin2 = 0.0;  ///< a2*b1/a1 - c2
};

WeakCompetition check_weak_competition(const ModelParams& p);

/// u* = (a1 b2 - c1 a2)/(b1 b2 - c1 c2),
/// v* = (b1 a2 - a1 c2)/(b1 b2 - c1 c2),
/// w* = (nu u* + lambda v*)/mu.
/// Throws WeakCompetitionViolated when the weak-competition test fails.
Equilibrium compute_equilibrium(const ModelParams& p);

inline double a_min(const ModelParams& p) { return p.a1 < p.a2 ? p.a1 : p.a2; }
inline double a_max(const ModelParams& p) { return p.a1 > p.a2 ? p.a1 : p.a2; }
inline double b_min(const ModelParams& p) { return p.b1 < p.b2 ? p.b1 : p.b2; }
inline double b_max(const ModelParams& p) { return p.b1 > p.b2 ? p.b1 : p.b2; }
inline double c_min(const ModelParams& p) { return p.c1 < p.c2 ? p.c1 : p.c2; }
inline double c_max(const ModelParams& p) { return p.c1 > p.c2 ? p.c1 : p.c2; }

}  // namespace chemlv

#endif
