#ifndef CHEMLV_CONSTANTS_HPP
#define CHEMLV_CONSTANTS_HPP

#include <optional>
#include <string>

#include "chemlv/grid.hpp"
#include "chemlv/params.hpp"

namespace chemlv {

/// Kernel constant: integral over (0,inf) of (4 pi t)^(-n/2) exp(-t - d^2/(4t)) dt,
/// evaluated by adaptive quadrature (split at t=1, tail mapped by t -> 1/s) to
/// relative accuracy ~1e-10. Closed forms exp(-d)/2 (n=1) and K0(d)/(2 pi)
/// (n=2) are reserved for cross-checks, not used here.
/// Throws DivergentIntegral for n >= 2 with d == 0.
double compute_delta0(int dimension, double diameter);

/// Normalization pair with xi1*c1 == xi2*c2 == min(c1,c2) held exactly:
/// xi1 = 1, xi2 = c1/c2 when c2 >= c1; xi1 = c2/c1, xi2 = 1 otherwise.
struct Xi {
    double xi1 = 1.0;
    double xi2 = 1.0;
    /// The common product xi1*c1 = xi2*c2, stored as min(c1,c2) so the
    /// identity is exact rather than rounded through the ratio.
    double product = 0.0;
};

Xi compute_xi(double c1, double c2);

/// h(chi1, chi2) = max{chi1, chi2, (chi1-chi2)^2/4}.
double h_of(double chi1, double chi2);

/// p = 1 when (chi1-chi2)^2 <= 4*chi2 or (chi1-chi2)^2 <= 4*chi1,
/// else p = 4*chi2/(chi1-chi2)^2. Always in (0,1].
double p_of(double chi1, double chi2);

/// m0 = (b_max + c_max) * max{1, a1/b1 + a2/b2}.
double m0_of(const ModelParams& p);

/// m* = max over the nu- and lambda-weighted branches of
/// max{1, -mu + nu/2 + lambda/2} * 2 q^2/mu^2 + q/2, q in {nu, lambda}.
double m_star_of(double mu, double nu, double lambda);

/// m = m* / min{nu, lambda}.
double m_of(double mu, double nu, double lambda);

/// g(eta) = eta^2 - (xi1 b1 + xi2 b2) eta + xi1 xi2 (b1 b2 - c1 c2).
double g_eval(const ModelParams& p, const Xi& xi, double eta);

/// Smaller positive root of g when the discriminant is nonnegative.
/// Evaluated in the stable 2q/(S + sqrt(D)) form; a discriminant below
/// 1e-14 * S^2 is treated as a double root.
std::optional<double> eta_tilde_of(const ModelParams& p, const Xi& xi);

/// eta0 = min{xi1 b1, xi2 b2} when g has no positive root,
/// else min{xi1 b1, xi2 b2, eta_tilde}. Requires weak competition.
double eta0_of(const ModelParams& p, const Xi& xi);

/// The 2x2 symmetric matrix with diagonal (xi1 b1 - eta, xi2 b2 - eta) and
/// off-diagonal (xi1 c1 + xi2 c2)/2.
struct BMatrix {
    double m11 = 0.0;
    double m12 = 0.0;
    double m22 = 0.0;
    double trace() const { return m11 + m22; }
    double det() const { return m11 * m22 - m12 * m12; }
};

BMatrix b_matrix(const ModelParams& p, const Xi& xi, double eta);

/// Positive definiteness decided by trace > 0 and determinant > 0.
bool is_positive_definite(const BMatrix& b);

/// Every explicit constant of the theory for one parameter set on one domain.
/// Requires weak competition (eta0 and the equilibrium are undefined without it).
struct DerivedConstants {
    double a_min = 0, a_max = 0, b_min = 0, b_max = 0, c_min = 0, c_max = 0;
    double m0 = 0;       ///< mass scale in the persistence bound
    double m_star = 0;   ///< gradient-quotient constant
    double m = 0;        ///< m_star / min(nu, lambda)
    double delta0 = 0;   ///< kernel constant for this domain (dim, diameter)
    Xi xi;               ///< normalization pair
    std::optional<double> eta_tilde;  ///< smaller root of g, when real
    double eta0 = 0;     ///< positive-definiteness threshold
    double h = 0;        ///< h(chi1, chi2)
    double p = 0;        ///< persistence exponent, in (0,1]
    double m1 = 0;            ///< max{1, m/(delta0 |Omega| w* eta0)}
    double m_tilde_0 = 0;     ///< b_max + c_max
    double m_tilde_1 = 0;     ///< m/(delta0 |Omega| w* eta0)
    std::optional<double> beta_equal_chi;  ///< chi+2-2 sqrt(chi+1) when chi1 == chi2
    Equilibrium eq;

    double measure = 0;   ///< |Omega|
    double diameter = 0;  ///< diam Omega
};

/// Populates every DerivedConstants field.
/// Throws WeakCompetitionViolated when the equilibrium does not exist.
DerivedConstants compute_constants(const ModelParams& p, const Grid& grid);

/// One named inequality with its numeric sides. `margin` is the slack in the
/// direction of the strict inequality; holds iff margin > 0.
struct ConditionEntry {
    bool holds = false;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
};

/// Hypothesis checks of both stabilization theorems plus the predicted
/// asymptotic lower bounds. Entries that require weak competition are absent
/// when it fails; equal-chi entries are present only when chi1 == chi2.
struct ConditionReport {
    bool chi_equal = false;
    bool weak_competition = false;
    ConditionEntry weak_c1;  ///< c1 < a1 b2 / a2
    ConditionEntry weak_c2;  ///< c2 < a2 b1 / a1

    ConditionEntry persistence_general;  ///< a_min > 2 mu h(chi1,chi2)
    std::optional<ConditionEntry> persistence_equal_chi;  ///< a_min > 2 mu (sqrt(chi+1)-1)^2
    std::optional<ConditionEntry> stabilization_general;  ///< + m0 m1 ((chi1^2 u* + chi2^2 v*)/4)^p
    std::optional<ConditionEntry> stabilization_equal_chi;

    /// liminf of the combined mass, |Omega| (a_min - 2 mu h)^(1/p) / m0^(1/p).
    /// The "as printed" variant drops the mu factor (the source prints both
    /// forms; the mu-bearing one is consistent with the proof chain and is
    /// treated as authoritative).
    std::optional<double> mass_bound_general;
    std::optional<double> mass_bound_general_as_printed;
    std::optional<double> w_bound_general;             ///< delta0 min{nu,lambda} * mass bound
    std::optional<double> w_bound_general_as_printed;
    std::optional<double> mass_bound_equal_chi;
    std::optional<double> w_bound_equal_chi;

    /// Constants that do not need weak competition (always present).
    double h = 0, p = 0, m0 = 0, m_star = 0, m = 0, delta0 = 0;
    Xi xi;
    /// Full set, present only under weak competition.
    std::optional<DerivedConstants> constants;
};

/// Evaluates every condition it can: the persistence conditions need no weak
/// competition; the stabilization entries are filled only when the
/// equilibrium exists.
ConditionReport check_theorems(const ModelParams& p, const Grid& grid);

/// JSON document with one key per named condition ({holds, lhs, rhs, margin}),
/// the predicted bounds, and a "constants" sub-document.
std::string condition_report_to_json(const ConditionReport& r, const ModelParams& p);

}  // namespace chemlv

#endif
