#include "chemlv/constants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

namespace chemlv {

namespace {

// exp(-t - q/t) with underflow guarded before any power is formed.
inline double exp_core(double t, double q) {
    const double e = t + q / t;
    return e > 745.0 ? 0.0 : std::exp(-e);
}

// Head piece: t in (0,1] substituted t = s^2 so the endpoint is regular.
double head_integrand(int n, double d, double s) {
    if (s <= 0.0) {
        return (n == 1 && d == 0.0) ? 1.0 / std::sqrt(M_PI) : 0.0;
    }
    const double t = s * s;
    const double core = exp_core(t, d * d / 4.0);
    if (core == 0.0) return 0.0;
    if (n == 1) return core / std::sqrt(M_PI);
    return core / (2.0 * M_PI * s);
}

// Tail piece: t in [1,inf) mapped by t = 1/s onto (0,1].
double tail_integrand(int n, double d, double s) {
    if (s <= 0.0) return 0.0;
    const double inv = 1.0 / s;
    const double e = inv + d * d * s / 4.0;
    if (e > 745.0) return 0.0;
    const double core = std::exp(-e);
    if (n == 1) return core / (2.0 * std::sqrt(M_PI) * s * std::sqrt(s));
    return core / (4.0 * M_PI * s);
}

template <typename F>
double simpson(const F& f, double a, double b) {
    return (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
}

template <typename F>
double adapt(const F& f, double a, double b, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double left = simpson(f, a, m);
    const double right = simpson(f, m, b);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adapt(f, a, m, left, 0.5 * tol, depth - 1) +
           adapt(f, m, b, right, 0.5 * tol, depth - 1);
}

template <typename F>
double integrate_01(const F& f, double rel_tol) {
    // Coarse pass to scale the absolute tolerance.
    double coarse = 0.0;
    const int panels = 64;
    for (int i = 0; i < panels; ++i) {
        coarse += simpson(f, i / double(panels), (i + 1) / double(panels));
    }
    const double tol = std::max(rel_tol * std::abs(coarse), 1e-300);
    double total = 0.0;
    for (int i = 0; i < panels; ++i) {
        const double a = i / double(panels);
        const double b = (i + 1) / double(panels);
        total += adapt(f, a, b, simpson(f, a, b), tol / panels, 48);
    }
    return total;
}

}  // namespace

double compute_delta0(int dimension, double diameter) {
    if (dimension != 1 && dimension != 2) {
        throw ConfigError("kernel constant defined for dimension 1 or 2");
    }
    if (diameter < 0.0) throw ConfigError("diameter must be nonnegative");
    if (dimension >= 2 && diameter == 0.0) {
        throw DivergentIntegral("kernel integral diverges logarithmically at t=0 for n>=2, d=0");
    }
    const double rel = 1e-11;
    const double head =
        integrate_01([&](double s) { return head_integrand(dimension, diameter, s); }, rel);
    const double tail =
        integrate_01([&](double s) { return tail_integrand(dimension, diameter, s); }, rel);
    return head + tail;
}

Xi compute_xi(double c1, double c2) {
    Xi xi;
    if (c2 >= c1) {
        xi.xi1 = 1.0;
        xi.xi2 = c1 / c2;
        xi.product = c1;
    } else {
        xi.xi1 = c2 / c1;
        xi.xi2 = 1.0;
        xi.product = c2;
    }
    return xi;
}

double h_of(double chi1, double chi2) {
    const double dx = chi1 - chi2;
    return std::max({chi1, chi2, dx * dx / 4.0});
}

double p_of(double chi1, double chi2) {
    const double dx2 = (chi1 - chi2) * (chi1 - chi2);
    if (dx2 <= 4.0 * chi2 || dx2 <= 4.0 * chi1) return 1.0;
    return 4.0 * chi2 / dx2;
}

double m0_of(const ModelParams& p) {
    return (b_max(p) + c_max(p)) * std::max(1.0, p.a1 / p.b1 + p.a2 / p.b2);
}

double m_star_of(double mu, double nu, double lambda) {
    const double k = std::max(1.0, -mu + nu / 2.0 + lambda / 2.0);
    const double lhs = k * 2.0 * nu * nu / (mu * mu) + nu / 2.0;
    const double rhs = k * 2.0 * lambda * lambda / (mu * mu) + lambda / 2.0;
    return std::max(lhs, rhs);
}

double m_of(double mu, double nu, double lambda) {
    return m_star_of(mu, nu, lambda) / std::min(nu, lambda);
}

double g_eval(const ModelParams& p, const Xi& xi, double eta) {
    const double sum = xi.xi1 * p.b1 + xi.xi2 * p.b2;
    const double prod = xi.xi1 * xi.xi2 * (p.b1 * p.b2 - p.c1 * p.c2);
    return eta * eta - sum * eta + prod;
}

std::optional<double> eta_tilde_of(const ModelParams& p, const Xi& xi) {
    const double sum = xi.xi1 * p.b1 + xi.xi2 * p.b2;
    const double prod = xi.xi1 * xi.xi2 * (p.b1 * p.b2 - p.c1 * p.c2);
    const double disc = sum * sum - 4.0 * prod;
    const double scale = 1e-14 * sum * sum;
    if (disc < -scale) return std::nullopt;
    if (disc <= scale) return sum / 2.0;  // double root
    // Smaller root in the cancellation-free form 2q/(S + sqrt(D)).
    return 2.0 * prod / (sum + std::sqrt(disc));
}

double eta0_of(const ModelParams& p, const Xi& xi) {
    if (!check_weak_competition(p).holds) {
        throw WeakCompetitionViolated("eta0 requires weak competition");
    }
    const double cap = std::min(xi.xi1 * p.b1, xi.xi2 * p.b2);
    const auto root = eta_tilde_of(p, xi);
    return root ? std::min(cap, *root) : cap;
}

BMatrix b_matrix(const ModelParams& p, const Xi& xi, double eta) {
    BMatrix b;
    b.m11 = xi.xi1 * p.b1 - eta;
    b.m22 = xi.xi2 * p.b2 - eta;
    // (xi1 c1 + xi2 c2)/2 with both products equal to xi.product exactly.
    b.m12 = xi.product;
    return b;
}

bool is_positive_definite(const BMatrix& b) {
    return b.trace() > 0.0 && b.det() > 0.0;
}

DerivedConstants compute_constants(const ModelParams& p, const Grid& grid) {
    p.validate();
    DerivedConstants dc;
    dc.a_min = a_min(p);
    dc.a_max = a_max(p);
    dc.b_min = b_min(p);
    dc.b_max = b_max(p);
    dc.c_min = c_min(p);
    dc.c_max = c_max(p);
    dc.m0 = m0_of(p);
    dc.m_star = m_star_of(p.mu, p.nu, p.lambda);
    dc.m = m_of(p.mu, p.nu, p.lambda);
    dc.measure = grid.measure();
    dc.diameter = grid.diameter();
    dc.delta0 = compute_delta0(grid.dim, dc.diameter);
    dc.xi = compute_xi(p.c1, p.c2);
    dc.h = h_of(p.chi1, p.chi2);
    dc.p = p_of(p.chi1, p.chi2);
    dc.eq = compute_equilibrium(p);  // throws unless weak competition holds
    dc.eta_tilde = eta_tilde_of(p, dc.xi);
    dc.eta0 = eta0_of(p, dc.xi);
    dc.m_tilde_0 = dc.b_max + dc.c_max;
    dc.m_tilde_1 = dc.m / (dc.delta0 * dc.measure * dc.eq.w_star * dc.eta0);
    dc.m1 = std::max(1.0, dc.m_tilde_1);
    if (p.chi1 == p.chi2) {
        dc.beta_equal_chi = p.chi1 + 2.0 - 2.0 * std::sqrt(p.chi1 + 1.0);
    }
    return dc;
}

namespace {

ConditionEntry strict_greater(double lhs, double rhs) {
    ConditionEntry e;
    e.lhs = lhs;
    e.rhs = rhs;
    e.margin = lhs - rhs;
    e.holds = e.margin > 0.0;
    return e;
}

ConditionEntry strict_less(double lhs, double rhs) {
    ConditionEntry e;
    e.lhs = lhs;
    e.rhs = rhs;
    e.margin = rhs - lhs;
    e.holds = e.margin > 0.0;
    return e;
}

}  // namespace

ConditionReport check_theorems(const ModelParams& p, const Grid& grid) {
    p.validate();
    ConditionReport r;
    r.chi_equal = p.chi1 == p.chi2;
    const WeakCompetition wc = check_weak_competition(p);
    r.weak_competition = wc.holds;
    r.weak_c1 = strict_less(p.c1, p.a1 * p.b2 / p.a2);
    r.weak_c2 = strict_less(p.c2, p.a2 * p.b1 / p.a1);

    r.h = h_of(p.chi1, p.chi2);
    r.p = p_of(p.chi1, p.chi2);
    r.m0 = m0_of(p);
    r.m_star = m_star_of(p.mu, p.nu, p.lambda);
    r.m = m_of(p.mu, p.nu, p.lambda);
    r.delta0 = compute_delta0(grid.dim, grid.diameter());
    r.xi = compute_xi(p.c1, p.c2);

    const double amin = a_min(p);
    const double measure = grid.measure();
    const double min_prod = std::min(p.nu, p.lambda);

    r.persistence_general = strict_greater(amin, 2.0 * p.mu * r.h);
    if (r.persistence_general.holds) {
        r.mass_bound_general = measure * std::pow((amin - 2.0 * p.mu * r.h) / r.m0, 1.0 / r.p);
        r.w_bound_general = r.delta0 * min_prod * *r.mass_bound_general;
    }
    if (amin > 2.0 * r.h) {
        r.mass_bound_general_as_printed =
            measure * std::pow((amin - 2.0 * r.h) / r.m0, 1.0 / r.p);
        r.w_bound_general_as_printed = r.delta0 * min_prod * *r.mass_bound_general_as_printed;
    }

    if (r.chi_equal) {
        const double root = std::sqrt(p.chi1 + 1.0) - 1.0;
        const double two_mu_beta = 2.0 * p.mu * root * root;
        r.persistence_equal_chi = strict_greater(amin, two_mu_beta);
        if (r.persistence_equal_chi->holds) {
            r.mass_bound_equal_chi = measure * (amin - two_mu_beta) / (b_max(p) + c_max(p));
            r.w_bound_equal_chi = r.delta0 * min_prod * *r.mass_bound_equal_chi;
        }
    }

    if (wc.holds) {
        DerivedConstants dc = compute_constants(p, grid);
        r.constants = dc;
        const double chi_term =
            (p.chi1 * p.chi1 * dc.eq.u_star + p.chi2 * p.chi2 * dc.eq.v_star) / 4.0;
        r.stabilization_general = strict_greater(
            amin, 2.0 * p.mu * dc.h + dc.m0 * dc.m1 * std::pow(chi_term, dc.p));
        if (r.chi_equal) {
            const double root = std::sqrt(p.chi1 + 1.0) - 1.0;
            r.stabilization_equal_chi = strict_greater(
                amin,
                2.0 * p.mu * root * root + dc.m_tilde_0 * dc.m_tilde_1 * chi_term);
        }
    }
    return r;
}

namespace {

using nlohmann::json;

json entry_json(const ConditionEntry& e) {
    return json{{"holds", e.holds}, {"lhs", e.lhs}, {"rhs", e.rhs}, {"margin", e.margin}};
}

json opt_num(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

}  // namespace

std::string condition_report_to_json(const ConditionReport& r, const ModelParams& p) {
    json j;
    j["chi_equal"] = r.chi_equal;
    j["weak_competition"] = json{{"holds", r.weak_competition}};
    j["weak_competition_c1"] = entry_json(r.weak_c1);
    j["weak_competition_c2"] = entry_json(r.weak_c2);
    j["persistence_general"] = entry_json(r.persistence_general);
    if (r.persistence_equal_chi) {
        j["persistence_equal_chi"] = entry_json(*r.persistence_equal_chi);
    }
    if (r.stabilization_general) {
        j["stabilization_general"] = entry_json(*r.stabilization_general);
    } else {
        j["stabilization_general"] = json{{"holds", false}, {"error", "weak_competition_violated"}};
    }
    if (r.stabilization_equal_chi) {
        j["stabilization_equal_chi"] = entry_json(*r.stabilization_equal_chi);
    } else if (r.chi_equal) {
        j["stabilization_equal_chi"] =
            json{{"holds", false}, {"error", "weak_competition_violated"}};
    }

    json bounds;
    bounds["mass_general"] = opt_num(r.mass_bound_general);
    bounds["mass_general_as_printed"] = opt_num(r.mass_bound_general_as_printed);
    bounds["w_general"] = opt_num(r.w_bound_general);
    bounds["w_general_as_printed"] = opt_num(r.w_bound_general_as_printed);
    bounds["mass_equal_chi"] = opt_num(r.mass_bound_equal_chi);
    bounds["w_equal_chi"] = opt_num(r.w_bound_equal_chi);
    j["bounds"] = bounds;

    json c;
    c["h"] = r.h;
    c["p"] = r.p;
    c["m0"] = r.m0;
    c["m_star"] = r.m_star;
    c["m"] = r.m;
    c["delta0"] = r.delta0;
    c["xi1"] = r.xi.xi1;
    c["xi2"] = r.xi.xi2;
    c["xi_product"] = r.xi.product;
    c["a_min"] = a_min(p);
    c["a_max"] = a_max(p);
    c["b_min"] = b_min(p);
    c["b_max"] = b_max(p);
    c["c_min"] = c_min(p);
    c["c_max"] = c_max(p);
    if (r.constants) {
        const DerivedConstants& dc = *r.constants;
        c["eta_tilde"] = opt_num(dc.eta_tilde);
        c["eta0"] = dc.eta0;
        c["m1"] = dc.m1;
        c["m_tilde_0"] = dc.m_tilde_0;
        c["m_tilde_1"] = dc.m_tilde_1;
        c["beta_equal_chi"] = opt_num(dc.beta_equal_chi);
        c["u_star"] = dc.eq.u_star;
        c["v_star"] = dc.eq.v_star;
        c["w_star"] = dc.eq.w_star;
        c["measure"] = dc.measure;
        c["diameter"] = dc.diameter;
    } else {
        for (const char* k : {"eta_tilde", "eta0", "m1", "m_tilde_0", "m_tilde_1",
                              "beta_equal_chi", "u_star", "v_star", "w_star"}) {
            c[k] = nullptr;
        }
    }
    j["constants"] = c;
    return j.dump(2);
}

}  // namespace chemlv
