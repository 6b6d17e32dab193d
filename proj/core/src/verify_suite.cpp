#include "chemlv/verify_suite.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "chemlv/constants.hpp"
#include "chemlv/diagnostics.hpp"
#include "chemlv/elliptic.hpp"
#include "chemlv/oracle.hpp"
#include "chemlv/stepper.hpp"

namespace chemlv {

namespace {

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

ModelParams random_weak_params(std::mt19937_64& rng) {
    ModelParams p;
    p.a1 = uniform(rng, 0.5, 3.0);
    p.a2 = uniform(rng, 0.5, 3.0);
    p.b1 = uniform(rng, 0.5, 3.0);
    p.b2 = uniform(rng, 0.5, 3.0);
    p.c1 = uniform(rng, 0.05, 0.9) * (p.a1 * p.b2 / p.a2);
    p.c2 = uniform(rng, 0.05, 0.9) * (p.a2 * p.b1 / p.a1);
    p.mu = uniform(rng, 0.5, 1.5);
    p.nu = uniform(rng, 0.5, 2.0);
    p.lambda = uniform(rng, 0.5, 2.0);
    p.chi1 = uniform(rng, 0.0, 2.0);
    p.chi2 = uniform(rng, 0.0, 2.0);
    if (p.chi1 == 0.0) p.chi1 = 1e-6;
    if (p.chi2 == 0.0) p.chi2 = 1e-6;
    return p;
}

struct Suite {
    VerifySuiteResult result;

    void check(const std::string& name, bool pass, const std::string& detail = "") {
        result.checks.push_back({name, pass, detail});
    }

    template <typename F>
    void guarded(const std::string& name, F&& body) {
        try {
            body();
        } catch (const std::exception& e) {
            check(name, false, std::string("exception: ") + e.what());
        }
    }
};

std::string num_pair(double got, double want) {
    std::ostringstream os;
    os.precision(12);
    os << "got " << got << ", want " << want;
    return os.str();
}

void check_delta0(Suite& s) {
    s.guarded("delta0_1d_closed_form", [&] {
        double worst = 0.0;
        for (double d : {0.0, 0.5, 1.0, 2.0, 5.0}) {
            worst = std::max(worst, std::abs(compute_delta0(1, d) - std::exp(-d) / 2.0));
        }
        s.check("delta0_1d_closed_form", worst <= 1e-8, num_pair(worst, 1e-8));
    });
    s.guarded("delta0_2d_bessel", [&] {
        double worst = 0.0;
        for (double d : {0.5, 1.0, 2.0}) {
            const double closed = std::cyl_bessel_k(0.0, d) / (2.0 * M_PI);
            worst = std::max(worst, std::abs(compute_delta0(2, d) - closed));
        }
        s.check("delta0_2d_bessel", worst <= 1e-8, num_pair(worst, 1e-8));
    });
    s.guarded("delta0_monotone", [&] {
        bool ok = true;
        double prev = compute_delta0(1, 0.0);
        for (double d : {0.25, 0.5, 1.0, 2.0, 4.0}) {
            const double cur = compute_delta0(1, d);
            ok = ok && cur < prev;
            prev = cur;
        }
        s.check("delta0_monotone", ok);
    });
}

void check_constants_identities(Suite& s) {
    s.guarded("constants_identities", [&] {
        std::mt19937_64 rng(20240901u);
        const Grid grid = Grid::interval(32, 1.0);
        bool xi_exact = true, det_ok = true, p_ok = true, h_ok = true, eq_ok = true,
             pd_ok = true;
        double det_worst = 0.0;
        for (int trial = 0; trial < 200; ++trial) {
            const ModelParams p = random_weak_params(rng);
            const Xi xi = compute_xi(p.c1, p.c2);
            xi_exact = xi_exact && (xi.xi1 == 1.0 || xi.xi2 == 1.0) &&
                       xi.product == std::min(p.c1, p.c2);
            const double pv = p_of(p.chi1, p.chi2);
            p_ok = p_ok && pv > 0.0 && pv <= 1.0;
            h_ok = h_ok && h_of(p.chi1, p.chi2) >= std::max(p.chi1, p.chi2);
            const Equilibrium eq = compute_equilibrium(p);
            eq_ok = eq_ok &&
                    std::abs(p.b1 * eq.u_star + p.c1 * eq.v_star - p.a1) <= 1e-12 * p.a1 &&
                    std::abs(p.b2 * eq.v_star + p.c2 * eq.u_star - p.a2) <= 1e-12 * p.a2;
            const double eta0 = eta0_of(p, xi);
            for (int k = 1; k <= 8; ++k) {
                const double eta = eta0 * k / 9.0;
                const BMatrix b = b_matrix(p, xi, eta);
                det_worst = std::max(det_worst, std::abs(b.det() - g_eval(p, xi, eta)));
                det_ok = det_ok && std::abs(b.det() - g_eval(p, xi, eta)) <= 1e-12;
                pd_ok = pd_ok && is_positive_definite(b);
            }
        }
        s.check("xi_product_exact", xi_exact);
        s.check("det_b_equals_g", det_ok, num_pair(det_worst, 1e-12));
        s.check("p_in_unit_interval", p_ok);
        s.check("h_dominates_chi", h_ok);
        s.check("equilibrium_linear_identities", eq_ok);
        s.check("b_positive_definite_below_eta0", pd_ok);
    });
}

void check_elliptic(Suite& s, const ModelParams& params) {
    s.guarded("elliptic_checks", [&] {
        std::mt19937_64 rng(77123u);
        // 1D mass identity and dense-oracle agreement.
        {
            const Grid g = Grid::interval(16, 1.0);
            bool mass_ok = true, dense_ok = true, positive_ok = true;
            for (int trial = 0; trial < 50; ++trial) {
                ModelParams p = params;
                p.mu = uniform(rng, 0.5, 1.5);
                Field u(g), v(g);
                for (int i = 0; i < u.size(); ++i) {
                    u[i] = uniform01(rng) < 0.2 ? 0.0 : uniform(rng, 0.0, 2.0);
                    v[i] = uniform01(rng) < 0.2 ? 0.0 : uniform(rng, 0.0, 2.0);
                }
                if (integrate(u) + integrate(v) <= 0.0) u[3] = 1.0;
                const Field w = solve_helmholtz(u, v, p);
                const double lhs = p.mu * integrate(w);
                const double rhs = p.nu * integrate(u) + p.lambda * integrate(v);
                mass_ok = mass_ok && std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs));
                positive_ok = positive_ok && min_value(w) > 0.0;
                const Field wd = dense_elliptic_oracle(u, v, p);
                for (int i = 0; i < w.size(); ++i) {
                    dense_ok = dense_ok && std::abs(w[i] - wd[i]) <= 1e-10 * std::max(1.0, wd[i]);
                }
            }
            s.check("elliptic_mass_identity_1d", mass_ok);
            s.check("elliptic_dense_oracle_1d", dense_ok);
            s.check("elliptic_positivity", positive_ok);
        }
        // Kernel bound and chemical L2 bound on random data.
        {
            const Grid g = Grid::interval(32, 1.0);
            const double d0 = compute_delta0(1, g.diameter());
            bool floor_ok = true, l2_ok = true;
            for (int trial = 0; trial < 50; ++trial) {
                ModelParams p = random_weak_params(rng);
                Field u(g), v(g);
                for (int i = 0; i < u.size(); ++i) {
                    u[i] = uniform01(rng) < 0.3 ? 0.0 : uniform(rng, 0.0, 2.0);
                    v[i] = uniform01(rng) < 0.3 ? 0.0 : uniform(rng, 0.0, 2.0);
                }
                if (integrate(u) + integrate(v) <= 0.0) u[5] = 1.0;
                const Field w = solve_helmholtz(u, v, p);
                const double mass = integrate(u) + integrate(v);
                floor_ok = floor_ok &&
                           min_value(w) >= 0.95 * d0 * std::min(p.nu, p.lambda) * mass;
                const Equilibrium eq = compute_equilibrium(p);
                const double lw = l2_distance(w, eq.w_star);
                const double lu = l2_distance(u, eq.u_star);
                const double lv = l2_distance(v, eq.v_star);
                const double rhs = 2.0 * p.nu * p.nu / (p.mu * p.mu) * lu * lu +
                                   2.0 * p.lambda * p.lambda / (p.mu * p.mu) * lv * lv;
                l2_ok = l2_ok && lw * lw <= rhs + 1e-10 * std::max(1.0, rhs);
            }
            s.check("elliptic_kernel_bound", floor_ok);
            s.check("elliptic_chemical_l2_bound", l2_ok);
        }
    });
}

void check_scheme(Suite& s, const ModelParams& user_params, bool allow_clipping) {
    // Fixed point at the constant equilibrium.
    s.guarded("scheme_fixed_point", [&] {
        ModelParams p = user_params;
        if (!check_weak_competition(p).holds) {
            p = ModelParams{};
            p.a1 = 3; p.a2 = 2; p.b1 = 2; p.b2 = 3; p.c1 = 1; p.c2 = 1;
            p.chi1 = p.chi2 = 0.05;
        }
        const Grid g = Grid::interval(64, 1.0);
        StepperConfig cfg;
        cfg.dt_max = 0.05;
        const Stepper st(p, g, cfg);
        const Equilibrium eq = compute_equilibrium(p);
        State state = st.make_state(0.0, Field(g, eq.u_star), Field(g, eq.v_star));
        for (int k = 0; k < 100; ++k) state = st.step(state, st.cfl_dt(state));
        const double drift = linf_distance(state.u, eq.u_star) / eq.u_star +
                             linf_distance(state.v, eq.v_star) / eq.v_star;
        s.check("scheme_fixed_point", drift <= 1e-11, num_pair(drift, 1e-11));
    });

    // The CFL guard must reject a positivity-violating step; clipping (the
    // injected fault) silently swallows it.
    s.guarded("scheme_cfl_guard_active", [&] {
        ModelParams p;
        p.a1 = p.a2 = 1; p.b1 = p.b2 = 1; p.c1 = p.c2 = 0.5;
        p.chi1 = p.chi2 = 1.0;
        const Grid g = Grid::interval(16, 1.0);
        StepperConfig cfg;
        cfg.w_floor = 1e-12;
        cfg.debug_allow_clipping = allow_clipping;
        const Stepper st(p, g, cfg);
        State state;
        state.t = 0.0;
        state.u = Field(g, 0.1);
        state.v = Field(g, 0.1);
        state.w = Field(g, 1.0);
        state.u[8] = 1.0;
        state.w[8] = 0.5;  // velocity drains cell 8 through both faces
        const double dt = 3.0 * st.cfl_dt(state);
        bool guarded_throw = false;
        try {
            (void)st.step(state, dt);
        } catch (const NegativeDensity&) {
            guarded_throw = true;
        }
        s.check("scheme_cfl_guard_active", guarded_throw,
                allow_clipping ? "clipping enabled: guard did not fire" : "");
    });

    // v == 0 initially stays identically zero.
    s.guarded("scheme_subsystem_invariant", [&] {
        ModelParams p = user_params;
        const Grid g = Grid::interval(32, 1.0);
        StepperConfig cfg;
        cfg.w_floor = 1e-14;
        const Stepper st(p, g, cfg);
        std::mt19937_64 rng(5u);
        Field u(g), v(g, 0.0);
        for (int i = 0; i < u.size(); ++i) u[i] = uniform(rng, 0.2, 1.0);
        State state = st.make_state(0.0, u, v);
        bool zero = true;
        for (int k = 0; k < 50; ++k) {
            state = st.step(state, st.cfl_dt(state));
            for (int i = 0; i < state.v.size(); ++i) zero = zero && state.v[i] == 0.0;
        }
        s.check("scheme_subsystem_invariant", zero);
    });

    // Swapping the species' parameters and data swaps the trajectory bitwise.
    s.guarded("scheme_swap_symmetry", [&] {
        ModelParams p = user_params;
        const Grid g = Grid::interval(24, 1.0);
        StepperConfig cfg;
        cfg.w_floor = 1e-14;
        std::mt19937_64 rng(9u);
        Field u(g), v(g);
        for (int i = 0; i < u.size(); ++i) {
            u[i] = uniform(rng, 0.2, 1.0);
            v[i] = uniform(rng, 0.2, 1.0);
        }
        const Stepper st(p, g, cfg);
        const Stepper st_swapped(p.swapped(), g, cfg);
        State a = st.make_state(0.0, u, v);
        State b = st_swapped.make_state(0.0, v, u);
        bool same = true;
        for (int k = 0; k < 25; ++k) {
            const double dta = st.cfl_dt(a);
            const double dtb = st_swapped.cfl_dt(b);
            same = same && dta == dtb;
            a = st.step(a, dta);
            b = st_swapped.step(b, dtb);
            for (int i = 0; i < a.u.size(); ++i) {
                same = same && a.u[i] == b.v[i] && a.v[i] == b.u[i] && a.w[i] == b.w[i];
            }
        }
        s.check("scheme_swap_symmetry", same);
    });
}

void check_oracle(Suite& s, const ModelParams& params) {
    s.guarded("oracle_homogeneous_agreement", [&] {
        const Grid g = Grid::interval(32, 1.0);
        StepperConfig cfg;
        cfg.dt_max = 1e-3;
        cfg.t_end = 2.0;
        cfg.w_floor = 1e-14;
        const double u0 = 0.5 * params.a1 / params.b1;
        const double v0 = 0.5 * params.a2 / params.b2;
        const double dev1 = compare_homogeneous(params, g, cfg, u0, v0);
        cfg.dt_max = 5e-4;
        const double dev2 = compare_homogeneous(params, g, cfg, u0, v0);
        const bool small = dev1 <= 5e-2;
        const bool first_order = dev2 < 1e-13 || dev1 / dev2 >= 1.5;
        std::ostringstream os;
        os << "dev(dt)=" << dev1 << " dev(dt/2)=" << dev2;
        s.check("oracle_homogeneous_agreement", small && first_order, os.str());
    });
}

void check_trajectory(Suite& s, const RunConfig& cfg) {
    s.guarded("trajectory_inequalities", [&] {
        const Grid grid = cfg.make_grid();
        StepperConfig sc = cfg.stepper;
        sc.t_end = std::min(sc.t_end, 30.0 / a_min(cfg.params));
        const RunResult res = run(cfg.params, grid, sc);
        if (res.classification == RunClass::WFloorHit ||
            res.classification == RunClass::BlowUpSuspected) {
            s.check("trajectory_inequalities", false,
                    "run classified " + to_string(res.classification));
            return;
        }
        VerifyContext ctx;
        ctx.params = cfg.params;
        ctx.measure = grid.measure();
        ctx.delta0 = compute_delta0(grid.dim, grid.diameter());
        ctx.p = p_of(cfg.params.chi1, cfg.params.chi2);
        ctx.has_equilibrium = res.has_equilibrium;
        ctx.eq = res.eq;
        ctx.t_warmup = sc.t_warmup;
        const InequalityReport rep = verify_inequalities(res.records, ctx);
        s.check("trajectory_inequalities", rep.all_pass());
        if (res.classification == RunClass::Converged ||
            sc.t_end >= 10.0 / a_min(cfg.params)) {
            const ConditionReport cond = check_theorems(cfg.params, grid);
            const BoundsReport bounds = asymptotic_bounds_check(res.records, cond, ctx.measure);
            s.check("trajectory_asymptotic_bounds", bounds.all_satisfied_or_informational());
        }
    });
}

}  // namespace

bool VerifySuiteResult::all_pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const VerifyCheck& c) { return c.pass; });
}

VerifySuiteResult run_verify_suite(const RunConfig& cfg) {
    Suite s;
    check_delta0(s);
    check_constants_identities(s);
    check_elliptic(s, cfg.params);
    check_scheme(s, cfg.params, cfg.stepper.debug_allow_clipping);
    check_oracle(s, cfg.params);
    check_trajectory(s, cfg);
    return s.result;
}

}  // namespace chemlv
