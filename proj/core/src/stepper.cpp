#include "chemlv/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "chemlv/constants.hpp"
#include "chemlv/io.hpp"

namespace chemlv {

std::string to_string(RunClass c) {
    switch (c) {
        case RunClass::Converged: return "converged";
        case RunClass::RunningOutOfTime: return "running_out_of_time";
        case RunClass::WFloorHit: return "w_floor_hit";
        case RunClass::BlowUpSuspected: return "blow_up_suspected";
    }
    return "unknown";
}

std::string to_string(RunMode m) {
    switch (m) {
        case RunMode::TwoSpecies: return "two_species";
        case RunMode::UOnly: return "u_only";
        case RunMode::VOnly: return "v_only";
    }
    return "unknown";
}

Stepper::Stepper(const ModelParams& params, const Grid& grid, const StepperConfig& cfg)
    : params_(params), grid_(grid), cfg_(cfg), chem_solver_(grid, params.mu) {
    params_.validate();
    if (!(cfg.cfl_safety > 0.0 && cfg.cfl_safety < 1.0)) {
        throw ConfigError("cfl_safety must lie in (0,1)");
    }
    if (!(cfg.dt_max > 0.0)) throw ConfigError("dt_max must be positive");
    if (cfg.w_floor > 0.0) {
        w_floor_ = cfg.w_floor;
    } else {
        // Default guard: a thousandth of the predicted asymptotic w bound
        // when the persistence condition holds, else a tiny absolute floor.
        const ConditionReport rep = check_theorems(params_, grid_);
        if (rep.chi_equal && rep.w_bound_equal_chi) {
            w_floor_ = 1e-3 * *rep.w_bound_equal_chi;
        } else if (rep.w_bound_general) {
            w_floor_ = 1e-3 * *rep.w_bound_general;
        } else {
            w_floor_ = 1e-10;
        }
    }
}

FaceField Stepper::chemotactic_velocity(const Field& w, double chi) const {
    const double wmin = min_value(w);
    if (wmin < w_floor_) {
        std::ostringstream os;
        os << "min w = " << wmin << " fell below the floor " << w_floor_;
        throw WFloorViolation(os.str());
    }
    const Grid& g = grid_;
    FaceField vel(g);
    constexpr double kFlat = 4.0 * std::numeric_limits<double>::epsilon();
    auto face = [&](double wl, double wr, double h) {
        // Increments below a few ulps of w are flat: elliptic rounding noise
        // must not advect.
        if (std::abs(wr - wl) <= kFlat * std::max(std::abs(wl), std::abs(wr))) return 0.0;
        return chi * ((wr - wl) / h) / (0.5 * (wl + wr));
    };
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 1; i < g.nx; ++i) {
            vel.fx[vel.fx_idx(i, j)] = face(w[g.idx(i - 1, j)], w[g.idx(i, j)], g.hx);
        }
    }
    if (g.dim == 2) {
        for (int j = 1; j < g.ny; ++j) {
            for (int i = 0; i < g.nx; ++i) {
                vel.fy[vel.fy_idx(i, j)] = face(w[g.idx(i, j - 1)], w[g.idx(i, j)], g.hy);
            }
        }
    }
    return vel;
}

double Stepper::cfl_dt(const State& s) const {
    const FaceField unit = chemotactic_velocity(s.w, 1.0);
    const double chi_big = std::max(params_.chi1, params_.chi2);
    double rate = 0.0;  // sum over axes of max |velocity| / spacing
    double mx = 0.0;
    for (double v : unit.fx) mx = std::max(mx, std::abs(v));
    rate += chi_big * mx / grid_.hx;
    if (grid_.dim == 2) {
        double my = 0.0;
        for (double v : unit.fy) my = std::max(my, std::abs(v));
        rate += chi_big * my / grid_.hy;
    }
    double dt = cfg_.dt_max;
    if (rate > 0.0) dt = std::min(dt, cfg_.cfl_safety / rate);
    dt = std::min(dt, cfg_.cfl_safety / a_max(params_));
    return dt;
}

Field Stepper::diffuse(const Field& f, double dt) const {
    if (!diff_solver_ || dt != diff_dt_) {
        diff_solver_ = std::make_shared<const HelmholtzSolver>(grid_, 1.0 / dt);
        diff_dt_ = dt;
    }
    // (I - dt Lap) x = f  <=>  (1/dt I - Lap) x = f / dt
    Field rhs(grid_);
    for (int i = 0; i < f.size(); ++i) rhs[i] = f[i] / dt;
    return diff_solver_->solve(rhs);
}

State Stepper::step(const State& s, double dt) const {
    const FaceField vel_u = chemotactic_velocity(s.w, params_.chi1);
    const FaceField vel_v = chemotactic_velocity(s.w, params_.chi2);

    // (i) explicit upwind chemotactic advection
    Field u = s.u;
    Field v = s.v;
    {
        const Field du = upwind_advect(s.u, vel_u);
        const Field dv = upwind_advect(s.v, vel_v);
        for (int i = 0; i < u.size(); ++i) {
            u[i] += dt * du[i];
            v[i] += dt * dv[i];
        }
    }
    for (int i = 0; i < u.size(); ++i) {
        if (u[i] < 0.0 || v[i] < 0.0) {
            if (cfg_.debug_allow_clipping) {
                u[i] = std::max(u[i], 0.0);
                v[i] = std::max(v[i], 0.0);
            } else {
                throw NegativeDensity("density negative after advection: CFL contract violated");
            }
        }
    }

    // (ii) implicit diffusion
    u = diffuse(u, dt);
    v = diffuse(v, dt);

    // (iii) positivity-preserving semi-implicit reaction; the constant
    // equilibrium is an exact fixed point of this quotient.
    for (int i = 0; i < u.size(); ++i) {
        const double ui = u[i];
        const double vi = v[i];
        u[i] = ui * (1.0 + dt * params_.a1) / (1.0 + dt * (params_.b1 * ui + params_.c1 * vi));
        v[i] = vi * (1.0 + dt * params_.a2) / (1.0 + dt * (params_.b2 * vi + params_.c2 * ui));
    }
    for (int i = 0; i < u.size(); ++i) {
        if (u[i] < 0.0 || v[i] < 0.0) {
            throw NegativeDensity("density negative after step");
        }
    }

    // (iv) chemical re-solve
    State out;
    out.t = s.t + dt;
    out.w = solve_helmholtz(chem_solver_, u, v, params_);
    out.u = std::move(u);
    out.v = std::move(v);
    return out;
}

State Stepper::make_state(double t, const Field& u, const Field& v) const {
    double mass = 0.0;
    for (int i = 0; i < u.size(); ++i) {
        if (u[i] < 0.0 || v[i] < 0.0) {
            throw InvalidInitialData("initial densities must be nonnegative");
        }
        mass += u[i] + v[i];
    }
    if (!(mass > 0.0)) {
        throw InvalidInitialData("initial data needs positive combined mass");
    }
    State s;
    s.t = t;
    s.u = u;
    s.v = v;
    s.w = solve_helmholtz(chem_solver_, u, v, params_);
    return s;
}

namespace {

double uniform01(std::mt19937_64& rng) {
    // Top 53 bits -> [0,1); bit-stable across platforms unlike
    // std::uniform_real_distribution.
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct RecordContext {
    double measure = 0;
    double delta0 = 0;
    double p_exp = 1;
    double min_prod = 0;
    bool has_eq = false;
    Equilibrium eq;
    Xi xi;
    double mass_cap_u = 0;  // a1 |Omega| / b1
    double mass_cap_v = 0;
    double first_mass_u = -1;
    double first_mass_v = -1;
    ModelParams params;
};

DiagnosticsRecord make_record(const State& s, RecordContext& ctx) {
    DiagnosticsRecord r;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    r.t = s.t;
    r.mass_u = integrate(s.u);
    r.mass_v = integrate(s.v);
    r.mass_uv = r.mass_u + r.mass_v;
    double inv = 0.0;
    bool positive = true;
    double min_u = std::numeric_limits<double>::infinity();
    double min_v = min_u;
    for (int i = 0; i < s.u.size(); ++i) {
        const double sum = s.u[i] + s.v[i];
        inv += std::pow(sum, -ctx.p_exp);
        min_u = std::min(min_u, s.u[i]);
        min_v = std::min(min_v, s.v[i]);
        positive = positive && sum > 0.0;
    }
    r.mass_inv_p = inv * s.u.grid.cell_volume();
    r.min_w = min_value(s.w);
    if (ctx.has_eq) {
        r.l2_u = l2_distance(s.u, ctx.eq.u_star);
        r.l2_v = l2_distance(s.v, ctx.eq.v_star);
        r.l2_w = l2_distance(s.w, ctx.eq.w_star);
        r.linf_u = linf_distance(s.u, ctx.eq.u_star);
        r.linf_v = linf_distance(s.v, ctx.eq.v_star);
        r.linf_w = linf_distance(s.w, ctx.eq.w_star);
    } else {
        r.l2_u = r.l2_v = r.l2_w = r.linf_u = r.linf_v = r.linf_w = nan;
    }
    if (ctx.has_eq && min_u > 0.0 && min_v > 0.0 && ctx.eq.u_star > 0.0 && ctx.eq.v_star > 0.0) {
        double eu = 0.0, ev = 0.0;
        for (int i = 0; i < s.u.size(); ++i) {
            eu += log_gap(s.u[i], ctx.eq.u_star);
            ev += log_gap(s.v[i], ctx.eq.v_star);
        }
        const double vol = s.u.grid.cell_volume();
        r.energy = ctx.xi.xi1 * eu * vol + ctx.xi.xi2 * ev * vol;
    } else {
        r.energy = nan;
    }

    if (ctx.first_mass_u < 0.0) {
        ctx.first_mass_u = r.mass_u;
        ctx.first_mass_v = r.mass_v;
    }
    const double slack = 1e-8;
    const double cap_u = std::max(ctx.first_mass_u, ctx.mass_cap_u);
    const double cap_v = std::max(ctx.first_mass_v, ctx.mass_cap_v);
    r.ok_mass_u = r.mass_u <= cap_u * (1.0 + slack);
    r.ok_mass_v = r.mass_v <= cap_v * (1.0 + slack);
    r.ok_w_floor = r.min_w >= 0.95 * ctx.delta0 * ctx.min_prod * r.mass_uv;
    if (positive && std::isfinite(r.mass_inv_p)) {
        const double holder = std::pow(ctx.measure, (ctx.p_exp + 1.0) / ctx.p_exp) *
                              std::pow(r.mass_inv_p, -1.0 / ctx.p_exp);
        r.ok_holder = r.mass_uv >= holder - 1e-12 * std::max(1.0, r.mass_uv);
    } else {
        r.ok_holder = true;  // vacuous: inverse moment infinite
    }
    if (ctx.has_eq) {
        const ModelParams& p = ctx.params;
        const double lhs = r.l2_w * r.l2_w;
        const double rhs = 2.0 * p.nu * p.nu / (p.mu * p.mu) * r.l2_u * r.l2_u +
                           2.0 * p.lambda * p.lambda / (p.mu * p.mu) * r.l2_v * r.l2_v;
        r.ok_l2_w = lhs <= rhs + 1e-10 * std::max(1.0, rhs);
    }
    return r;
}

RunResult run_loop(const Stepper& st, const StepperConfig& cfg, State s, long step0) {
    const ModelParams& params = st.params();
    const Grid& grid = st.grid();
    RunResult res;
    res.w_floor = st.w_floor();
    res.blowup_cap = cfg.blowup_cap > 0.0
                         ? cfg.blowup_cap
                         : 1e6 * std::max(params.a1 / params.b1, params.a2 / params.b2);

    const double mass_u0 = integrate(s.u);
    const double mass_v0 = integrate(s.v);
    res.mode = mass_v0 == 0.0 ? RunMode::UOnly
               : mass_u0 == 0.0 ? RunMode::VOnly
                                : RunMode::TwoSpecies;

    RecordContext ctx;
    ctx.params = params;
    ctx.measure = grid.measure();
    ctx.delta0 = compute_delta0(grid.dim, grid.diameter());
    ctx.p_exp = p_of(params.chi1, params.chi2);
    ctx.min_prod = std::min(params.nu, params.lambda);
    ctx.xi = compute_xi(params.c1, params.c2);
    ctx.mass_cap_u = params.a1 * ctx.measure / params.b1;
    ctx.mass_cap_v = params.a2 * ctx.measure / params.b2;
    switch (res.mode) {
        case RunMode::TwoSpecies:
            if (check_weak_competition(params).holds) {
                ctx.eq = compute_equilibrium(params);
                ctx.has_eq = true;
            }
            break;
        case RunMode::UOnly:
            ctx.eq = {params.a1 / params.b1, 0.0,
                      params.nu * params.a1 / (params.mu * params.b1)};
            ctx.has_eq = true;
            break;
        case RunMode::VOnly:
            ctx.eq = {0.0, params.a2 / params.b2,
                      params.lambda * params.a2 / (params.mu * params.b2)};
            ctx.has_eq = true;
            break;
    }
    res.has_equilibrium = ctx.has_eq;
    res.eq = ctx.eq;

    const int stride = std::max(1, cfg.output_stride);
    long k = step0;
    const double t_tiny = 1e-12 * std::max(1.0, cfg.t_end);
    while (true) {
        const bool recorded = k % stride == 0;
        if (recorded) res.records.push_back(make_record(s, ctx));
        auto finish = [&](RunClass c) {
            if (!recorded) res.records.push_back(make_record(s, ctx));
            res.classification = c;
        };
        if (ctx.has_eq) {
            const double dist =
                linf_distance(s.u, ctx.eq.u_star) + linf_distance(s.v, ctx.eq.v_star);
            if (dist < cfg.tol_converge) {
                finish(RunClass::Converged);
                break;
            }
        }
        double peak = 0.0;
        for (int i = 0; i < s.u.size(); ++i) peak = std::max(peak, s.u[i] + s.v[i]);
        if (peak > res.blowup_cap) {
            finish(RunClass::BlowUpSuspected);
            break;
        }
        if (s.t >= cfg.t_end - t_tiny) {
            finish(RunClass::RunningOutOfTime);
            break;
        }
        if (cfg.checkpoint_step > 0 && k == cfg.checkpoint_step &&
            !cfg.checkpoint_path.empty()) {
            write_text_file(cfg.checkpoint_path,
                            checkpoint_text(params, grid, s, k,
                                            static_cast<long>(res.records.size()), "", cfg.seed));
        }
        try {
            double dt = st.cfl_dt(s);
            if (s.t + dt > cfg.t_end) dt = cfg.t_end - s.t;
            s = st.step(s, dt);
        } catch (const WFloorViolation& e) {
            finish(RunClass::WFloorHit);
            res.error_detail = e.what();
            break;
        }
        ++k;
    }
    res.steps = k - step0;
    res.final_state = std::move(s);
    return res;
}

}  // namespace

std::pair<Field, Field> build_initial_fields(const ModelParams& params, const Grid& grid,
                                             const StepperConfig& cfg) {
    std::mt19937_64 rng(cfg.seed);
    Field u(grid), v(grid);
    switch (cfg.ic.kind) {
        case IcKind::Constant:
            for (int i = 0; i < u.size(); ++i) {
                u[i] = cfg.ic.u0;
                v[i] = cfg.ic.v0;
            }
            break;
        case IcKind::PerturbedEquilibrium: {
            const Equilibrium eq = compute_equilibrium(params);
            const double amp = cfg.ic.amplitude;
            for (int i = 0; i < u.size(); ++i) {
                u[i] = eq.u_star * (1.0 + amp * (2.0 * uniform01(rng) - 1.0));
            }
            for (int i = 0; i < v.size(); ++i) {
                v[i] = eq.v_star * (1.0 + amp * (2.0 * uniform01(rng) - 1.0));
            }
            break;
        }
        case IcKind::RandomPositive:
            for (int i = 0; i < u.size(); ++i) {
                u[i] = cfg.ic.lo + (cfg.ic.hi - cfg.ic.lo) * uniform01(rng);
            }
            for (int i = 0; i < v.size(); ++i) {
                v[i] = cfg.ic.lo + (cfg.ic.hi - cfg.ic.lo) * uniform01(rng);
            }
            break;
        case IcKind::FromFile: {
            const Checkpoint ck = parse_checkpoint(read_text_file(cfg.ic.file));
            if (!(ck.grid == grid)) {
                throw InvalidInitialData("initial-condition file was written on a different grid");
            }
            u = ck.state.u;
            v = ck.state.v;
            break;
        }
    }
    return {std::move(u), std::move(v)};
}

RunResult run(const ModelParams& params, const Grid& grid, const StepperConfig& cfg) {
    auto [u0, v0] = build_initial_fields(params, grid, cfg);
    Stepper st(params, grid, cfg);
    State s = st.make_state(0.0, u0, v0);
    return run_loop(st, cfg, std::move(s), 0);
}

RunResult run_from_state(const ModelParams& params, const Grid& grid,
                         const StepperConfig& cfg, const State& start, long step_offset) {
    Stepper st(params, grid, cfg);
    State s = st.make_state(start.t, start.u, start.v);
    // Trust the stored chemical field: it is bit-identical to what the solve
    // would produce, and reusing it keeps resume exact.
    s.w = start.w;
    return run_loop(st, cfg, std::move(s), step_offset);
}

}  // namespace chemlv
