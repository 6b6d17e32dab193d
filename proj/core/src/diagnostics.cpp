#include "chemlv/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

namespace chemlv {

double log_gap(double x, double c) {
    const double r = (x - c) / c;
    if (std::abs(r) < 1e-4) {
        // Series form keeps the gap nonnegative where log1p cancellation
        // would swamp the r^2/2 leading term.
        return c * (r * r * (0.5 - r / 3.0 + r * r / 4.0));
    }
    return c * (r - std::log1p(r));
}

double energy(const Field& u, const Field& v, const Equilibrium& eq, const Xi& xi) {
    if (!(eq.u_star > 0.0) || !(eq.v_star > 0.0)) {
        throw UndefinedEnergy("energy needs a positive reference equilibrium");
    }
    double eu = 0.0, ev = 0.0;
    for (int i = 0; i < u.size(); ++i) {
        if (!(u[i] > 0.0) || !(v[i] > 0.0)) {
            throw UndefinedEnergy("energy undefined: some cell has u <= 0 or v <= 0");
        }
        eu += log_gap(u[i], eq.u_star);
        ev += log_gap(v[i], eq.v_star);
    }
    const double vol = u.grid.cell_volume();
    return xi.xi1 * eu * vol + xi.xi2 * ev * vol;
}

bool InequalityReport::all_pass() const {
    for (const LemmaCheck* c : {&mass_u, &mass_v, &w_floor, &holder, &l2_w, &energy_decay}) {
        if (c->applicable && !c->pass) return false;
    }
    return true;
}

namespace {

void track(LemmaCheck& check, double margin, double t) {
    check.applicable = true;
    ++check.checked;
    if (check.checked == 1 || margin < check.worst_margin) {
        check.worst_margin = margin;
        check.worst_t = t;
    }
    if (margin < 0.0) check.pass = false;
}

}  // namespace

InequalityReport verify_inequalities(const Trajectory& records, const VerifyContext& ctx) {
    if (records.empty()) throw InsufficientData("empty trajectory");
    const ModelParams& p = ctx.params;
    InequalityReport rep;
    rep.mass_u.name = "mass_bound_u";
    rep.mass_v.name = "mass_bound_v";
    rep.w_floor.name = "w_kernel_bound";
    rep.holder.name = "holder_mass_bound";
    rep.l2_w.name = "chemical_l2_bound";
    rep.energy_decay.name = "energy_decay";

    const double cap_u = std::max(records.front().mass_u, p.a1 * ctx.measure / p.b1);
    const double cap_v = std::max(records.front().mass_v, p.a2 * ctx.measure / p.b2);
    const double min_prod = std::min(p.nu, p.lambda);
    for (const DiagnosticsRecord& r : records) {
        track(rep.mass_u, cap_u * (1.0 + 1e-8) - r.mass_u, r.t);
        track(rep.mass_v, cap_v * (1.0 + 1e-8) - r.mass_v, r.t);
        track(rep.w_floor, r.min_w - 0.95 * ctx.delta0 * min_prod * r.mass_uv, r.t);
        if (std::isfinite(r.mass_inv_p) && r.mass_inv_p > 0.0) {
            const double lower = std::pow(ctx.measure, (ctx.p + 1.0) / ctx.p) *
                                 std::pow(r.mass_inv_p, -1.0 / ctx.p);
            track(rep.holder, r.mass_uv - lower + 1e-12 * std::max(1.0, r.mass_uv), r.t);
        }
        if (ctx.has_equilibrium && std::isfinite(r.l2_w)) {
            const double rhs = 2.0 * p.nu * p.nu / (p.mu * p.mu) * r.l2_u * r.l2_u +
                               2.0 * p.lambda * p.lambda / (p.mu * p.mu) * r.l2_v * r.l2_v;
            track(rep.l2_w, rhs + 1e-10 * std::max(1.0, rhs) - r.l2_w * r.l2_w, r.t);
        }
    }

    const double warmup = ctx.t_warmup >= 0.0 ? ctx.t_warmup : 5.0 / a_min(p);
    rep.t_warmup = warmup;
    std::vector<const DiagnosticsRecord*> post;
    for (const DiagnosticsRecord& r : records) {
        if (r.t >= warmup && std::isfinite(r.energy)) post.push_back(&r);
    }
    const bool spans_warmup = records.back().t > warmup;
    if (spans_warmup && records.size() < 3) {
        throw InsufficientData("fewer than 3 records after warmup: recording too sparse");
    }
    if (!post.empty()) {
        rep.tol_E = ctx.tol_E_factor * post.front()->energy;
        double num = 0.0, den = 0.0;
        for (std::size_t k = 0; k + 1 < post.size(); ++k) {
            const DiagnosticsRecord& r0 = *post[k];
            const DiagnosticsRecord& r1 = *post[k + 1];
            track(rep.energy_decay, r0.energy + rep.tol_E - r1.energy, r1.t);
            // Least squares through the origin of dE = -eps * integral of
            // the squared distances (trapezoid over the record interval).
            const double d0 = r0.l2_u * r0.l2_u + r0.l2_v * r0.l2_v;
            const double d1 = r1.l2_u * r1.l2_u + r1.l2_v * r1.l2_v;
            const double x = 0.5 * (d0 + d1) * (r1.t - r0.t);
            num += (r1.energy - r0.energy) * x;
            den += x * x;
        }
        if (post.size() >= 3 && den > 0.0) {
            rep.eps_hat = -num / den;
            rep.eps_fit_valid = true;
        }
    }
    return rep;
}

bool BoundsReport::all_satisfied_or_informational() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const BoundCheck& c) { return c.satisfied || c.informational; });
}

BoundsReport asymptotic_bounds_check(const Trajectory& records,
                                     const ConditionReport& conditions, double measure) {
    BoundsReport rep;
    if (records.empty()) return rep;
    const std::size_t tail = std::max<std::size_t>(1, records.size() / 5);
    double mass_min = std::numeric_limits<double>::infinity();
    double w_min = mass_min;
    for (std::size_t i = records.size() - tail; i < records.size(); ++i) {
        mass_min = std::min(mass_min, records[i].mass_uv);
        w_min = std::min(w_min, records[i].min_w);
    }
    const bool have_eq = conditions.constants.has_value();
    const double eq_mass =
        have_eq ? (conditions.constants->eq.u_star + conditions.constants->eq.v_star) * measure
                : 0.0;
    const double eq_w = have_eq ? conditions.constants->eq.w_star : 0.0;
    auto add = [&](const char* name, const std::optional<double>& bound, double observed,
                   double eq_ref) {
        if (!bound) return;
        BoundCheck c;
        c.name = name;
        c.bound = *bound;
        c.observed_tail_min = observed;
        c.satisfied = observed >= 0.95 * *bound;
        c.informational = have_eq && *bound > eq_ref;
        rep.checks.push_back(c);
    };
    add("mass_general", conditions.mass_bound_general, mass_min, eq_mass);
    add("mass_general_as_printed", conditions.mass_bound_general_as_printed, mass_min, eq_mass);
    add("mass_equal_chi", conditions.mass_bound_equal_chi, mass_min, eq_mass);
    add("w_general", conditions.w_bound_general, w_min, eq_w);
    add("w_general_as_printed", conditions.w_bound_general_as_printed, w_min, eq_w);
    add("w_equal_chi", conditions.w_bound_equal_chi, w_min, eq_w);
    return rep;
}

std::string inequality_report_to_json(const InequalityReport& r) {
    using nlohmann::json;
    auto check_json = [](const LemmaCheck& c) {
        return json{{"name", c.name},
                    {"applicable", c.applicable},
                    {"pass", c.pass},
                    {"worst_margin", c.worst_margin},
                    {"worst_t", c.worst_t},
                    {"checked", c.checked}};
    };
    json j;
    for (const LemmaCheck* c :
         {&r.mass_u, &r.mass_v, &r.w_floor, &r.holder, &r.l2_w, &r.energy_decay}) {
        j[c->name] = check_json(*c);
    }
    j["eps_hat"] = r.eps_hat;
    j["eps_fit_valid"] = r.eps_fit_valid;
    j["t_warmup"] = r.t_warmup;
    j["tol_E"] = r.tol_E;
    j["all_pass"] = r.all_pass();
    return j.dump(2);
}

}  // namespace chemlv
