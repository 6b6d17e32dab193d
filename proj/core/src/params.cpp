#include "chemlv/params.hpp"

#include <utility>

namespace chemlv {

void ModelParams::validate() const {
    const std::pair<const char*, double> fields[] = {
        {"chi1", chi1}, {"chi2", chi2}, {"a1", a1}, {"a2", a2},
        {"b1", b1},     {"b2", b2},     {"c1", c1}, {"c2", c2},
        {"mu", mu},     {"nu", nu},     {"lambda", lambda},
    };
    for (const auto& [name, value] : fields) {
        if (!(value > 0.0)) {
            throw ConfigError(std::string("model parameter must be positive: ") + name);
        }
    }
}

ModelParams ModelParams::swapped() const {
    ModelParams s = *this;
    std::swap(s.chi1, s.chi2);
    std::swap(s.a1, s.a2);
    std::swap(s.b1, s.b2);
    std::swap(s.c1, s.c2);
    std::swap(s.nu, s.lambda);
    return s;
}

WeakCompetition check_weak_competition(const ModelParams& p) {
    WeakCompetition wc;
    wc.margin1 = p.a1 * p.b2 / p.a2 - p.c1;
    wc.margin2 = p.a2 * p.b1 / p.a1 - p.c2;
    wc.holds = wc.margin1 > 0.0 && wc.margin2 > 0.0;
    return wc;
}

Equilibrium compute_equilibrium(const ModelParams& p) {
    if (!check_weak_competition(p).holds) {
        throw WeakCompetitionViolated(
            "weak competition fails: no positive coexistence equilibrium is guaranteed");
    }
    const double det = p.b1 * p.b2 - p.c1 * p.c2;
    Equilibrium eq;
    eq.u_star = (p.a1 * p.b2 - p.c1 * p.a2) / det;
    eq.v_star = (p.b1 * p.a2 - p.a1 * p.c2) / det;
    eq.w_star = (p.nu * eq.u_star + p.lambda * eq.v_star) / p.mu;
    return eq;
}

}  // namespace chemlv
