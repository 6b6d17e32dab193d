#include "chemlv/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <Eigen/Dense>

namespace chemlv {

namespace {

std::array<double, 2> lv_rhs(const ModelParams& p, const std::array<double, 2>& y) {
    return {y[0] * (p.a1 - p.b1 * y[0] - p.c1 * y[1]),
            y[1] * (p.a2 - p.b2 * y[1] - p.c2 * y[0])};
}

std::array<double, 2> rk4_step(const ModelParams& p, const std::array<double, 2>& y, double h) {
    const auto k1 = lv_rhs(p, y);
    const auto k2 = lv_rhs(p, {y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]});
    const auto k3 = lv_rhs(p, {y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]});
    const auto k4 = lv_rhs(p, {y[0] + h * k3[0], y[1] + h * k3[1]});
    return {y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])};
}

}  // namespace

std::vector<OdePoint> ode_reduction(const ModelParams& p, double u0, double v0,
                                    double t_end, double dt_fine, int record_stride) {
    p.validate();
    if (u0 < 0.0 || v0 < 0.0) throw InvalidInitialData("ODE reduction needs nonnegative data");
    if (!(dt_fine > 0.0)) throw ConfigError("dt_fine must be positive");
    const long n = std::max(1L, static_cast<long>(std::ceil(t_end / dt_fine)));
    const double h = t_end / static_cast<double>(n);
    std::vector<OdePoint> out;
    std::array<double, 2> y{u0, v0};
    auto push = [&](double t) {
        out.push_back({t, y[0], y[1], (p.nu * y[0] + p.lambda * y[1]) / p.mu});
    };
    push(0.0);
    for (long k = 0; k < n; ++k) {
        y = rk4_step(p, y, h);
        if ((k + 1) % record_stride == 0 || k + 1 == n) {
            push(static_cast<double>(k + 1) * h);
        }
    }
    return out;
}

double compare_homogeneous(const ModelParams& p, const Grid& grid,
                           const StepperConfig& cfg, double u0, double v0) {
    Stepper st(p, grid, cfg);
    Field fu(grid, u0), fv(grid, v0);
    State s = st.make_state(0.0, fu, fv);

    std::array<double, 2> y{u0, v0};
    const double dt_fine_req = 1e-3 / a_max(p);
    double max_dev = 0.0;
    auto record_dev = [&]() {
        double dev = 0.0;
        for (int i = 0; i < s.u.size(); ++i) {
            dev = std::max(dev, std::abs(s.u[i] - y[0]) + std::abs(s.v[i] - y[1]));
        }
        max_dev = std::max(max_dev, dev);
    };
    record_dev();
    const double tiny = 1e-12 * std::max(1.0, cfg.t_end);
    while (s.t < cfg.t_end - tiny) {
        double dt = st.cfl_dt(s);
        if (s.t + dt > cfg.t_end) dt = cfg.t_end - s.t;
        s = st.step(s, dt);
        const int sub = std::max(1, static_cast<int>(std::ceil(dt / dt_fine_req)));
        const double h = dt / sub;
        for (int k = 0; k < sub; ++k) y = rk4_step(p, y, h);
        record_dev();
    }
    return max_dev;
}

Field dense_elliptic_oracle(const Field& u, const Field& v, const ModelParams& p) {
    const Grid& g = u.grid;
    const int n = g.cell_count();
    if (n > 64) throw ConfigError("dense oracle is restricted to grids of at most 64 cells");
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd b(n);
    const double bx = 1.0 / (g.hx * g.hx);
    const double by = g.dim == 2 ? 1.0 / (g.hy * g.hy) : 0.0;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const int c = g.idx(i, j);
            double diag = p.mu;
            if (i > 0) {
                a(c, g.idx(i - 1, j)) = -bx;
                diag += bx;
            }
            if (i + 1 < g.nx) {
                a(c, g.idx(i + 1, j)) = -bx;
                diag += bx;
            }
            if (g.dim == 2 && j > 0) {
                a(c, g.idx(i, j - 1)) = -by;
                diag += by;
            }
            if (g.dim == 2 && j + 1 < g.ny) {
                a(c, g.idx(i, j + 1)) = -by;
                diag += by;
            }
            a(c, c) = diag;
            b(c) = p.nu * u[c] + p.lambda * v[c];
        }
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (!lu.isInvertible()) {
        throw SingularMatrix("dense chemical matrix singular: fatal defect");
    }
    const Eigen::VectorXd x = lu.solve(b);
    Field w(g);
    for (int i = 0; i < n; ++i) w[i] = x(i);
    return w;
}

}  // namespace chemlv
