#include "chemlv/elliptic.hpp"

#include <cmath>
#include <numeric>

namespace chemlv {

namespace {

// Row diagonal of mu I - Lap_h for cell (i, j): boundary cells lose the
// outward flux coefficient.
double row_diag(const Grid& g, double mu, int i, int j) {
    const double bx = 1.0 / (g.hx * g.hx);
    double d = mu;
    if (i > 0) d += bx;
    if (i + 1 < g.nx) d += bx;
    if (g.dim == 2) {
        const double by = 1.0 / (g.hy * g.hy);
        if (j > 0) d += by;
        if (j + 1 < g.ny) d += by;
    }
    return d;
}

}  // namespace

HelmholtzSolver::HelmholtzSolver(const Grid& grid, double mu, double rel_tol, int max_iter)
    : grid_(grid), mu_(mu), rel_tol_(rel_tol), max_iter_(max_iter) {
    if (!(mu > 0.0)) throw ConfigError("screened solve needs mu > 0");
    if (max_iter_ <= 0) max_iter_ = 100 + 20 * grid_.cell_count();
    if (grid_.dim == 1) {
        // Tridiagonal LU: pivots and scaled upper coefficients.
        const int n = grid_.nx;
        const double off = -1.0 / (grid_.hx * grid_.hx);
        fac_upper_.assign(static_cast<std::size_t>(n), 0.0);
        fac_pivot_.assign(static_cast<std::size_t>(n), 0.0);
        double pivot = row_diag(grid_, mu_, 0, 0);
        fac_pivot_[0] = pivot;
        for (int i = 1; i < n; ++i) {
            fac_upper_[static_cast<std::size_t>(i - 1)] = off / pivot;
            pivot = row_diag(grid_, mu_, i, 0) - off * fac_upper_[static_cast<std::size_t>(i - 1)];
            fac_pivot_[static_cast<std::size_t>(i)] = pivot;
        }
    }
}

Field HelmholtzSolver::apply(const Field& x) const {
    Field lap = laplacian_neumann(x);
    Field out(grid_);
    for (int i = 0; i < x.size(); ++i) out[i] = mu_ * x[i] - lap[i];
    return out;
}

Field HelmholtzSolver::solve_direct_1d(const Field& source) const {
    const int n = grid_.nx;
    Field x(grid_);
    std::vector<double> y(static_cast<std::size_t>(n));
    y[0] = source[0];
    for (int i = 1; i < n; ++i) {
        y[static_cast<std::size_t>(i)] =
            source[i] - fac_upper_[static_cast<std::size_t>(i - 1)] *
                            y[static_cast<std::size_t>(i - 1)];
    }
    x[n - 1] = y[static_cast<std::size_t>(n - 1)] / fac_pivot_[static_cast<std::size_t>(n - 1)];
    for (int i = n - 2; i >= 0; --i) {
        x[i] = y[static_cast<std::size_t>(i)] / fac_pivot_[static_cast<std::size_t>(i)] -
               fac_upper_[static_cast<std::size_t>(i)] * x[i + 1];
    }
    return x;
}

Field HelmholtzSolver::solve_cg(const Field& source) const {
    const int n = grid_.cell_count();
    Field x(grid_, 0.0);
    Field r = source;
    // Jacobi preconditioner.
    std::vector<double> inv_diag(static_cast<std::size_t>(n));
    for (int j = 0; j < grid_.ny; ++j) {
        for (int i = 0; i < grid_.nx; ++i) {
            inv_diag[static_cast<std::size_t>(grid_.idx(i, j))] =
                1.0 / row_diag(grid_, mu_, i, j);
        }
    }
    auto dot = [n](const Field& a, const Field& b) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += a[i] * b[i];
        return s;
    };
    const double b_norm = std::sqrt(dot(source, source));
    if (b_norm == 0.0) return x;
    Field z(grid_);
    for (int i = 0; i < n; ++i) z[i] = inv_diag[static_cast<std::size_t>(i)] * r[i];
    Field p = z;
    double rz = dot(r, z);
    for (int it = 0; it < max_iter_; ++it) {
        if (std::sqrt(dot(r, r)) <= rel_tol_ * b_norm) return x;
        Field ap = apply(p);
        const double alpha = rz / dot(p, ap);
        for (int i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        for (int i = 0; i < n; ++i) z[i] = inv_diag[static_cast<std::size_t>(i)] * r[i];
        const double rz_next = dot(r, z);
        const double beta = rz_next / rz;
        rz = rz_next;
        for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    if (std::sqrt(dot(r, r)) <= rel_tol_ * b_norm) return x;
    throw SolveFailure("conjugate gradients hit the iteration cap before tolerance");
}

Field HelmholtzSolver::solve(const Field& source) const {
    if (!(source.grid == grid_)) throw ConfigError("source field on a different grid");
    return grid_.dim == 1 ? solve_direct_1d(source) : solve_cg(source);
}

Field solve_helmholtz(const Field& u, const Field& v, const ModelParams& p) {
    const HelmholtzSolver solver(u.grid, p.mu);
    return solve_helmholtz(solver, u, v, p);
}

Field solve_helmholtz(const HelmholtzSolver& solver, const Field& u, const Field& v,
                      const ModelParams& p) {
    const Grid& g = solver.grid();
    Field source(g);
    double mass = 0.0;
    for (int i = 0; i < source.size(); ++i) {
        if (u[i] < 0.0 || v[i] < 0.0) {
            throw InvalidInitialData("chemical solve needs nonnegative densities");
        }
        source[i] = p.nu * u[i] + p.lambda * v[i];
        mass += u[i] + v[i];
    }
    if (!(mass > 0.0)) {
        throw InvalidInitialData("chemical solve needs positive combined mass");
    }
    Field w = solver.solve(source);
    for (int i = 0; i < w.size(); ++i) {
        if (!(w[i] > 0.0)) {
            throw NonPositiveW("chemical concentration non-positive: discretization breakdown");
        }
    }
    return w;
}

}  // namespace chemlv
