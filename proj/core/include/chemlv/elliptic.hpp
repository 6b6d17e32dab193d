#ifndef CHEMLV_ELLIPTIC_HPP
#define CHEMLV_ELLIPTIC_HPP

#include <vector>

#include "chemlv/grid.hpp"
#include "chemlv/params.hpp"

namespace chemlv {

/// Solver for (mu I - Lap_h) x = source with zero-flux boundaries.
///
/// 1D: exact banded (Thomas) factorization, precomputed at construction.
/// 2D: Jacobi-preconditioned conjugate gradients to a relative residual
/// tolerance (the operator is symmetric positive definite).
///
/// Instances are immutable after construction and safe to share across
/// threads; they may be cached per (grid, mu).
class HelmholtzSolver {
  public:
    HelmholtzSolver(const Grid& grid, double mu, double rel_tol = 1e-10,
                    int max_iter = 0 /* 0 = automatic cap */);

    Field solve(const Field& source) const;

    /// Applies mu I - Lap_h (used by the CG path and by residual checks).
    Field apply(const Field& x) const;

    const Grid& grid() const { return grid_; }
    double mu() const { return mu_; }

  private:
    Field solve_direct_1d(const Field& source) const;
    Field solve_cg(const Field& source) const;

    Grid grid_;
    double mu_;
    double rel_tol_;
    int max_iter_;
    // 1D factorization: upper coefficients and pivots of the tridiagonal LU.
    std::vector<double> fac_upper_;
    std::vector<double> fac_pivot_;
};

/// Solves the chemical equation 0 = Lap w - mu w + nu u + lambda v for w.
/// Requires u, v >= 0 componentwise with integrate(u + v) > 0.
/// Postconditions: w > 0 strictly (M-matrix property; NonPositiveW otherwise)
/// and the discrete mass identity mu*integrate(w) = nu*integrate(u) +
/// lambda*integrate(v) up to solver tolerance.
Field solve_helmholtz(const Field& u, const Field& v, const ModelParams& p);

/// Same, reusing a cached solver for (grid, mu).
Field solve_helmholtz(const HelmholtzSolver& solver, const Field& u,
                      const Field& v, const ModelParams& p);

}  // namespace chemlv

#endif
