#ifndef CHEMLV_ORACLE_HPP
#define CHEMLV_ORACLE_HPP

#include <vector>

#include "chemlv/grid.hpp"
#include "chemlv/params.hpp"
#include "chemlv/stepper.hpp"

namespace chemlv {

/// Reference computations kept deliberately independent of the production
/// scheme: a classical fourth-order one-step integrator for the spatially
/// homogeneous reduction, and a dense factorization for tiny chemical solves.

struct OdePoint {
    double t = 0, u = 0, v = 0, w = 0;
};

/// Homogeneous reduction u' = u(a1 - b1 u - c1 v), v' = v(a2 - b2 v - c2 u),
/// w = (nu u + lambda v)/mu, integrated with classical RK4 at dt_fine and
/// recorded every record_stride steps (plus the endpoint).
std::vector<OdePoint> ode_reduction(const ModelParams& p, double u0, double v0,
                                    double t_end, double dt_fine,
                                    int record_stride = 1);

/// Runs the PDE stepper and the RK4 oracle from identical homogeneous data
/// and returns the max over time of |u_pde - u_ode| + |v_pde - v_ode|
/// (PDE values taken cellwise, so homogeneity drift is included).
double compare_homogeneous(const ModelParams& p, const Grid& grid,
                           const StepperConfig& cfg, double u0, double v0);

/// Assembles the full dense matrix (mu I - Lap_h) and solves by dense
/// factorization. Restricted to grids of at most 64 cells.
Field dense_elliptic_oracle(const Field& u, const Field& v, const ModelParams& p);

}  // namespace chemlv

#endif
