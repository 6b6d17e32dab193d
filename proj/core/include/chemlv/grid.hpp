#ifndef CHEMLV_GRID_HPP
#define CHEMLV_GRID_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "chemlv/errors.hpp"

namespace chemlv {

/// Cell-centered finite-volume discretization of an interval [0,lx] or a
/// rectangle [0,lx] x [0,ly]. Zero-flux (Neumann) boundaries throughout.
struct Grid {
    int dim = 1;     ///< 1 or 2
    int nx = 1;      ///< cells along x
    int ny = 1;      ///< cells along y (1 when dim == 1)
    double lx = 1.0; ///< extent along x
    double ly = 1.0; ///< extent along y (ignored when dim == 1)
    double hx = 1.0; ///< spacing along x
    double hy = 1.0; ///< spacing along y

    static Grid interval(int nx, double lx);
    static Grid rectangle(int nx, int ny, double lx, double ly);

    int cell_count() const { return nx * ny; }
    double measure() const { return dim == 1 ? lx : lx * ly; }
    double diameter() const { return dim == 1 ? lx : std::hypot(lx, ly); }
    double cell_volume() const { return measure() / cell_count(); }

    int idx(int i, int j) const { return i + nx * j; }
    double x_center(int i) const { return (i + 0.5) * hx; }
    double y_center(int j) const { return (j + 0.5) * hy; }

    bool operator==(const Grid&) const = default;
};

/// One value per cell.
struct Field {
    Grid grid;
    std::vector<double> data;

    Field() = default;
    explicit Field(const Grid& g, double fill = 0.0)
        : grid(g), data(static_cast<std::size_t>(g.cell_count()), fill) {}

    double& operator[](int i) { return data[static_cast<std::size_t>(i)]; }
    double operator[](int i) const { return data[static_cast<std::size_t>(i)]; }
    int size() const { return static_cast<int>(data.size()); }
};

/// One value per face. fx holds x-normal faces ((nx+1) x ny), fy holds
/// y-normal faces (nx x (ny+1); empty in 1D). Boundary faces are zero-flux.
struct FaceField {
    Grid grid;
    std::vector<double> fx;
    std::vector<double> fy;

    FaceField() = default;
    explicit FaceField(const Grid& g)
        : grid(g),
          fx(static_cast<std::size_t>((g.nx + 1) * g.ny), 0.0),
          fy(g.dim == 2 ? static_cast<std::size_t>(g.nx * (g.ny + 1)) : 0, 0.0) {}

    int fx_idx(int i, int j) const { return i + (grid.nx + 1) * j; }
    int fy_idx(int i, int j) const { return i + grid.nx * j; }
};

/// Midpoint-rule integral over the domain: cell_volume * sum of values.
double integrate(const Field& f);

double min_value(const Field& f);
double max_value(const Field& f);

/// L2 norm of (f - c) over the domain, sqrt(integral (f-c)^2).
double l2_distance(const Field& f, double c);
/// max_i |f_i - c|.
double linf_distance(const Field& f, double c);

/// Second-difference Laplacian with ghost-cell reflection (zero flux).
/// Conservative by construction: integrate(laplacian_neumann(f)) telescopes
/// to zero.
Field laplacian_neumann(const Field& f);

/// Two-point difference per interior face, zero on boundary faces.
FaceField face_gradient(const Field& f);

/// Rate of change -div(density * velocity) with first-order upwind fluxes.
/// Conservative: the integral of the result telescopes to zero.
Field upwind_advect(const Field& density, const FaceField& velocity);

}  // namespace chemlv

#endif
