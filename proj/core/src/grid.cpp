#include "chemlv/grid.hpp"

#include <algorithm>
#include <cmath>

namespace chemlv {

Grid Grid::interval(int nx, double lx) {
    if (nx < 2 || !(lx > 0)) throw ConfigError("interval grid needs nx >= 2 and lx > 0");
    Grid g;
    g.dim = 1;
    g.nx = nx;
    g.ny = 1;
    g.lx = lx;
    g.ly = 1.0;
    g.hx = lx / nx;
    g.hy = 1.0;
    return g;
}

Grid Grid::rectangle(int nx, int ny, double lx, double ly) {
    if (nx < 2 || ny < 2 || !(lx > 0) || !(ly > 0)) {
        throw ConfigError("rectangle grid needs nx,ny >= 2 and lx,ly > 0");
    }
    Grid g;
    g.dim = 2;
    g.nx = nx;
    g.ny = ny;
    g.lx = lx;
    g.ly = ly;
    g.hx = lx / nx;
    g.hy = ly / ny;
    return g;
}

double integrate(const Field& f) {
    double s = 0.0;
    for (double v : f.data) s += v;
    return s * f.grid.cell_volume();
}

double min_value(const Field& f) {
    return *std::min_element(f.data.begin(), f.data.end());
}

double max_value(const Field& f) {
    return *std::max_element(f.data.begin(), f.data.end());
}

double l2_distance(const Field& f, double c) {
    double s = 0.0;
    for (double v : f.data) {
        const double d = v - c;
        s += d * d;
    }
    return std::sqrt(s * f.grid.cell_volume());
}

double linf_distance(const Field& f, double c) {
    double m = 0.0;
    for (double v : f.data) m = std::max(m, std::abs(v - c));
    return m;
}

Field laplacian_neumann(const Field& f) {
    const Grid& g = f.grid;
    Field out(g);
    // Flux form: interior-face differences, zero flux through the boundary,
    // so the cell sums telescope exactly.
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const int c = g.idx(i, j);
            double acc = 0.0;
            const double fxl = i > 0 ? (f[c] - f[g.idx(i - 1, j)]) / g.hx : 0.0;
            const double fxr = i + 1 < g.nx ? (f[g.idx(i + 1, j)] - f[c]) / g.hx : 0.0;
            acc += (fxr - fxl) / g.hx;
            if (g.dim == 2) {
                const double fyl = j > 0 ? (f[c] - f[g.idx(i, j - 1)]) / g.hy : 0.0;
                const double fyr = j + 1 < g.ny ? (f[g.idx(i, j + 1)] - f[c]) / g.hy : 0.0;
                acc += (fyr - fyl) / g.hy;
            }
            out[c] = acc;
        }
    }
    return out;
}

FaceField face_gradient(const Field& f) {
    const Grid& g = f.grid;
    FaceField out(g);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 1; i < g.nx; ++i) {
            out.fx[out.fx_idx(i, j)] = (f[g.idx(i, j)] - f[g.idx(i - 1, j)]) / g.hx;
        }
    }
    if (g.dim == 2) {
        for (int j = 1; j < g.ny; ++j) {
            for (int i = 0; i < g.nx; ++i) {
                out.fy[out.fy_idx(i, j)] = (f[g.idx(i, j)] - f[g.idx(i, j - 1)]) / g.hy;
            }
        }
    }
    return out;
}

Field upwind_advect(const Field& density, const FaceField& velocity) {
    const Grid& g = density.grid;
    Field out(g);
    // Conservative flux differences; boundary faces carry no flux.
    std::vector<double> flux_x(velocity.fx.size(), 0.0);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 1; i < g.nx; ++i) {
            const double v = velocity.fx[velocity.fx_idx(i, j)];
            const double up = v > 0.0 ? density[g.idx(i - 1, j)] : density[g.idx(i, j)];
            flux_x[velocity.fx_idx(i, j)] = v * up;
        }
    }
    std::vector<double> flux_y;
    if (g.dim == 2) {
        flux_y.assign(velocity.fy.size(), 0.0);
        for (int j = 1; j < g.ny; ++j) {
            for (int i = 0; i < g.nx; ++i) {
                const double v = velocity.fy[velocity.fy_idx(i, j)];
                const double up = v > 0.0 ? density[g.idx(i, j - 1)] : density[g.idx(i, j)];
                flux_y[velocity.fy_idx(i, j)] = v * up;
            }
        }
    }
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const int c = g.idx(i, j);
            double div = (flux_x[velocity.fx_idx(i + 1, j)] - flux_x[velocity.fx_idx(i, j)]) / g.hx;
            if (g.dim == 2) {
                div += (flux_y[velocity.fy_idx(i, j + 1)] - flux_y[velocity.fy_idx(i, j)]) / g.hy;
            }
            out[c] = -div;
        }
    }
    return out;
}

}  // namespace chemlv
