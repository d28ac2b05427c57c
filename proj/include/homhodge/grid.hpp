#pragma once

#include <cmath>
#include <string>

#include "homhodge/errors.hpp"

namespace homhodge {

// Uniform 1D node grid on [x_min, x_max], node i at x_min + i*h.
struct IntervalGrid {
    double x_min = 0.0;
    double x_max = 1.0;
    int n = 3;
    double h = 0.5;

    double node(int i) const { return x_min + i * h; }
};

inline IntervalGrid build_interval_grid(double x_min, double x_max, int n) {
    if (!std::isfinite(x_min) || !std::isfinite(x_max))
        throw ConfigError("interval grid: bounds must be finite");
    if (!(x_min < x_max))
        throw ConfigError("interval grid: require x_min < x_max");
    if (n < 3)
        throw ConfigError("interval grid: need n >= 3 nodes, got " + std::to_string(n));
    IntervalGrid g;
    g.x_min = x_min;
    g.x_max = x_max;
    g.n = n;
    g.h = (x_max - x_min) / (n - 1);
    return g;
}

// Uniform radial grid for spherically symmetric 3D problems. The origin is
// excluded (r_min > 0); the radial Laplacian u'' + (2/r) u' is assembled by
// the solver.
struct RadialGrid {
    double r_min = 0.1;
    double r_max = 1.0;
    int n = 3;
    double h = 0.45;
    static constexpr int dimension = 3;

    double node(int i) const { return r_min + i * h; }
};

inline RadialGrid build_radial_grid(double r_min, double r_max, int n) {
    if (!std::isfinite(r_min) || !std::isfinite(r_max))
        throw ConfigError("radial grid: bounds must be finite");
    if (!(r_min > 0.0))
        throw ConfigError("radial grid: require r_min > 0 (origin excluded)");
    if (!(r_min < r_max))
        throw ConfigError("radial grid: require r_min < r_max");
    if (n < 3)
        throw ConfigError("radial grid: need n >= 3 nodes");
    RadialGrid g;
    g.r_min = r_min;
    g.r_max = r_max;
    g.n = n;
    g.h = (r_max - r_min) / (n - 1);
    return g;
}

// Plain (non-periodic) 2D box grid; five-point Laplacian stencil in the solver.
struct BoxGrid2D {
    double x_min = 0.0, x_max = 1.0;
    double y_min = 0.0, y_max = 1.0;
    int nx = 3, ny = 3;
    double hx = 0.5, hy = 0.5;

    int node_count() const { return nx * ny; }
    int index(int i, int j) const { return j * nx + i; }
    double x(int i) const { return x_min + i * hx; }
    double y(int j) const { return y_min + j * hy; }
    bool on_boundary(int i, int j) const {
        return i == 0 || j == 0 || i == nx - 1 || j == ny - 1;
    }
};

inline BoxGrid2D build_box_grid(double x_min, double x_max, double y_min, double y_max,
                                int nx, int ny) {
    if (!(x_min < x_max) || !(y_min < y_max))
        throw ConfigError("box grid: require x_min < x_max and y_min < y_max");
    if (nx < 3 || ny < 3)
        throw ConfigError("box grid: need at least 3 nodes per direction");
    BoxGrid2D g;
    g.x_min = x_min; g.x_max = x_max;
    g.y_min = y_min; g.y_max = y_max;
    g.nx = nx; g.ny = ny;
    g.hx = (x_max - x_min) / (nx - 1);
    g.hy = (y_max - y_min) / (ny - 1);
    return g;
}

}  // namespace homhodge
