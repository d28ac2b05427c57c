#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <variant>
#include <vector>

#include "homhodge/cutoff_profile.hpp"
#include "homhodge/errors.hpp"
#include "homhodge/grid.hpp"

namespace homhodge {

// Interfaces S supported by the solvers. The unit normal points from the
// interior side into the exterior side:
//  - 1D point: interior is x < x0 by convention, normal is +x.
//  - sphere (radial grids, centered at the origin): interior is r < R.
//  - circle in the plane: interior is the disk.
struct PointSurface1D {
    double x0 = 0.0;
};
struct SphereSurface {
    double radius = 0.5;
};
struct CircleSurface {
    double cx = 0.0, cy = 0.0, radius = 0.5;
};
using Surface = std::variant<PointSurface1D, SphereSurface, CircleSurface>;

enum class Side : int { Interior = -1, OnSurface = 0, Exterior = +1 };

// Unsigned distance to S plus side labels, sampled at grid nodes.
struct DistanceField {
    std::vector<double> xi;
    std::vector<Side> side;

    double signed_direction(int i) const { return side[i] == Side::Interior ? -1.0 : 1.0; }
};

// 1D point interfaces may sit outside the grid (the layer then misses the
// domain entirely and the operator degenerates to the plain Laplacian).
inline DistanceField distance_field(const PointSurface1D& s, const IntervalGrid& g) {
    if (!std::isfinite(s.x0))
        throw ConfigError("distance_field: surface point must be finite");
    DistanceField d;
    d.xi.resize(g.n);
    d.side.resize(g.n);
    for (int i = 0; i < g.n; ++i) {
        double x = g.node(i);
        d.xi[i] = std::abs(x - s.x0);
        d.side[i] = x < s.x0 ? Side::Interior : (x > s.x0 ? Side::Exterior : Side::OnSurface);
    }
    return d;
}

inline DistanceField distance_field(const SphereSurface& s, const RadialGrid& g) {
    if (!(s.radius > g.r_min) || !(s.radius < g.r_max))
        throw ConfigError("distance_field: sphere radius lies outside the radial grid");
    DistanceField d;
    d.xi.resize(g.n);
    d.side.resize(g.n);
    for (int i = 0; i < g.n; ++i) {
        double r = g.node(i);
        d.xi[i] = std::abs(r - s.radius);
        d.side[i] = r < s.radius ? Side::Interior : (r > s.radius ? Side::Exterior : Side::OnSurface);
    }
    return d;
}

inline DistanceField distance_field(const CircleSurface& s, const BoxGrid2D& g) {
    if (s.cx - s.radius <= g.x_min || s.cx + s.radius >= g.x_max ||
        s.cy - s.radius <= g.y_min || s.cy + s.radius >= g.y_max)
        throw ConfigError("distance_field: circle does not fit strictly inside the box");
    DistanceField d;
    d.xi.resize(g.node_count());
    d.side.resize(g.node_count());
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            double dx = g.x(i) - s.cx, dy = g.y(j) - s.cy;
            double r = std::hypot(dx, dy);
            int k = g.index(i, j);
            d.xi[k] = std::abs(r - s.radius);
            d.side[k] = r < s.radius ? Side::Interior
                                     : (r > s.radius ? Side::Exterior : Side::OnSurface);
        }
    }
    return d;
}

// Pointwise coefficients of the homothetic operator built from lambda = a ln f:
//   lambda        = a ln f
//   drift_scalar  = 2 w a f'/f            (multiplies grad(xi) . grad)
//   potential     = w a f''/f + (w^2 a^2 - w a)(f'/f)^2 + w a (f'/f) lap_xi
// where lap_xi is the Laplacian of the distance function at the node (zero in
// 1D, +/- (d-1)/r for spheres and circles). For a = w = 1 and lap_xi = 0 the
// potential reduces to f''/f and the drift to 2 f'/f.
struct LambdaCoefficients {
    double lambda = 0.0;
    double drift_scalar = 0.0;
    double potential = 0.0;
};

inline LambdaCoefficients lambda_coefficients(const CutoffProfile& p, double w, double xi,
                                              double lap_xi = 0.0) {
    ProfileJet j = profile_eval(p, xi);
    if (!(j.f > 0.0))
        throw NumericalError("lambda_coefficients: nonpositive profile value");
    if (xi >= p.eps) return {0.0, 0.0, 0.0};  // outer zone: identically zero
    LambdaCoefficients c;
    const double r = j.df / j.f;
    c.lambda = p.a * std::log(j.f);
    c.drift_scalar = 2.0 * w * p.a * r;
    c.potential = w * p.a * (j.d2f / j.f) + (w * w * p.a * p.a - w * p.a) * r * r
                + w * p.a * r * lap_xi;
    return c;
}

// Per-node samples of the scale field on a grid: lambda, the drift scalar and
// the potential coefficient. xi is clamped below at xi_floor so nodes on (or
// next to) the interface stay finite; the operator is posed off the skeleton.
struct ScaleField {
    Eigen::VectorXd lambda;
    Eigen::VectorXd drift;      // unsigned, multiplies grad(xi) . grad
    Eigen::VectorXd potential;
    double weight = 1.0;
    double xi_floor = 0.0;
};

inline ScaleField build_scale_field(const CutoffProfile& p, double w,
                                    const std::vector<double>& xi,
                                    const std::vector<double>& lap_xi,
                                    double xi_floor) {
    if (xi.size() != lap_xi.size())
        throw ConfigError("build_scale_field: xi / lap_xi size mismatch");
    if (!(xi_floor > 0.0))
        throw ConfigError("build_scale_field: xi_floor must be positive");
    const int n = static_cast<int>(xi.size());
    ScaleField f;
    f.lambda.resize(n);
    f.drift.resize(n);
    f.potential.resize(n);
    f.weight = w;
    f.xi_floor = xi_floor;
    for (int i = 0; i < n; ++i) {
        LambdaCoefficients c = lambda_coefficients(p, w, std::max(xi[i], xi_floor), lap_xi[i]);
        f.lambda[i] = c.lambda;
        f.drift[i] = c.drift_scalar;
        f.potential[i] = c.potential;
    }
    return f;
}

}  // namespace homhodge
