#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <variant>
#include <vector>

#include "homhodge/cutoff_profile.hpp"
#include "homhodge/errors.hpp"
#include "homhodge/grid.hpp"
#include "homhodge/scale_field.hpp"

namespace homhodge {

using SparseMat = Eigen::SparseMatrix<double>;

// Which penalty terms of the homothetic operator
//   L u = Lap u + 2w <grad lambda, grad u> + (w Lap lambda + w^2 |grad lambda|^2) u
// are assembled: Dirichlet keeps only the zeroth-order term, Neumann only the
// drift, Cauchy both, Plain neither (classical Laplace).
enum class Mode { Cauchy, Dirichlet, Neumann, Plain };

inline bool uses_drift(Mode m) { return m == Mode::Cauchy || m == Mode::Neumann; }
inline bool uses_potential(Mode m) { return m == Mode::Cauchy || m == Mode::Dirichlet; }

using Geometry = std::variant<IntervalGrid, RadialGrid, BoxGrid2D>;

// Prescribed center field phi_d. Harmonic builds the exact harmonic extension
// of (g, h); SidedHarmonic allows a different normal derivative per side
// (continuous value g on S); Samples supplies explicit per-node values.
struct CenterField {
    enum class Kind { Zero, Harmonic, SidedHarmonic, Samples };
    Kind kind = Kind::Harmonic;
    double h_interior = 0.0, h_exterior = 0.0;
    Eigen::VectorXd samples;
};

enum class RadialInnerBc { ZeroFlux, Value };

struct PenalizedProblem {
    Geometry geometry;
    Surface surface;
    Mode mode = Mode::Cauchy;
    double g = 0.0;  // Dirichlet datum on S
    double h = 0.0;  // Neumann flux on S (interior -> exterior normal)
    CenterField center;
    double weight = 1.0;
    CutoffProfile profile;
    double xi_floor = -1.0;  // <= 0 picks h/2 automatically

    // Far-field condition; which members apply depends on the geometry.
    std::optional<double> far_left, far_right;       // interval ends
    std::optional<double> far_outer;                 // radial outer boundary
    RadialInnerBc radial_inner = RadialInnerBc::ZeroFlux;
    double radial_inner_value = 0.0;
    std::function<double(double, double)> box_boundary;  // 2D box boundary values
};

// ---------------------------------------------------------------------------
// Harmonic extensions of boundary data
// ---------------------------------------------------------------------------

namespace detail {

// Exact harmonic profile matching value g and normal derivative h at the
// surface, as a function of the signed normal coordinate. Coordinates beyond
// freeze_band from S are clamped so the extension stays finite; the operator
// coefficients vanish there, so frozen values are never used.
inline double harmonic_profile_1d(double g, double h, double s) { return g + h * s; }
inline double harmonic_profile_radial(double g, double h, double radius, double r) {
    return g + h * radius - h * radius * radius / r;
}
inline double harmonic_profile_circle(double g, double h, double radius, double r) {
    return g + h * radius * std::log(r / radius);
}

}  // namespace detail

inline Eigen::VectorXd harmonic_extension(const Surface& surface, double g, double h,
                                          const Geometry& geometry,
                                          double freeze_band = std::numeric_limits<double>::infinity()) {
    return std::visit(
        [&](const auto& grid) -> Eigen::VectorXd {
            using G = std::decay_t<decltype(grid)>;
            if constexpr (std::is_same_v<G, IntervalGrid>) {
                const auto& s = std::get<PointSurface1D>(surface);
                Eigen::VectorXd v(grid.n);
                for (int i = 0; i < grid.n; ++i) {
                    double sc = std::clamp(grid.node(i) - s.x0, -freeze_band, freeze_band);
                    v[i] = detail::harmonic_profile_1d(g, h, sc);
                }
                return v;
            } else if constexpr (std::is_same_v<G, RadialGrid>) {
                const auto& s = std::get<SphereSurface>(surface);
                Eigen::VectorXd v(grid.n);
                for (int i = 0; i < grid.n; ++i) {
                    double r = std::clamp(grid.node(i), s.radius - freeze_band,
                                          s.radius + freeze_band);
                    v[i] = detail::harmonic_profile_radial(g, h, s.radius, r);
                }
                return v;
            } else {
                const auto& s = std::get<CircleSurface>(surface);
                Eigen::VectorXd v(grid.node_count());
                for (int j = 0; j < grid.ny; ++j)
                    for (int i = 0; i < grid.nx; ++i) {
                        double r = std::hypot(grid.x(i) - s.cx, grid.y(j) - s.cy);
                        r = std::clamp(r, s.radius - freeze_band, s.radius + freeze_band);
                        v[grid.index(i, j)] = detail::harmonic_profile_circle(g, h, s.radius, r);
                    }
                return v;
            }
        },
        geometry);
}

// Per-side harmonic extension: value g on S, normal derivative h_interior on
// the interior side and h_exterior on the exterior side.
inline Eigen::VectorXd harmonic_extension_sided(const Surface& surface, double g,
                                                double h_interior, double h_exterior,
                                                const Geometry& geometry,
                                                double freeze_band =
                                                    std::numeric_limits<double>::infinity()) {
    Eigen::VectorXd inside = harmonic_extension(surface, g, h_interior, geometry, freeze_band);
    Eigen::VectorXd outside = harmonic_extension(surface, g, h_exterior, geometry, freeze_band);
    DistanceField dist = std::visit(
        [&](const auto& grid) -> DistanceField {
            using G = std::decay_t<decltype(grid)>;
            if constexpr (std::is_same_v<G, IntervalGrid>)
                return distance_field(std::get<PointSurface1D>(surface), grid);
            else if constexpr (std::is_same_v<G, RadialGrid>)
                return distance_field(std::get<SphereSurface>(surface), grid);
            else
                return distance_field(std::get<CircleSurface>(surface), grid);
        },
        geometry);
    Eigen::VectorXd v(inside.size());
    for (int i = 0; i < v.size(); ++i)
        v[i] = dist.side[i] == Side::Interior ? inside[i] : outside[i];
    return v;
}

// ---------------------------------------------------------------------------
// Assembly
// ---------------------------------------------------------------------------

struct AssembledSystem {
    SparseMat matrix;
    Eigen::VectorXd rhs;
    Eigen::VectorXd phi_d;
    DistanceField distance;
    ScaleField field;
    double grid_h = 0.0;
};

namespace detail {

inline void check_resolution(double grid_h, const CutoffProfile& p, Mode mode) {
    if (mode == Mode::Plain) return;
    if (grid_h > p.eta * p.eps / 4.0 + 1e-15)
        throw ConfigError("penalized solver: unresolved layer, need h <= eta*eps/4 (h=" +
                          std::to_string(grid_h) + ", eta*eps/4=" +
                          std::to_string(p.eta * p.eps / 4.0) + ")");
}

inline void check_neumann_consistency(const PenalizedProblem& prob) {
    if (prob.mode != Mode::Neumann) return;
    double flux_integral = 0.0;
    if (std::holds_alternative<SphereSurface>(prob.surface))
        flux_integral = prob.h * 4.0 * std::numbers::pi *
                        std::get<SphereSurface>(prob.surface).radius *
                        std::get<SphereSurface>(prob.surface).radius;
    else if (std::holds_alternative<CircleSurface>(prob.surface))
        flux_integral = prob.h * 2.0 * std::numbers::pi *
                        std::get<CircleSurface>(prob.surface).radius;
    else
        return;  // a 1D point is not a closed surface; no compatibility constraint
    bool has_interior_pin = std::holds_alternative<RadialGrid>(prob.geometry) &&
                            prob.radial_inner == RadialInnerBc::Value;
    if (!has_interior_pin && std::abs(flux_integral) > 1e-12)
        throw ConfigError("penalized solver: interior Neumann problem requires zero net flux "
                          "through the closed surface (got integral " +
                          std::to_string(flux_integral) + ")");
}

inline Eigen::VectorXd build_phi_d(const PenalizedProblem& prob, int n) {
    const double band = 1.5 * prob.profile.eps;
    switch (prob.center.kind) {
        case CenterField::Kind::Zero:
            return Eigen::VectorXd::Zero(n);
        case CenterField::Kind::Harmonic:
            return harmonic_extension(prob.surface, prob.g, prob.h, prob.geometry, band);
        case CenterField::Kind::SidedHarmonic:
            return harmonic_extension_sided(prob.surface, prob.g, prob.center.h_interior,
                                            prob.center.h_exterior, prob.geometry, band);
        case CenterField::Kind::Samples:
            if (prob.center.samples.size() != n)
                throw ConfigError("penalized solver: phi_d sample count mismatch");
            return prob.center.samples;
    }
    throw ConfigError("penalized solver: invalid center field kind");
}

}  // namespace detail

// Tridiagonal core shared by the interval and radial geometries (and usable
// directly with arbitrary smooth coefficient fields). `advection` holds the
// metric term (2/r for the radial Laplacian), `drift_signed` the penalty
// drift along the normal; boundary rows are the caller's.
struct LineSystem {
    std::vector<double> nodes;
    Eigen::VectorXd advection, drift_signed, potential, phi_d;
};

inline void assemble_line_interior(const LineSystem& line, double grid_h,
                                   std::vector<Eigen::Triplet<double>>& trips,
                                   Eigen::VectorXd& rhs) {
    const int n = static_cast<int>(line.nodes.size());
    Eigen::VectorXd dphid = Eigen::VectorXd::Zero(n);
    for (int i = 1; i < n - 1; ++i)
        dphid[i] = (line.phi_d[i + 1] - line.phi_d[i - 1]) / (2.0 * grid_h);
    const double ih2 = 1.0 / (grid_h * grid_h);
    const double ih = 1.0 / (2.0 * grid_h);
    for (int i = 1; i < n - 1; ++i) {
        const double adv = line.advection[i] + line.drift_signed[i];
        trips.emplace_back(i, i - 1, ih2 - adv * ih);
        trips.emplace_back(i, i, -2.0 * ih2 + line.potential[i]);
        trips.emplace_back(i, i + 1, ih2 + adv * ih);
        rhs[i] = line.drift_signed[i] * dphid[i] + line.potential[i] * line.phi_d[i];
    }
}

inline AssembledSystem assemble_operator(const PenalizedProblem& prob) {
    validate(prob.profile);
    detail::check_neumann_consistency(prob);

    return std::visit(
        [&](const auto& grid) -> AssembledSystem {
            using G = std::decay_t<decltype(grid)>;
            AssembledSystem sys;

            if constexpr (std::is_same_v<G, IntervalGrid> || std::is_same_v<G, RadialGrid>) {
                const int n = grid.n;
                sys.grid_h = grid.h;
                detail::check_resolution(grid.h, prob.profile, prob.mode);
                if constexpr (std::is_same_v<G, IntervalGrid>) {
                    if (!prob.far_left || !prob.far_right)
                        throw ConfigError("penalized solver: interval far-field values missing");
                    sys.distance = distance_field(std::get<PointSurface1D>(prob.surface), grid);
                } else {
                    if (!prob.far_outer)
                        throw ConfigError("penalized solver: radial outer far-field value missing");
                    sys.distance = distance_field(std::get<SphereSurface>(prob.surface), grid);
                }

                const double floor = prob.xi_floor > 0.0 ? prob.xi_floor : grid.h / 2.0;
                std::vector<double> lap_xi(n, 0.0);
                if constexpr (std::is_same_v<G, RadialGrid>)
                    for (int i = 0; i < n; ++i)
                        lap_xi[i] = sys.distance.signed_direction(i) * 2.0 / grid.node(i);
                sys.field = build_scale_field(prob.profile, prob.weight, sys.distance.xi,
                                              lap_xi, floor);

                LineSystem line;
                line.nodes.resize(n);
                for (int i = 0; i < n; ++i) line.nodes[i] = grid.node(i);
                line.advection = Eigen::VectorXd::Zero(n);
                if constexpr (std::is_same_v<G, RadialGrid>)
                    for (int i = 0; i < n; ++i) line.advection[i] = 2.0 / grid.node(i);
                line.drift_signed = Eigen::VectorXd::Zero(n);
                line.potential = Eigen::VectorXd::Zero(n);
                for (int i = 0; i < n; ++i) {
                    if (uses_drift(prob.mode))
                        line.drift_signed[i] =
                            sys.field.drift[i] * sys.distance.signed_direction(i);
                    if (uses_potential(prob.mode)) line.potential[i] = sys.field.potential[i];
                }
                sys.phi_d = detail::build_phi_d(prob, n);
                line.phi_d = sys.phi_d;

                std::vector<Eigen::Triplet<double>> trips;
                trips.reserve(3 * n);
                sys.rhs = Eigen::VectorXd::Zero(n);
                assemble_line_interior(line, grid.h, trips, sys.rhs);
                if constexpr (std::is_same_v<G, IntervalGrid>) {
                    trips.emplace_back(0, 0, 1.0);
                    sys.rhs[0] = *prob.far_left;
                } else {
                    if (prob.radial_inner == RadialInnerBc::ZeroFlux) {
                        // second-order one-sided derivative = 0 (regularity at the axis)
                        trips.emplace_back(0, 0, -3.0);
                        trips.emplace_back(0, 1, 4.0);
                        trips.emplace_back(0, 2, -1.0);
                        sys.rhs[0] = 0.0;
                    } else {
                        trips.emplace_back(0, 0, 1.0);
                        sys.rhs[0] = prob.radial_inner_value;
                    }
                }
                trips.emplace_back(n - 1, n - 1, 1.0);
                sys.rhs[n - 1] = std::is_same_v<G, IntervalGrid> ? *prob.far_right
                                                                 : *prob.far_outer;
                sys.matrix.resize(n, n);
                sys.matrix.setFromTriplets(trips.begin(), trips.end());
                return sys;
            } else {
                // 2D box with an embedded circle: five-point Laplacian plus the
                // penalty terms projected on the radial direction.
                if (!prob.box_boundary)
                    throw ConfigError("penalized solver: 2D box boundary values missing");
                const auto& s = std::get<CircleSurface>(prob.surface);
                const int n = grid.node_count();
                sys.grid_h = std::max(grid.hx, grid.hy);
                detail::check_resolution(sys.grid_h, prob.profile, prob.mode);
                sys.distance = distance_field(s, grid);
                const double floor = prob.xi_floor > 0.0 ? prob.xi_floor : sys.grid_h / 2.0;
                std::vector<double> lap_xi(n, 0.0);
                for (int j = 0; j < grid.ny; ++j)
                    for (int i = 0; i < grid.nx; ++i) {
                        int k = grid.index(i, j);
                        double r = std::hypot(grid.x(i) - s.cx, grid.y(j) - s.cy);
                        lap_xi[k] = r > 0.0 ? sys.distance.signed_direction(k) / r : 0.0;
                    }
                sys.field = build_scale_field(prob.profile, prob.weight, sys.distance.xi,
                                              lap_xi, floor);
                sys.phi_d = detail::build_phi_d(prob, n);

                std::vector<Eigen::Triplet<double>> trips;
                trips.reserve(5 * n);
                sys.rhs = Eigen::VectorXd::Zero(n);
                const double ihx2 = 1.0 / (grid.hx * grid.hx);
                const double ihy2 = 1.0 / (grid.hy * grid.hy);
                for (int j = 0; j < grid.ny; ++j)
                    for (int i = 0; i < grid.nx; ++i) {
                        const int k = grid.index(i, j);
                        if (grid.on_boundary(i, j)) {
                            trips.emplace_back(k, k, 1.0);
                            sys.rhs[k] = prob.box_boundary(grid.x(i), grid.y(j));
                            continue;
                        }
                        double cx = 0.0, cy = 0.0;
                        if (uses_drift(prob.mode)) {
                            double dx = grid.x(i) - s.cx, dy = grid.y(j) - s.cy;
                            double r = std::hypot(dx, dy);
                            double ux = r > 0.0 ? dx / r : 0.0;
                            double uy = r > 0.0 ? dy / r : 0.0;
                            double d = sys.field.drift[k] * sys.distance.signed_direction(k);
                            cx = d * ux;
                            cy = d * uy;
                        }
                        const double pot = uses_potential(prob.mode) ? sys.field.potential[k] : 0.0;
                        trips.emplace_back(k, grid.index(i - 1, j), ihx2 - cx / (2.0 * grid.hx));
                        trips.emplace_back(k, grid.index(i + 1, j), ihx2 + cx / (2.0 * grid.hx));
                        trips.emplace_back(k, grid.index(i, j - 1), ihy2 - cy / (2.0 * grid.hy));
                        trips.emplace_back(k, grid.index(i, j + 1), ihy2 + cy / (2.0 * grid.hy));
                        trips.emplace_back(k, k, -2.0 * ihx2 - 2.0 * ihy2 + pot);
                        double dpdx = (sys.phi_d[grid.index(i + 1, j)] -
                                       sys.phi_d[grid.index(i - 1, j)]) / (2.0 * grid.hx);
                        double dpdy = (sys.phi_d[grid.index(i, j + 1)] -
                                       sys.phi_d[grid.index(i, j - 1)]) / (2.0 * grid.hy);
                        sys.rhs[k] = cx * dpdx + cy * dpdy + pot * sys.phi_d[k];
                    }
                sys.matrix.resize(n, n);
                sys.matrix.setFromTriplets(trips.begin(), trips.end());
                return sys;
            }
        },
        prob.geometry);
}

// ---------------------------------------------------------------------------
// Traces and solve
// ---------------------------------------------------------------------------

struct SideTrace {
    double value = std::numeric_limits<double>::quiet_NaN();
    double normal_derivative = std::numeric_limits<double>::quiet_NaN();
};

struct TraceSet {
    SideTrace interior, exterior;
    bool valid = false;
    double value_jump() const { return exterior.value - interior.value; }
    double flux_jump() const { return exterior.normal_derivative - interior.normal_derivative; }
};

namespace detail {

// Quadratic fit through three samples, evaluated (value and derivative) at
// the surface coordinate s0. Works in the shifted coordinate t = s - s0.
inline SideTrace quadratic_trace(const std::array<double, 3>& s, const std::array<double, 3>& y,
                                 double s0) {
    Eigen::Matrix3d v;
    Eigen::Vector3d b;
    for (int k = 0; k < 3; ++k) {
        double t = s[k] - s0;
        v(k, 0) = 1.0;
        v(k, 1) = t;
        v(k, 2) = t * t;
        b[k] = y[k];
    }
    Eigen::Vector3d c = v.fullPivLu().solve(b);
    return {c[0], c[1]};
}

// One-dimensional trace extraction along a sampled line: one-sided quadratic
// extrapolation to s0 from the three nearest samples with distance > eps on
// each side (the penalty layer itself is never sampled).
inline TraceSet line_traces(const std::vector<double>& coord, const Eigen::VectorXd& values,
                            double s0, double eps) {
    TraceSet t;
    std::vector<int> left, right;
    for (int i = 0; i < static_cast<int>(coord.size()); ++i) {
        if (coord[i] < s0 - eps) left.push_back(i);
        if (coord[i] > s0 + eps) right.push_back(i);
    }
    if (left.size() < 3 || right.size() < 3) return t;  // not extractable
    std::array<double, 3> si, yi, so, yo;
    for (int k = 0; k < 3; ++k) {
        int il = left[left.size() - 3 + k];
        si[k] = coord[il];
        yi[k] = values[il];
        int ir = right[k];
        so[k] = coord[ir];
        yo[k] = values[ir];
    }
    t.interior = quadratic_trace(si, yi, s0);
    t.exterior = quadratic_trace(so, yo, s0);
    t.valid = true;
    return t;
}

}  // namespace detail

struct SolveResult {
    Eigen::VectorXd phi;
    Eigen::VectorXd phi_d;
    double residual_rel = 0.0;
    TraceSet traces;
    double grid_h = 0.0;
    double eps = 0.0;
    int unknowns = 0;
};

inline TraceSet extract_traces(const PenalizedProblem& prob, const Eigen::VectorXd& phi) {
    return std::visit(
        [&](const auto& grid) -> TraceSet {
            using G = std::decay_t<decltype(grid)>;
            if constexpr (std::is_same_v<G, IntervalGrid>) {
                const auto& s = std::get<PointSurface1D>(prob.surface);
                std::vector<double> coord(grid.n);
                for (int i = 0; i < grid.n; ++i) coord[i] = grid.node(i);
                return detail::line_traces(coord, phi, s.x0, prob.profile.eps);
            } else if constexpr (std::is_same_v<G, RadialGrid>) {
                const auto& s = std::get<SphereSurface>(prob.surface);
                std::vector<double> coord(grid.n);
                for (int i = 0; i < grid.n; ++i) coord[i] = grid.node(i);
                return detail::line_traces(coord, phi, s.radius, prob.profile.eps);
            } else {
                // Sample along the +x ray through the circle center, on the
                // grid row nearest the center line.
                const auto& s = std::get<CircleSurface>(prob.surface);
                int j = static_cast<int>(std::lround((s.cy - grid.y_min) / grid.hy));
                j = std::clamp(j, 0, grid.ny - 1);
                std::vector<double> coord;
                Eigen::VectorXd vals(grid.nx);
                int count = 0;
                for (int i = 0; i < grid.nx; ++i) {
                    if (grid.x(i) <= s.cx) continue;  // stay on the +x ray
                    coord.push_back(grid.x(i) - s.cx);
                    vals[count++] = phi[grid.index(i, j)];
                }
                return detail::line_traces(coord, vals.head(count), s.radius, prob.profile.eps);
            }
        },
        prob.geometry);
}

inline SolveResult solve(const PenalizedProblem& prob) {
    AssembledSystem sys = assemble_operator(prob);
    Eigen::SparseLU<SparseMat> lu;
    lu.analyzePattern(sys.matrix);
    lu.factorize(sys.matrix);
    if (lu.info() != Eigen::Success)
        throw NumericalError("penalized solver: sparse factorization failed "
                             "(singular system; check far-field/gauge pinning)");
    SolveResult res;
    res.phi = lu.solve(sys.rhs);
    res.phi_d = sys.phi_d;
    res.grid_h = sys.grid_h;
    res.eps = prob.profile.eps;
    res.unknowns = static_cast<int>(sys.rhs.size());
    const double scale = std::max(sys.rhs.norm(), 1e-300);
    res.residual_rel = (sys.matrix * res.phi - sys.rhs).norm() / scale;
    if (!(res.residual_rel < 1e-8))
        throw NumericalError("penalized solver: linear residual too large (" +
                             std::to_string(res.residual_rel) + ")");
    res.traces = extract_traces(prob, res.phi);
    return res;
}

}  // namespace homhodge
