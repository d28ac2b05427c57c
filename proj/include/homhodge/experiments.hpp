#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "homhodge/errors.hpp"
#include "homhodge/grid.hpp"
#include "homhodge/jump_diagnostics.hpp"
#include "homhodge/penalized_solver.hpp"

namespace homhodge {

// ---------------------------------------------------------------------------
// Energies
// ---------------------------------------------------------------------------

struct EnergyOptions {
    // Omit the band |coord - exclude_center| < exclude_halfwidth (the penalty
    // layer is scheme-dependent and is reported separately).
    double exclude_center = std::numeric_limits<double>::quiet_NaN();
    double exclude_halfwidth = 0.0;
};

namespace detail {

template <typename GridT>
inline double energy_from_gradient(const GridT& grid, const Eigen::VectorXd& dphi,
                                   const EnergyOptions& opt, bool keep_band) {
    double e = 0.0;
    auto weight = [&](double r) {
        if constexpr (std::is_same_v<GridT, RadialGrid>)
            return 4.0 * std::numbers::pi * r * r;
        else
            return 1.0;
    };
    auto in_band = [&](double c) {
        return std::isfinite(opt.exclude_center) &&
               std::abs(c - opt.exclude_center) < opt.exclude_halfwidth;
    };
    for (int i = 0; i + 1 < grid.n; ++i) {
        double c0 = grid.node(i), c1 = grid.node(i + 1);
        double f0 = 0.5 * weight(c0) * dphi[i] * dphi[i];
        double f1 = 0.5 * weight(c1) * dphi[i + 1] * dphi[i + 1];
        bool banded = in_band(0.5 * (c0 + c1));
        if (banded != keep_band) continue;
        e += 0.5 * (f0 + f1) * grid.h;
    }
    return e;
}

template <typename GridT>
inline Eigen::VectorXd discrete_gradient(const GridT& grid, const Eigen::VectorXd& phi) {
    Eigen::VectorXd d(grid.n);
    for (int i = 1; i < grid.n - 1; ++i) d[i] = (phi[i + 1] - phi[i - 1]) / (2.0 * grid.h);
    d[0] = (phi[1] - phi[0]) / grid.h;
    d[grid.n - 1] = (phi[grid.n - 1] - phi[grid.n - 2]) / grid.h;
    return d;
}

}  // namespace detail

// Trapezoid-rule field energy E = (1/2) int |grad phi|^2 dV of sampled data;
// radial grids carry the 4 pi r^2 volume factor.
template <typename GridT>
inline double field_energy(const GridT& grid, const Eigen::VectorXd& phi,
                           const EnergyOptions& opt = {}) {
    if (phi.size() != grid.n) throw ConfigError("field_energy: sample count mismatch");
    return detail::energy_from_gradient(grid, detail::discrete_gradient(grid, phi), opt, false);
}

// Same quadrature with a caller-supplied gradient (analytic fields).
template <typename GridT>
inline double field_energy_from_gradient(const GridT& grid, const Eigen::VectorXd& dphi,
                                         const EnergyOptions& opt = {}) {
    if (dphi.size() != grid.n) throw ConfigError("field_energy: sample count mismatch");
    return detail::energy_from_gradient(grid, dphi, opt, false);
}

// Energy of the excluded band alone.
template <typename GridT>
inline double field_energy_band(const GridT& grid, const Eigen::VectorXd& phi,
                                const EnergyOptions& opt) {
    return detail::energy_from_gradient(grid, detail::discrete_gradient(grid, phi), opt, true);
}

// Classical point-charge control: phi = C/r sampled on [h, span]; the
// discrete energy grows like 2 pi C^2 / h, diverging as h -> 0.
inline double unregularized_point_energy(double charge, double h, double span, int n) {
    RadialGrid g = build_radial_grid(h, span, n);
    Eigen::VectorXd phi(g.n);
    for (int i = 0; i < g.n; ++i) phi[i] = charge / g.node(i);
    return field_energy(g, phi);
}

// ---------------------------------------------------------------------------
// Log-log order fits
// ---------------------------------------------------------------------------

struct OrderFit {
    double slope = 0.0;
    double intercept = 0.0;
    double ci95 = 0.0;  // half-width of the 95% interval on the slope
    int points = 0;
};

namespace detail {

inline double student_t_975(int dof) {
    static constexpr double table[] = {12.706, 4.303, 3.182, 2.776, 2.571,
                                       2.447,  2.365, 2.306, 2.262, 2.228};
    if (dof <= 0) return 0.0;
    if (dof <= 10) return table[dof - 1];
    if (dof <= 20) return 2.09;
    return 1.98;
}

}  // namespace detail

inline OrderFit fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys) {
    const int n = static_cast<int>(xs.size());
    if (n < 2 || ys.size() != xs.size())
        throw ConfigError("fit_loglog: need at least two matching samples");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::vector<double> lx(n), ly(n);
    for (int i = 0; i < n; ++i) {
        if (!(xs[i] > 0.0) || !(ys[i] > 0.0))
            throw ConfigError("fit_loglog: samples must be positive");
        lx[i] = std::log(xs[i]);
        ly[i] = std::log(ys[i]);
        sx += lx[i]; sy += ly[i]; sxx += lx[i] * lx[i]; sxy += lx[i] * ly[i];
    }
    const double det = n * sxx - sx * sx;
    if (std::abs(det) < 1e-30) throw ConfigError("fit_loglog: degenerate abscissae");
    OrderFit f;
    f.points = n;
    f.slope = (n * sxy - sx * sy) / det;
    f.intercept = (sy - f.slope * sx) / n;
    if (n > 2) {
        double ssr = 0.0, sxx_c = sxx - sx * sx / n;
        for (int i = 0; i < n; ++i) {
            double r = ly[i] - (f.intercept + f.slope * lx[i]);
            ssr += r * r;
        }
        double se = std::sqrt(ssr / (n - 2) / std::max(sxx_c, 1e-300));
        f.ci95 = detail::student_t_975(n - 2) * se;
    }
    return f;
}

// ---------------------------------------------------------------------------
// Penalization convergence studies
// ---------------------------------------------------------------------------

struct ConvergenceFamily {
    Mode mode = Mode::Dirichlet;
    enum class Geo { Interval, Radial } geo = Geo::Interval;

    // interval geometry
    double x_min = -1.0, x_max = 1.0, x0 = 0.0;
    double far_left = 0.0, far_right = 1.0;
    double g = 0.7, h = 0.0;

    // radial geometry (consistent-Cauchy family around phi = C/r)
    double r_min = 0.1, r_max = 1.6, radius = 0.5, charge = 1.0;

    CutoffProfile profile{0.5, 0.08, 0.5, BlendKind::SmoothBump};
    double eps0 = 0.08;
    int levels = 5;
    double nodes_per_inner_zone = 8.0;  // grid h = eta * eps / this
    double weight = 1.0;
};

struct ConvergenceRow {
    double eps = 0.0, h = 0.0;
    double trace_error = 0.0;  // mode-specific enforcement error
    double value_jump = 0.0, flux_jump = 0.0;
    double residual = 0.0;
    int unknowns = 0;
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;  // ordered by decreasing eps
    OrderFit order;                    // trace_error vs eps
};

// Piecewise-harmonic limit jumps for the interval families, from the exact
// one-sided boundary value problems (independent of the solver path).
inline double dirichlet_flux_jump_limit(const ConvergenceFamily& f) {
    const double slope_in = (f.g - f.far_left) / (f.x0 - f.x_min);
    const double slope_out = (f.far_right - f.g) / (f.x_max - f.x0);
    return slope_out - slope_in;
}
inline double neumann_value_jump_limit(const ConvergenceFamily& f) {
    const double gamma_in = f.far_left + f.h * (f.x0 - f.x_min);
    const double gamma_out = f.far_right - f.h * (f.x_max - f.x0);
    return gamma_out - gamma_in;
}

inline PenalizedProblem make_family_problem(const ConvergenceFamily& f, double eps) {
    PenalizedProblem prob;
    prob.mode = f.mode;
    prob.weight = f.weight;
    prob.profile = f.profile;
    prob.profile.eps = eps;
    const double grid_h = f.profile.eta * eps / f.nodes_per_inner_zone;
    if (f.geo == ConvergenceFamily::Geo::Interval) {
        int n = static_cast<int>(std::ceil((f.x_max - f.x_min) / grid_h)) + 1;
        prob.geometry = build_interval_grid(f.x_min, f.x_max, n);
        prob.surface = PointSurface1D{f.x0};
        prob.g = f.g;
        prob.h = f.h;
        prob.far_left = f.far_left;
        prob.far_right = f.far_right;
        prob.center.kind = CenterField::Kind::Harmonic;
    } else {
        int n = static_cast<int>(std::ceil((f.r_max - f.r_min) / grid_h)) + 1;
        prob.geometry = build_radial_grid(f.r_min, f.r_max, n);
        prob.surface = SphereSurface{f.radius};
        prob.g = f.charge / f.radius;
        prob.h = -f.charge / (f.radius * f.radius);
        prob.radial_inner = RadialInnerBc::Value;
        prob.radial_inner_value = f.charge / f.r_min;
        prob.far_outer = f.charge / f.r_max;
        prob.center.kind = CenterField::Kind::Harmonic;
    }
    return prob;
}

inline ConvergenceTable penalization_convergence(const ConvergenceFamily& family) {
    if (family.levels < 1) throw ConfigError("penalization_convergence: need levels >= 1");
    ConvergenceTable table;
    std::vector<double> epss, errs;
    for (int level = 0; level < family.levels; ++level) {
        const double eps = family.eps0 * std::pow(0.5, level);
        PenalizedProblem prob = make_family_problem(family, eps);
        SolveResult res = solve(prob);
        if (!res.traces.valid)
            throw NumericalError("penalization_convergence: traces not extractable");
        ConvergenceRow row;
        row.eps = eps;
        row.h = res.grid_h;
        row.value_jump = res.traces.value_jump();
        row.flux_jump = res.traces.flux_jump();
        row.residual = res.residual_rel;
        row.unknowns = res.unknowns;
        switch (family.mode) {
            case Mode::Dirichlet:
                row.trace_error = std::max(std::abs(res.traces.interior.value - prob.g),
                                           std::abs(res.traces.exterior.value - prob.g));
                break;
            case Mode::Neumann:
                row.trace_error =
                    std::max(std::abs(res.traces.interior.normal_derivative - prob.h),
                             std::abs(res.traces.exterior.normal_derivative - prob.h));
                break;
            default:
                row.trace_error = std::max(std::abs(row.value_jump), std::abs(row.flux_jump));
        }
        table.rows.push_back(row);
        epss.push_back(eps);
        errs.push_back(std::max(row.trace_error, 1e-300));
    }
    if (family.levels >= 2) table.order = fit_loglog(epss, errs);
    return table;
}

// ---------------------------------------------------------------------------
// Hollow-sphere point source
// ---------------------------------------------------------------------------

struct PointSourceSpec {
    double charge = 1.0;
    double radius = 0.5;
    double r_min = 0.02;
    double r_max = 50.0;
    int n = 20000;
    CutoffProfile profile{1.0, 0.021, 0.5, BlendKind::SmoothBump};
    double weight = 1.0;
    enum class PhidVariant { ConstantOnly, HarmonicExtension } variant = PhidVariant::HarmonicExtension;
    double tail_budget = 0.005;  // allowed residual truncation error fraction
};

struct PointSourceResult {
    SolveResult solve;
    double sup_error_outside = 0.0;   // vs {C/R inside, C/r outside}, off the layer
    double interior_flatness = 0.0;   // max |phi - C/R| for r < R - eps
    double energy_bulk = 0.0;         // layer excluded
    double energy_layer = 0.0;        // reported separately
    double energy_tail = 0.0;         // analytic 2 pi C^2 / r_max correction
    double energy_total = 0.0;        // bulk + layer + tail
    double energy_target = 0.0;       // 2 pi C^2 / R
    double energy_rel_error = 0.0;
    double far_field_deviation = 0.0;  // max |phi - C/r| * r / C over [2R, r_max/2]
};

inline PointSourceResult point_source_run(const PointSourceSpec& spec) {
    if (!(spec.radius > 0.0) || !(spec.radius < spec.r_max) || !std::isfinite(spec.charge))
        throw ConfigError("point source: require 0 < R < r_max and finite C");
    PenalizedProblem prob;
    prob.geometry = build_radial_grid(spec.r_min, spec.r_max, spec.n);
    prob.surface = SphereSurface{spec.radius};
    prob.mode = Mode::Dirichlet;
    prob.weight = spec.weight;
    prob.profile = spec.profile;
    prob.g = spec.charge / spec.radius;
    prob.h = 0.0;
    if (spec.variant == PointSourceSpec::PhidVariant::ConstantOnly) {
        prob.center.kind = CenterField::Kind::Harmonic;  // h = 0: constant C/R
    } else {
        prob.center.kind = CenterField::Kind::SidedHarmonic;
        prob.center.h_interior = 0.0;  // constant C/R inside
        prob.center.h_exterior = -spec.charge / (spec.radius * spec.radius);  // C/r outside
    }
    prob.far_outer = spec.charge / spec.r_max;
    prob.radial_inner = RadialInnerBc::ZeroFlux;

    PointSourceResult out;
    out.solve = solve(prob);
    const RadialGrid& grid = std::get<RadialGrid>(prob.geometry);
    const double eps = spec.profile.eps;
    const double c_over_r0 = spec.charge / spec.radius;

    for (int i = 0; i < grid.n; ++i) {
        const double r = grid.node(i);
        if (std::abs(r - spec.radius) <= eps) continue;
        const double exact = r <= spec.radius ? c_over_r0 : spec.charge / r;
        out.sup_error_outside = std::max(out.sup_error_outside,
                                         std::abs(out.solve.phi[i] - exact));
        if (r < spec.radius - eps)
            out.interior_flatness =
                std::max(out.interior_flatness, std::abs(out.solve.phi[i] - c_over_r0));
        if (r >= 2.0 * spec.radius && r <= spec.r_max / 2.0)
            out.far_field_deviation =
                std::max(out.far_field_deviation,
                         std::abs(out.solve.phi[i] - spec.charge / r) * r /
                             std::max(std::abs(spec.charge), 1e-300));
    }

    EnergyOptions opt;
    opt.exclude_center = spec.radius;
    opt.exclude_halfwidth = eps;
    out.energy_bulk = field_energy(grid, out.solve.phi, opt);
    out.energy_layer = field_energy_band(grid, out.solve.phi, opt);
    out.energy_tail = 2.0 * std::numbers::pi * spec.charge * spec.charge / spec.r_max;
    out.energy_total = out.energy_bulk + out.energy_layer + out.energy_tail;
    out.energy_target = 2.0 * std::numbers::pi * spec.charge * spec.charge / spec.radius;
    out.energy_rel_error =
        (out.energy_total - out.energy_target) / std::max(out.energy_target, 1e-300);

    // Truncation guard: the analytic tail correction is only trustworthy if
    // the solved field already matches the Coulomb slope near r_max.
    int probe = std::min(grid.n - 2, static_cast<int>(0.9 * (grid.n - 1)));
    double slope = (out.solve.phi[probe + 1] - out.solve.phi[probe - 1]) / (2.0 * grid.h);
    double rp = grid.node(probe);
    double coulomb = -spec.charge / (rp * rp);
    double mismatch = std::abs(slope - coulomb) / std::max(std::abs(coulomb), 1e-300);
    if (2.0 * mismatch * out.energy_tail > spec.tail_budget * out.energy_target)
        throw ConfigError("point source: truncation radius too small for a reliable "
                          "tail correction");
    return out;
}

// ---------------------------------------------------------------------------
// Indicial branch measurement
// ---------------------------------------------------------------------------

struct BranchFitSpec {
    double a = -1.0;
    double x_max = 1.0;
    int n = 20000;  // staggered cells; first node at h/2, none at the origin
    double eps = 0.5;
    double eta = 0.5;
    double weight = 1.0;
    BlendKind blend = BlendKind::SmoothBump;
};

struct BranchFitResult {
    double slope = 0.0;
    double slope_halved_window = 0.0;
    double root_m1 = 0.0, root_m2 = 0.0;  // -a and 1-a
    double matched_root = 0.0;
    double rel_error = 0.0;  // |slope - matched| / |matched|
};

// Solve the full 1D homothetic equation with the interface at the origin,
// u = 0 at the first node and u = 1 at x_max, then fit log|u| against log x
// over the inner Euler-Cauchy window [2h, eta*eps/2].
inline BranchFitResult branch_exponent_measure(const BranchFitSpec& spec) {
    if (spec.n < 16) throw ConfigError("branch_exponent_measure: grid too coarse");
    CutoffProfile prof{spec.a, spec.eps, spec.eta, spec.blend};
    validate(prof);
    const int n = spec.n;
    const double h = spec.x_max / n;
    if (h > prof.eta * prof.eps / 4.0)
        throw ConfigError("branch_exponent_measure: unresolved inner zone");
    std::vector<Eigen::Triplet<double>> trips;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    const double ih2 = 1.0 / (h * h), ih = 1.0 / (2.0 * h);
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = (i + 0.5) * h;
    for (int i = 1; i < n - 1; ++i) {
        LambdaCoefficients c = lambda_coefficients(prof, spec.weight, x[i]);
        trips.emplace_back(i, i - 1, ih2 - c.drift_scalar * ih);
        trips.emplace_back(i, i, -2.0 * ih2 + c.potential);
        trips.emplace_back(i, i + 1, ih2 + c.drift_scalar * ih);
    }
    trips.emplace_back(0, 0, 1.0);
    rhs[0] = 0.0;
    trips.emplace_back(n - 1, n - 1, 1.0);
    rhs[n - 1] = 1.0;
    SparseMat mat(n, n);
    mat.setFromTriplets(trips.begin(), trips.end());
    Eigen::SparseLU<SparseMat> lu(mat);
    if (lu.info() != Eigen::Success)
        throw NumericalError("branch_exponent_measure: factorization failed");
    Eigen::VectorXd u = lu.solve(rhs);

    auto fit_window = [&](double lo, double hi) {
        std::vector<double> xs, ys;
        for (int i = 0; i < n; ++i)
            if (x[i] >= lo && x[i] <= hi && std::abs(u[i]) > 1e-280) {
                xs.push_back(x[i]);
                ys.push_back(std::abs(u[i]));
            }
        if (xs.size() < 4)
            throw NumericalError("branch_exponent_measure: fit window too small");
        return fit_loglog(xs, ys).slope;
    };
    BranchFitResult res;
    const double top = prof.eta * prof.eps / 2.0;
    res.slope = fit_window(2.0 * h, top);
    res.slope_halved_window = fit_window(4.0 * h, top / 2.0);
    auto [m1, m2] = indicial_roots(spec.a);
    res.root_m1 = m1;
    res.root_m2 = m2;
    res.matched_root = std::abs(res.slope - m1) <= std::abs(res.slope - m2) ? m1 : m2;
    res.rel_error = std::abs(res.slope - res.matched_root) /
                    std::max(std::abs(res.matched_root), 1e-300);
    return res;
}

}  // namespace homhodge
