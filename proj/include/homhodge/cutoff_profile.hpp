#pragma once

#include <cmath>
#include <utility>

#include "homhodge/errors.hpp"

namespace homhodge {

enum class BlendKind {
    SmoothBump,  // C^inf step built from e^{-1/t}
    Quintic,     // C^2 polynomial step (two derivatives suffice for the operator)
};

// Cutoff profile f with the three-zone structure
//   f(xi) = xi            for 0 < xi <= eta*eps   (inner)
//   f(xi) = 1             for xi >= eps           (outer)
//   monotone smooth blend in between,
// and the scale field lambda = a * ln f built on top of it.
struct CutoffProfile {
    double a = 1.0;              // penalty-strength exponent
    double eps = 0.1;            // layer width
    double eta = 0.5;            // inner-zone fraction of the layer
    BlendKind blend = BlendKind::SmoothBump;
};

inline void validate(const CutoffProfile& p) {
    if (!(p.eps > 0.0) || !(p.eps <= 1.0))
        throw ConfigError("cutoff profile: require 0 < eps <= 1 so f maps into (0,1]");
    if (!(p.eta > 0.0) || !(p.eta < 1.0))
        throw ConfigError("cutoff profile: require eta in (0,1)");
    if (!std::isfinite(p.a))
        throw ConfigError("cutoff profile: a must be finite");
}

struct ProfileJet {
    double f = 1.0;
    double df = 0.0;
    double d2f = 0.0;
};

namespace detail {

// Monotone step B on [0,1] with B(0)=0, B(1)=1; returns (B, B', B'').
// The smooth-bump variant has all derivatives vanishing at both ends.
inline void blend_step(BlendKind kind, double t, double& b, double& db, double& d2b) {
    if (t <= 0.0) { b = 0.0; db = 0.0; d2b = 0.0; return; }
    if (t >= 1.0) { b = 1.0; db = 0.0; d2b = 0.0; return; }
    if (kind == BlendKind::Quintic) {
        b = t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
        db = t * t * (30.0 + t * (-60.0 + 30.0 * t));
        d2b = t * (60.0 + t * (-180.0 + 120.0 * t));
        return;
    }
    // B = 1/(1 + e^{g}) with g = 1/t - 1/(1-t); derivatives via B' = -g' B(1-B).
    const double g = 1.0 / t - 1.0 / (1.0 - t);
    if (g > 500.0) { b = 0.0; db = 0.0; d2b = 0.0; return; }
    if (g < -500.0) { b = 1.0; db = 0.0; d2b = 0.0; return; }
    const double gp = -1.0 / (t * t) - 1.0 / ((1.0 - t) * (1.0 - t));
    const double gpp = 2.0 / (t * t * t) - 2.0 / ((1.0 - t) * (1.0 - t) * (1.0 - t));
    b = 1.0 / (1.0 + std::exp(g));
    const double q = b * (1.0 - b);
    db = -gp * q;
    d2b = -gpp * q + gp * gp * q * (1.0 - 2.0 * b);
}

}  // namespace detail

// f and its first two derivatives at distance xi >= 0.
inline ProfileJet profile_eval(const CutoffProfile& p, double xi) {
    validate(p);
    if (!(xi >= 0.0))
        throw ConfigError("profile_eval: xi must be nonnegative");
    const double lo = p.eta * p.eps;
    if (xi <= lo) return {xi, 1.0, 0.0};
    if (xi >= p.eps) return {1.0, 0.0, 0.0};
    // Blend between the line xi and the constant 1: f = xi + B(t) (1 - xi).
    const double d = p.eps - lo;
    const double t = (xi - lo) / d;
    double b, db, d2b;
    detail::blend_step(p.blend, t, b, db, d2b);
    ProfileJet j;
    j.f = xi + b * (1.0 - xi);
    j.df = 1.0 - b + db * (1.0 - xi) / d;
    j.d2f = -2.0 * db / d + d2b * (1.0 - xi) / (d * d);
    return j;
}

// Roots of the indicial equation m(m-1) + 2am + (a^2 - a) = 0 governing the
// inner Euler-Cauchy zone: m1 = -a, m2 = 1 - a.
inline std::pair<double, double> indicial_roots(double a) {
    return {-a, 1.0 - a};
}

namespace detail {

// Count of consecutive derivatives of x^m (starting at the 0th) that vanish
// at x = 0; -1 when the branch itself does not vanish (or blows up).
inline int vanishing_order(double m) {
    if (!(m > 0.0)) return -1;
    return static_cast<int>(std::ceil(m)) - 1;
}

}  // namespace detail

// Vanishing orders of the two local branches x^{-a} and x^{1-a}.
inline std::pair<int, int> branch_vanishing_orders(double a) {
    auto [m1, m2] = indicial_roots(a);
    return {detail::vanishing_order(m1), detail::vanishing_order(m2)};
}

}  // namespace homhodge
