#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>

#include "homhodge/experiments.hpp"
#include "homhodge/jump_diagnostics.hpp"

using namespace homhodge;
using Eigen::VectorXd;

namespace {

// Compactly supported bump centered at xc with half-width w.
struct Bump {
    double xc, w;
    double value(double x) const {
        double t = (x - xc) / w;
        if (std::abs(t) >= 1.0) return 0.0;
        return std::exp(-1.0 / (1.0 - t * t));
    }
    double derivative(double x) const {
        double t = (x - xc) / w;
        if (std::abs(t) >= 1.0) return 0.0;
        double q = 1.0 - t * t;
        return value(x) * (-2.0 * t / (q * q)) / w;
    }
};

// Glued field: smooth linear background plus a value jump v and slope jump s
// across x = 0.
VectorXd glued_field(const IntervalGrid& g, double v, double s) {
    VectorXd phi(g.n);
    for (int i = 0; i < g.n; ++i) {
        double x = g.node(i);
        phi[i] = 0.3 + 0.1 * x + (x > 0.0 ? v + s * x : 0.0);
    }
    return phi;
}

}  // namespace

TEST_CASE("layer classification from jumps") {
    TraceSet t;
    t.valid = true;
    t.interior = {0.7, 0.7};
    t.exterior = {0.7, 0.3};
    REQUIRE(jump_diagnostics(t, 1e-6).classification == LayerClass::SingleLayer);
    t.exterior = {0.2, 0.7};
    REQUIRE(jump_diagnostics(t, 1e-6).classification == LayerClass::DoubleLayer);
    t.exterior = {0.2, 0.3};
    REQUIRE(jump_diagnostics(t, 1e-6).classification == LayerClass::CombinedLayer);
    t.exterior = t.interior;
    REQUIRE(jump_diagnostics(t, 1e-6).classification == LayerClass::RemovableInterface);
    t.valid = false;
    REQUIRE_THROWS_AS(jump_diagnostics(t, 1e-6), NumericalError);
}

TEST_CASE("a smooth harmonic field satisfies the identity with both sides near zero") {
    IntervalGrid g = build_interval_grid(-1.0, 1.0, 401);
    VectorXd phi(g.n);
    for (int i = 0; i < g.n; ++i) phi[i] = 0.4 - 0.2 * g.node(i);
    Bump psi{0.1, 0.5};
    double res = distributional_identity_check(
        g, phi, 0.0, [&](double x) { return psi.value(x); }, psi.value(0.0),
        psi.derivative(0.0), 0.0, 0.0);
    REQUIRE(res < 1e-12);
}

TEST_CASE("slope jump at a grid node telescopes exactly") {
    IntervalGrid g = build_interval_grid(-1.0, 1.0, 201);  // node 100 sits at 0
    const double s = 0.5;
    VectorXd phi = glued_field(g, 0.0, s);
    Bump psi{0.0, 0.8};
    double res = distributional_identity_check(
        g, phi, 0.0, [&](double x) { return psi.value(x); }, psi.value(0.0),
        psi.derivative(0.0), 0.0, s);
    REQUIRE(res < 1e-13);
}

TEST_CASE("identity residual is at least first order in h for off-node interfaces") {
    Bump psi{0.2, 0.5};  // psi(0) and psi'(0) both nonzero
    auto residual = [&](int n, double v, double s) {
        IntervalGrid g = build_interval_grid(-1.0, 1.0, n);  // even n: no node at 0
        VectorXd phi = glued_field(g, v, s);
        return distributional_identity_check(
            g, phi, 0.0, [&](double x) { return psi.value(x); }, psi.value(0.0),
            psi.derivative(0.0), v, s);
    };
    for (auto [v, s] : {std::pair{0.0, 0.5}, {0.7, 0.0}}) {
        std::vector<double> hs, errs;
        for (int n : {200, 400, 800, 1600, 3200}) {
            hs.push_back(2.0 / (n - 1));
            errs.push_back(residual(n, v, s));
        }
        OrderFit fit = fit_loglog(hs, errs);
        REQUIRE(fit.slope >= 1.0);
    }
}
