#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <string>

#include "homhodge/grid.hpp"
#include "homhodge/penalized_solver.hpp"

namespace homhodge {

// Layer-potential classification of an interface from its measured jumps:
// a value jump acts as a double layer, a normal-derivative jump as a single
// layer; with neither the interface is removable.
enum class LayerClass { RemovableInterface, SingleLayer, DoubleLayer, CombinedLayer };

inline const char* to_string(LayerClass c) {
    switch (c) {
        case LayerClass::RemovableInterface: return "removable-interface";
        case LayerClass::SingleLayer: return "single-layer";
        case LayerClass::DoubleLayer: return "double-layer";
        case LayerClass::CombinedLayer: return "combined-layer";
    }
    return "unknown";
}

struct JumpReport {
    double value_jump = 0.0;
    double flux_jump = 0.0;
    LayerClass classification = LayerClass::RemovableInterface;
};

inline JumpReport jump_diagnostics(const TraceSet& traces, double tol = 1e-6) {
    if (!traces.valid)
        throw NumericalError("jump_diagnostics: traces were not extractable");
    JumpReport r;
    r.value_jump = traces.value_jump();
    r.flux_jump = traces.flux_jump();
    const bool value = std::abs(r.value_jump) >= tol;
    const bool flux = std::abs(r.flux_jump) >= tol;
    if (value && flux)
        r.classification = LayerClass::CombinedLayer;
    else if (value)
        r.classification = LayerClass::DoubleLayer;
    else if (flux)
        r.classification = LayerClass::SingleLayer;
    else
        r.classification = LayerClass::RemovableInterface;
    return r;
}

inline JumpReport jump_diagnostics(const SolveResult& result, double tol = 1e-6) {
    return jump_diagnostics(result.traces, tol);
}

// Both sides of the distributional identity for a field glued across x0:
//   <Lap phi, psi> = fluxjump * psi(x0) - valuejump * psi'(x0).
// The left side is the discrete sum of psi against the second-difference
// Laplacian of the glued samples; the residual |LHS - RHS| is O(h) when the
// interface falls between nodes and telescopes exactly when it sits on one.
inline double distributional_identity_check(const IntervalGrid& grid,
                                            const Eigen::VectorXd& phi, double x0,
                                            const std::function<double(double)>& psi,
                                            double psi_at_s, double dpsi_at_s,
                                            double value_jump, double flux_jump) {
    if (phi.size() != grid.n)
        throw ConfigError("distributional_identity_check: sample count mismatch");
    double lhs = 0.0;
    const double ih2 = 1.0 / (grid.h * grid.h);
    for (int i = 1; i < grid.n - 1; ++i)
        lhs += psi(grid.node(i)) * (phi[i + 1] - 2.0 * phi[i] + phi[i - 1]) * ih2 * grid.h;
    const double rhs = flux_jump * psi_at_s - value_jump * dpsi_at_s;
    return std::abs(lhs - rhs);
}

}  // namespace homhodge
