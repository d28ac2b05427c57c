// Acceptance suite: runs every top-level validation criterion at its pinned
// tolerance and prints one pass/fail line per criterion.
//
// Identity block (exact algebra on small tori): nilpotency, chain map,
// conjugation + spectra, cohomology dimensions, harmonic transport, Hodge
// decomposition. PDE block: classical reduction, penalized Dirichlet /
// Neumann / consistent-Cauchy limits, the distributional jump identity, the
// hollow-sphere point source, and the indicial branch exponents.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "homhodge/experiments.hpp"
#include "homhodge/harness.hpp"
#include "homhodge/hodge.hpp"
#include "homhodge/jump_diagnostics.hpp"
#include "homhodge/random_fields.hpp"

using namespace homhodge;

namespace {

int failures = 0;

void report(const std::string& label, bool pass, const std::string& detail) {
    std::printf("[%s] %s: %s\n", pass ? "PASS" : "FAIL", label.c_str(), detail.c_str());
    if (!pass) ++failures;
}

void check_le(const std::string& label, double value, double tol) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%.3e <= %.0e", value, tol);
    report(label, value <= tol, buf);
}

void check_ge(const std::string& label, double value, double tol) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%.3f >= %.3f", value, tol);
    report(label, value >= tol, buf);
}

void identity_suite() {
    std::mt19937_64 rng(20240901ULL);
    DecIdentityParams params;  // 1000 draws, 4x4..8x8, |w lambda| <= 5
    auto sweep = harness_detail::dec_identity_sweep(params, rng);
    check_le("1. nilpotency d~^2 (1000 draws)", sweep.max_nil_d, 1e-12);
    check_le("1. nilpotency delta~^2 (1000 draws)", sweep.max_nil_delta, 1e-12);
    check_le("2. chain map S d~ = d S", sweep.max_chain, 1e-13);
    check_le("3. conjugation |Delta~ - S^-1 Delta S|", sweep.max_conjugation, 1e-12);
    check_le("3. eigenvalue multiset match", sweep.max_spectrum, 1e-8);

    std::uniform_int_distribution<int> size(4, 8);
    int dim_failures = 0;
    double max_angle = 0.0;
    for (int draw = 0; draw < 50; ++draw) {
        DressedComplex c =
            harness_detail::random_complex(size(rng), size(rng), 1.2, 1.0, 1.0, rng);
        if (cohomology_dims(c) != std::array<int, 3>{1, 2, 1}) ++dim_failures;
        for (int p = 0; p < 3; ++p) {
            Eigen::MatrixXd kernel = harmonic_space(c, p);
            Eigen::MatrixXd transported = c.dressing(p).cwiseInverse().asDiagonal() *
                                          harness_detail::classical_harmonics(c.mesh(), p);
            if (kernel.cols() != transported.cols()) {
                ++dim_failures;
                continue;
            }
            max_angle = std::max(
                max_angle, harness_detail::max_principal_angle(c, p, kernel, transported));
        }
    }
    report("4. cohomology dims (1,2,1), 50 draws", dim_failures == 0,
           std::to_string(dim_failures) + " mismatches");
    check_le("5. harmonic transport principal angle", max_angle, 1e-8);

    double max_reassembly = 0.0, max_cross = 0.0, max_oracle = 0.0;
    for (int draw = 0; draw < 100; ++draw) {
        DressedComplex c =
            harness_detail::random_complex(size(rng), size(rng), 1.2, 1.0, 1.0, rng);
        Cochain eta{1, harness_detail::random_unit(c.mesh().edge_count(), rng)};
        HodgeSplit split = hodge_decompose(c, eta, 1e-12);
        max_reassembly = std::max(max_reassembly, split.reassembly_rel);
        max_cross = std::max(max_cross, split.max_cross_gram);
        HodgeSplit ref = hodge_decompose_dense(c, eta);
        double scale = c.norm(1, eta.values);
        max_oracle = std::max({max_oracle, c.norm(1, split.exact - ref.exact) / scale,
                               c.norm(1, split.coexact - ref.coexact) / scale,
                               c.norm(1, split.harmonic - ref.harmonic) / scale});
    }
    check_le("6. hodge reassembly (100 draws)", max_reassembly, 1e-10);
    check_le("6. hodge pairwise G-orthogonality", max_cross, 1e-8);
    check_le("6. hodge vs dense projection oracle", max_oracle, 1e-8);
}

void classical_reduction() {
    PenalizedProblem plain;
    plain.geometry = build_interval_grid(-1.0, 1.0, 401);
    plain.surface = PointSurface1D{0.0};
    plain.mode = Mode::Plain;
    plain.profile = CutoffProfile{1.0, 0.08, 0.5, BlendKind::SmoothBump};
    plain.far_left = 0.0;
    plain.far_right = 1.0;
    PenalizedProblem zero = plain;
    zero.mode = Mode::Cauchy;
    zero.profile.a = 0.0;
    AssembledSystem sp = assemble_operator(plain);
    AssembledSystem sz = assemble_operator(zero);
    double diff = (Eigen::MatrixXd(sp.matrix) - Eigen::MatrixXd(sz.matrix))
                      .lpNorm<Eigen::Infinity>() +
                  (sp.rhs - sz.rhs).lpNorm<Eigen::Infinity>();
    report("7. a=0 system entrywise equals classical", diff == 0.0,
           "entrywise difference " + fmt_double(diff));

    SolveResult res = solve(plain);
    const IntervalGrid& g = std::get<IntervalGrid>(plain.geometry);
    double worst = 0.0;
    for (int i = 0; i < g.n; ++i)
        worst = std::max(worst, std::abs(res.phi[i] - 0.5 * (g.node(i) + 1.0)));
    check_le("7. plain-mode linear solution", worst, 1e-12);
}

void dirichlet_family() {
    ConvergenceFamily f;
    f.mode = Mode::Dirichlet;
    f.profile.a = 0.5;
    ConvergenceTable t = penalization_convergence(f);
    check_ge("8. dirichlet trace-error order in eps", t.order.slope, 1.0);
    double oracle = dirichlet_flux_jump_limit(f);  // -0.4 for this family
    double rel = std::abs(t.rows.back().flux_jump - oracle) / std::abs(oracle);
    check_le("8. dirichlet limit flux jump vs -0.4", rel, 0.01);
}

void neumann_family() {
    ConvergenceFamily f;
    f.mode = Mode::Neumann;
    f.profile.a = 0.5;
    f.g = 0.0;
    f.h = 1.0;
    f.far_left = 0.0;
    f.far_right = 0.4;
    ConvergenceTable t = penalization_convergence(f);
    check_ge("9. neumann flux-error order in eps", t.order.slope, 1.0);
    double oracle = neumann_value_jump_limit(f);  // -1.6 for this family
    double rel = std::abs(t.rows.back().value_jump - oracle) / std::abs(oracle);
    check_le("9. neumann limit value jump vs oracle", rel, 0.02);
}

void cauchy_family() {
    ConvergenceFamily f;
    f.mode = Mode::Cauchy;
    f.geo = ConvergenceFamily::Geo::Radial;
    f.profile.a = 1.0;
    f.eps0 = 0.04;
    f.levels = 4;
    ConvergenceTable t = penalization_convergence(f);
    bool decreasing = true;
    double prev = std::numeric_limits<double>::infinity();
    double finest = 0.0;
    for (const auto& row : t.rows) {
        double m = std::max(std::abs(row.value_jump), std::abs(row.flux_jump));
        if (m >= prev) decreasing = false;
        prev = m;
        finest = m;
    }
    check_le("10. consistent-Cauchy jumps at finest level", finest, 1e-3);
    report("10. consistent-Cauchy jumps decreasing", decreasing,
           decreasing ? "monotone" : "not monotone");
}

void distributional_identity() {
    struct Bump {
        double xc = 0.2, w = 0.5;
        double value(double x) const {
            double t = (x - xc) / w;
            return std::abs(t) < 1.0 ? std::exp(-1.0 / (1.0 - t * t)) : 0.0;
        }
        double derivative(double x) const {
            double t = (x - xc) / w;
            if (std::abs(t) >= 1.0) return 0.0;
            double q = 1.0 - t * t;
            return value(x) * (-2.0 * t / (q * q)) / w;
        }
    } psi;
    auto residual = [&](int n, double v, double s) {
        IntervalGrid g = build_interval_grid(-1.0, 1.0, n);  // even n: interface off-grid
        Eigen::VectorXd phi(g.n);
        for (int i = 0; i < g.n; ++i) {
            double x = g.node(i);
            phi[i] = 0.3 + 0.1 * x + (x > 0.0 ? v + s * x : 0.0);
        }
        return distributional_identity_check(
            g, phi, 0.0, [&](double x) { return psi.value(x); }, psi.value(0.0),
            psi.derivative(0.0), v, s);
    };
    for (auto [v, s, label] :
         {std::tuple{0.0, 0.5, "slope-jump"}, {0.7, 0.0, "value-jump"}}) {
        std::vector<double> hs, errs;
        for (int n : {200, 400, 800, 1600, 3200}) {
            hs.push_back(2.0 / (n - 1));
            errs.push_back(residual(n, v, s));
        }
        check_ge(std::string("11. distributional identity order, ") + label,
                 fit_loglog(hs, errs).slope, 1.0);
    }
}

void point_source() {
    PointSourceSpec spec;  // C=1, R=0.5, r_max=50, n=2e4, eps=0.021
    PointSourceResult res = point_source_run(spec);
    check_le("12. point source sup error off the layer", res.sup_error_outside, 5e-3);
    check_le("12. point source energy vs 4*pi (tail-corrected)",
             std::abs(res.energy_rel_error), 0.02);
    check_le("12. point source interior flatness", res.interior_flatness, 1e-3);
    double e1 = unregularized_point_energy(1.0, 1e-3, 1.0, 4001);
    double e2 = unregularized_point_energy(1.0, 5e-4, 1.0, 8001);
    report("12. unregularized control diverges like 1/h", std::abs(e2 / e1 - 2.0) < 0.05,
           "E(h/2)/E(h) = " + fmt_double(e2 / e1));
}

void branch_exponents() {
    for (double a : {-2.0, -1.0, -0.5}) {
        BranchFitSpec spec;
        spec.a = a;
        BranchFitResult res = branch_exponent_measure(spec);
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "slope %.4f vs {%g, %g}, rel err %.2e <= 5e-2", res.slope,
                      res.root_m1, res.root_m2, res.rel_error);
        report("13. indicial branch a=" + fmt_double(a), res.rel_error <= 0.05, buf);
    }
}

}  // namespace

int main() {
    auto t0 = std::chrono::steady_clock::now();
    identity_suite();
    auto t1 = std::chrono::steady_clock::now();
    classical_reduction();
    dirichlet_family();
    neumann_family();
    cauchy_family();
    distributional_identity();
    point_source();
    branch_exponents();
    auto t2 = std::chrono::steady_clock::now();
    std::printf("identity suite: %.1f s, PDE suite: %.1f s\n",
                std::chrono::duration<double>(t1 - t0).count(),
                std::chrono::duration<double>(t2 - t1).count());
    if (failures == 0) {
        std::printf("all acceptance criteria passed\n");
        return 0;
    }
    std::printf("%d acceptance check(s) failed\n", failures);
    return 1;
}
