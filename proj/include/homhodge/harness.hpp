#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "homhodge/config.hpp"
#include "homhodge/experiments.hpp"
#include "homhodge/hodge.hpp"
#include "homhodge/random_fields.hpp"
#include "homhodge/report.hpp"
#include "homhodge/torus_mesh.hpp"
#include "homhodge/twisted_complex.hpp"

namespace homhodge {

struct RunResult {
    std::vector<CheckRow> checks;
    std::vector<std::string> files;
    bool pass = true;
};

namespace harness_detail {

inline Eigen::VectorXd random_unit(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = gauss(rng);
    double nrm = v.norm();
    return nrm > 0 ? Eigen::VectorXd(v / nrm) : v;
}

inline DressedComplex random_complex(int nx, int ny, double amp_osc, double amp_const,
                                     double weight, std::mt19937_64& rng) {
    TorusMesh mesh = build_torus_mesh(nx, ny, 1.0, 1.0);
    SmoothTorusField lambda(nx, ny, amp_osc, amp_const, rng);
    return DressedComplex::build(mesh, weight, [&](double x, double y) { return lambda(x, y); });
}

// Exact harmonic cochains of the untwisted flat-torus complex.
inline Eigen::MatrixXd classical_harmonics(const TorusMesh& mesh, int p) {
    if (p == 0) return Eigen::MatrixXd::Ones(mesh.vertex_count(), 1);
    if (p == 2) return Eigen::MatrixXd::Ones(mesh.face_count(), 1);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(mesh.edge_count(), 2);
    h.col(0).head(mesh.nx * mesh.ny).setOnes();  // constant x-edge field
    h.col(1).tail(mesh.nx * mesh.ny).setOnes();  // constant y-edge field
    return h;
}

using homhodge::max_principal_angle;

struct DecSweep {
    double max_nil_d = 0.0, max_nil_delta = 0.0, max_chain = 0.0, max_adjoint = 0.0;
    double max_conjugation = 0.0, max_spectrum = 0.0;
    std::vector<std::vector<std::string>> rows;
};

inline DecSweep dec_identity_sweep(const DecIdentityParams& p, std::mt19937_64& rng) {
    DecSweep out;
    std::uniform_int_distribution<int> mesh_size(p.mesh_min, p.mesh_max);
    for (int trial = 0; trial < p.trials; ++trial) {
        const int nx = mesh_size(rng), ny = mesh_size(rng);
        DressedComplex c = random_complex(nx, ny, p.amp_osc, p.amp_const, p.weight, rng);

        Cochain eta{0, random_unit(c.mesh().vertex_count(), rng)};
        double nil_d = twisted_d(c, twisted_d(c, eta)).values.norm();
        Cochain xi{2, random_unit(c.mesh().face_count(), rng)};
        double nil_delta =
            twisted_codifferential(c, twisted_codifferential(c, xi)).values.norm();

        Cochain eta1{1, random_unit(c.mesh().edge_count(), rng)};
        double chain = std::max(chain_map_check(c, eta), chain_map_check(c, eta1));

        // adjointness <d~ eta, xi1>_G1 = <eta, delta~ xi1>_G0
        Cochain xi1{1, random_unit(c.mesh().edge_count(), rng)};
        double lhs = c.inner(1, twisted_d(c, eta).values, xi1.values);
        double rhs = c.inner(0, eta.values, twisted_codifferential(c, xi1).values);
        double adj = std::abs(lhs - rhs) /
                     std::max(c.norm(1, twisted_d(c, eta).values) * c.norm(1, xi1.values), 1e-300);

        // conjugation Delta~ = S^{-1} Delta S, densely, each degree
        double conj = 0.0;
        if (trial % 5 == 0) {
        DressedComplex flat = DressedComplex::build(c.mesh(), 0.0, [](double, double) { return 0.0; });
        for (int deg = 0; deg < 3; ++deg) {
            Eigen::MatrixXd lap_t = Eigen::MatrixXd(twisted_laplacian(c, deg));
            Eigen::MatrixXd lap = Eigen::MatrixXd(twisted_laplacian(flat, deg));
            Eigen::MatrixXd conjugated = c.dressing(deg).cwiseInverse().asDiagonal() * lap *
                                         c.dressing(deg).asDiagonal();
            conj = std::max(conj, (lap_t - conjugated).norm() / std::max(lap.norm(), 1e-300));
            // similar matrices share the spectrum; compare sorted eigenvalues
            if (trial % 100 == 0) {
                Eigen::MatrixXd g = c.gram(deg).asDiagonal();
                Eigen::MatrixXd m = flat.gram(deg).asDiagonal();
                Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> et(
                    Eigen::MatrixXd(0.5 * (g * lap_t + (g * lap_t).transpose())), g);
                Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ec(
                    Eigen::MatrixXd(0.5 * (m * lap + (m * lap).transpose())), m);
                double dev = 0.0, scale = std::max(1.0, ec.eigenvalues().cwiseAbs().maxCoeff());
                for (int k = 0; k < et.eigenvalues().size(); ++k)
                    dev = std::max(dev,
                                   std::abs(et.eigenvalues()[k] - ec.eigenvalues()[k]) / scale);
                out.max_spectrum = std::max(out.max_spectrum, dev);
            }
        }
        }

        out.max_nil_d = std::max(out.max_nil_d, nil_d);
        out.max_nil_delta = std::max(out.max_nil_delta, nil_delta);
        out.max_chain = std::max(out.max_chain, chain);
        out.max_adjoint = std::max(out.max_adjoint, adj);
        out.max_conjugation = std::max(out.max_conjugation, conj);
        if (trial < 200)  // keep the per-trial table a manageable size
            out.rows.push_back({std::to_string(trial), std::to_string(nx), std::to_string(ny),
                                fmt_double(nil_d), fmt_double(nil_delta), fmt_double(chain),
                                fmt_double(adj), fmt_double(conj)});
    }
    return out;
}

}  // namespace harness_detail

inline RunResult run_dec_identities(const DecIdentityParams& p, long seed,
                                    const std::filesystem::path& out) {
    std::mt19937_64 rng(static_cast<unsigned long long>(seed));
    auto sweep = harness_detail::dec_identity_sweep(p, rng);
    RunResult r;
    r.checks = {
        make_check("nilpotency_d_max", sweep.max_nil_d, p.tol_nilpotency),
        make_check("nilpotency_delta_max", sweep.max_nil_delta, p.tol_nilpotency),
        make_check("chain_map_max", sweep.max_chain, p.tol_chain),
        make_check("adjointness_max", sweep.max_adjoint, p.tol_adjoint),
        make_check("conjugation_max", sweep.max_conjugation, p.tol_conjugation),
        make_check("spectrum_match_max", sweep.max_spectrum, 1e-8),
    };
    write_csv(out / "dec_identities_trials.csv",
              {"trial", "nx", "ny", "nilpotency_d", "nilpotency_delta", "chain_map",
               "adjointness", "conjugation"},
              sweep.rows);
    Json params{{"trials", p.trials}, {"mesh_min", p.mesh_min}, {"mesh_max", p.mesh_max},
                {"amp_osc", p.amp_osc}, {"amp_const", p.amp_const}, {"weight", p.weight}};
    write_summary(out / "dec_identities_summary.json", "dec-identities", seed, params, r.checks);
    r.files = {"dec_identities_trials.csv", "dec_identities_summary.json"};
    r.pass = all_pass(r.checks);
    return r;
}

inline RunResult run_hodge(const HodgeParams& p, long seed, const std::filesystem::path& out) {
    std::mt19937_64 rng(static_cast<unsigned long long>(seed));
    std::uniform_int_distribution<int> mesh_size(p.mesh_min, p.mesh_max);
    int dim_failures = 0;
    double max_angle = 0.0, max_reassembly = 0.0, max_cross = 0.0, max_oracle = 0.0;
    std::vector<std::vector<std::string>> rows;
    for (int d = 0; d < p.dimension_draws; ++d) {
        const int nx = mesh_size(rng), ny = mesh_size(rng);
        DressedComplex c =
            harness_detail::random_complex(nx, ny, p.amp_osc, p.amp_const, p.weight, rng);
        auto dims = cohomology_dims(c);
        if (dims != std::array<int, 3>{1, 2, 1}) ++dim_failures;
        double angle = 0.0;
        for (int deg = 0; deg < 3; ++deg) {
            Eigen::MatrixXd kernel = harmonic_space(c, deg, p.gap_tol);
            Eigen::MatrixXd transported =
                c.dressing(deg).cwiseInverse().asDiagonal() *
                harness_detail::classical_harmonics(c.mesh(), deg);
            if (kernel.cols() != transported.cols()) { ++dim_failures; continue; }
            angle = std::max(angle,
                             harness_detail::max_principal_angle(c, deg, kernel, transported));
        }
        max_angle = std::max(max_angle, angle);
        rows.push_back({std::to_string(d), std::to_string(nx), std::to_string(ny),
                        std::to_string(dims[0]), std::to_string(dims[1]),
                        std::to_string(dims[2]), fmt_double(angle)});
    }
    for (int d = 0; d < p.decompose_draws; ++d) {
        const int nx = mesh_size(rng), ny = mesh_size(rng);
        DressedComplex c =
            harness_detail::random_complex(nx, ny, p.amp_osc, p.amp_const, p.weight, rng);
        Cochain eta{1, harness_detail::random_unit(c.mesh().edge_count(), rng)};
        HodgeSplit split = hodge_decompose(c, eta, p.cg_tol);
        max_reassembly = std::max(max_reassembly, split.reassembly_rel);
        max_cross = std::max(max_cross, split.max_cross_gram);
        if (d % 5 == 0) {
            HodgeSplit ref = hodge_decompose_dense(c, eta);
            double scale = std::max(c.norm(1, eta.values), 1e-300);
            max_oracle = std::max({max_oracle,
                                   c.norm(1, split.exact - ref.exact) / scale,
                                   c.norm(1, split.coexact - ref.coexact) / scale,
                                   c.norm(1, split.harmonic - ref.harmonic) / scale});
        }
    }
    RunResult r;
    r.checks = {
        make_check("cohomology_dim_failures", dim_failures, 0, "eq_int"),
        make_check("harmonic_transport_angle_max", max_angle, p.tol_transport),
        make_check("decomposition_reassembly_max", max_reassembly, p.tol_reassembly),
        make_check("decomposition_cross_gram_max", max_cross, p.tol_orthogonality),
        make_check("decomposition_oracle_max", max_oracle, p.tol_oracle),
    };
    write_csv(out / "hodge_draws.csv",
              {"draw", "nx", "ny", "h0", "h1", "h2", "transport_angle"}, rows);
    Json params{{"dimension_draws", p.dimension_draws}, {"decompose_draws", p.decompose_draws},
                {"mesh_min", p.mesh_min}, {"mesh_max", p.mesh_max},
                {"amp_osc", p.amp_osc}, {"amp_const", p.amp_const}, {"weight", p.weight}};
    write_summary(out / "hodge_summary.json", "hodge", seed, params, r.checks);
    r.files = {"hodge_draws.csv", "hodge_summary.json"};
    r.pass = all_pass(r.checks);
    return r;
}

namespace harness_detail {

inline std::string family_file_stem(const char* kind, const FamilyRunParams& p) {
    return std::string(kind) + "_a" + fmt_double(p.family.profile.a) + "_eps0" +
           fmt_double(p.family.eps0);
}

inline std::vector<std::vector<std::string>> table_rows(const ConvergenceTable& t) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& row : t.rows)
        rows.push_back({fmt_double(row.eps), fmt_double(row.h), fmt_double(row.trace_error),
                        fmt_double(row.value_jump), fmt_double(row.flux_jump),
                        fmt_double(row.residual), std::to_string(row.unknowns)});
    return rows;
}

inline RunResult run_family(const char* name, const FamilyRunParams& p, long seed,
                            const std::filesystem::path& out) {
    ConvergenceTable table = penalization_convergence(p.family);
    const ConvergenceRow& finest = table.rows.back();
    RunResult r;
    if (p.family.mode == Mode::Dirichlet) {
        double oracle = dirichlet_flux_jump_limit(p.family);
        r.checks = {
            make_check("trace_error_order", table.order.slope, p.min_order, "ge"),
            make_check("flux_jump_rel_error",
                       std::abs(finest.flux_jump - oracle) / std::abs(oracle), p.jump_rtol),
        };
    } else if (p.family.mode == Mode::Neumann) {
        double oracle = neumann_value_jump_limit(p.family);
        r.checks = {
            make_check("flux_error_order", table.order.slope, p.min_order, "ge"),
            make_check("value_jump_rel_error",
                       std::abs(finest.value_jump - oracle) / std::abs(oracle), p.jump_rtol),
        };
    } else {
        double worst = 0.0;
        bool decreasing = true;
        for (size_t k = 0; k < table.rows.size(); ++k) {
            double m = std::max(std::abs(table.rows[k].value_jump),
                                std::abs(table.rows[k].flux_jump));
            if (k + 1 == table.rows.size()) worst = m;
            if (k > 0 && m >= std::max(std::abs(table.rows[k - 1].value_jump),
                                       std::abs(table.rows[k - 1].flux_jump)))
                decreasing = false;
        }
        r.checks = {
            make_check("max_jump_at_finest", worst, p.cauchy_jump_tol),
            make_check("jumps_decreasing", decreasing ? 1 : 0, 1, "eq_int"),
        };
    }
    const std::string stem = family_file_stem(name, p);
    write_csv(out / (stem + ".csv"),
              {"eps", "h", "trace_error", "value_jump", "flux_jump", "residual", "unknowns"},
              table_rows(table));
    Json params{{"family", detail::family_run_to_json(p)["family"]}};
    Json extra{{"fitted_order", table.order.slope}, {"order_ci95", table.order.ci95}};
    write_summary(out / (stem + "_summary.json"), name, seed, params, r.checks, extra);
    r.files = {stem + ".csv", stem + "_summary.json"};
    r.pass = all_pass(r.checks);
    return r;
}

}  // namespace harness_detail

inline RunResult run_point_source(const PointSourceParams& p, long seed,
                                  const std::filesystem::path& out) {
    RunResult r;
    std::vector<std::vector<std::string>> rows;
    auto add_row = [&](const std::string& label, double radius, const PointSourceResult& res) {
        rows.push_back({label, fmt_double(radius), fmt_double(res.sup_error_outside),
                        fmt_double(res.interior_flatness), fmt_double(res.energy_bulk),
                        fmt_double(res.energy_layer), fmt_double(res.energy_tail),
                        fmt_double(res.energy_total), fmt_double(res.energy_target),
                        fmt_double(res.energy_rel_error), fmt_double(res.far_field_deviation)});
    };

    PointSourceSpec spec = p.spec;
    spec.variant = PointSourceSpec::PhidVariant::HarmonicExtension;
    PointSourceResult main = point_source_run(spec);
    add_row("harmonic-extension", spec.radius, main);
    const double c_abs = std::abs(spec.charge);
    const double c_over_r = c_abs / spec.radius;
    r.checks = {
        make_check("sup_error_outside_layer", main.sup_error_outside, p.tol_sup * c_abs),
        make_check("energy_rel_error", std::abs(main.energy_rel_error), p.tol_energy_rel),
        make_check("interior_flatness", main.interior_flatness, p.tol_interior * c_over_r),
        make_check("far_field_deviation", main.far_field_deviation, 1e-3),
    };
    if (p.run_constant_variant) {
        PointSourceSpec alt = p.spec;
        alt.variant = PointSourceSpec::PhidVariant::ConstantOnly;
        add_row("constant-only", alt.radius, point_source_run(alt));
    }
    if (!p.sweep_radii.empty()) {
        double prev_energy = 0.0, prev_radius = std::numeric_limits<double>::infinity();
        bool monotone = true;
        bool first = true;
        double worst = 0.0;
        for (double radius : p.sweep_radii) {
            PointSourceSpec s = p.spec;
            s.variant = PointSourceSpec::PhidVariant::HarmonicExtension;
            s.radius = radius;
            s.profile.eps = p.spec.profile.eps * radius / p.spec.radius;
            s.r_min = 0.04 * radius;
            s.r_max = std::min(p.spec.r_max, 40.0 * radius);
            s.n = static_cast<int>(std::ceil((s.r_max - s.r_min) /
                                             (s.profile.eta * s.profile.eps / 4.2))) + 1;
            PointSourceResult res = point_source_run(s);
            add_row("sweep", radius, res);
            worst = std::max(worst, std::abs(res.energy_total * radius /
                                                 (2.0 * std::numbers::pi * s.charge * s.charge) -
                                             1.0));
            // E ~ 1/R: smaller radius must mean larger energy and vice versa
            if (!first && (radius - prev_radius) * (res.energy_total - prev_energy) >= 0.0)
                monotone = false;
            first = false;
            prev_energy = res.energy_total;
            prev_radius = radius;
        }
        r.checks.push_back(make_check("sweep_energy_scaling", worst, p.tol_sweep));
        r.checks.push_back(make_check("sweep_energy_monotone", monotone ? 1 : 0, 1, "eq_int"));
    }
    if (p.run_control) {
        const double h0 = 1e-3;
        double e1 = unregularized_point_energy(p.spec.charge, h0, 1.0, 4001);
        double e2 = unregularized_point_energy(p.spec.charge, h0 / 2.0, 1.0, 8001);
        r.checks.push_back(make_check("control_divergence_ratio_dev",
                                      std::abs(e2 / e1 - 2.0), 0.05));
    }
    write_csv(out / "point_source.csv",
              {"variant", "radius", "sup_error", "interior_flatness", "energy_bulk",
               "energy_layer", "energy_tail", "energy_total", "energy_target",
               "energy_rel_error", "far_field_deviation"},
              rows);
    Json params{{"charge", p.spec.charge}, {"radius", p.spec.radius},
                {"r_min", p.spec.r_min}, {"r_max", p.spec.r_max}, {"n", p.spec.n},
                {"profile", detail::profile_to_json(p.spec.profile)}};
    write_summary(out / "point_source_summary.json", "point-source", seed, params, r.checks);
    r.files = {"point_source.csv", "point_source_summary.json"};
    r.pass = all_pass(r.checks);
    return r;
}

inline RunResult run_branch_fit(const BranchFitParams& p, long seed,
                                const std::filesystem::path& out) {
    RunResult r;
    std::vector<std::vector<std::string>> rows;
    double worst_rel = 0.0, worst_drift = 0.0;
    for (double a : p.a_values) {
        BranchFitSpec spec = p.base;
        spec.a = a;
        BranchFitResult res = branch_exponent_measure(spec);
        double drift = std::abs(res.slope_halved_window - res.slope) /
                       std::max(std::abs(res.slope), 1e-300);
        worst_rel = std::max(worst_rel, res.rel_error);
        worst_drift = std::max(worst_drift, drift);
        rows.push_back({fmt_double(a), fmt_double(res.slope), fmt_double(res.slope_halved_window),
                        fmt_double(res.root_m1), fmt_double(res.root_m2),
                        fmt_double(res.matched_root), fmt_double(res.rel_error)});
    }
    r.checks = {
        make_check("branch_exponent_rel_error_max", worst_rel, p.tol_rel),
        make_check("fit_window_drift_max", worst_drift, p.tol_window_drift),
    };
    write_csv(out / "branch_fit.csv",
              {"a", "slope", "slope_halved_window", "root_m1", "root_m2", "matched_root",
               "rel_error"},
              rows);
    Json params{{"a_values", p.a_values}, {"n", p.base.n}, {"eps", p.base.eps},
                {"eta", p.base.eta}, {"x_max", p.base.x_max}};
    write_summary(out / "branch_fit_summary.json", "branch-fit", seed, params, r.checks);
    r.files = {"branch_fit.csv", "branch_fit_summary.json"};
    r.pass = all_pass(r.checks);
    return r;
}

inline RunResult run_experiment(const ExperimentConfig& config,
                                const std::filesystem::path& out_dir) {
    validate(config);
    std::filesystem::create_directories(out_dir);
    std::srand(static_cast<unsigned>(config.seed));  // covers Eigen's setRandom paths
    return std::visit(
        [&](const auto& p) -> RunResult {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, DecIdentityParams>)
                return run_dec_identities(p, config.seed, out_dir);
            else if constexpr (std::is_same_v<T, HodgeParams>)
                return run_hodge(p, config.seed, out_dir);
            else if constexpr (std::is_same_v<T, FamilyRunParams>)
                return harness_detail::run_family(to_string(config.kind), p, config.seed, out_dir);
            else if constexpr (std::is_same_v<T, PointSourceParams>)
                return run_point_source(p, config.seed, out_dir);
            else if constexpr (std::is_same_v<T, BranchFitParams>)
                return run_branch_fit(p, config.seed, out_dir);
            else {
                RunResult all;
                auto merge = [&](RunResult one) {
                    all.checks.insert(all.checks.end(), one.checks.begin(), one.checks.end());
                    all.files.insert(all.files.end(), one.files.begin(), one.files.end());
                    all.pass = all.pass && one.pass;
                };
                merge(harness_detail::run_family("convergence-dirichlet", p.dirichlet,
                                                 config.seed, out_dir));
                merge(harness_detail::run_family("convergence-neumann", p.neumann, config.seed,
                                                 out_dir));
                merge(harness_detail::run_family("convergence-cauchy", p.cauchy, config.seed,
                                                 out_dir));
                return all;
            }
        },
        config.params);
}

// Human-readable report: one line per check with its tolerance and verdict.
inline void print_report(std::ostream& os, const RunResult& r) {
    for (const auto& c : r.checks) {
        const char* rel = c.comparison == "ge" ? ">=" : (c.comparison == "eq_int" ? "==" : "<=");
        os << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << ": " << fmt_double(c.value) << " "
           << rel << " " << fmt_double(c.tolerance) << "\n";
    }
    if (r.checks.empty()) os << "(no checks)\n";
}

}  // namespace homhodge
