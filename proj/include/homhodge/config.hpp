#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "homhodge/cutoff_profile.hpp"
#include "homhodge/errors.hpp"
#include "homhodge/experiments.hpp"

namespace homhodge {

enum class ExperimentKind {
    DecIdentities,
    Hodge,
    Dirichlet,
    Neumann,
    Cauchy,
    PointSource,
    BranchFit,
    Convergence,
};

inline const char* to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::DecIdentities: return "dec-identities";
        case ExperimentKind::Hodge: return "hodge";
        case ExperimentKind::Dirichlet: return "dirichlet";
        case ExperimentKind::Neumann: return "neumann";
        case ExperimentKind::Cauchy: return "cauchy";
        case ExperimentKind::PointSource: return "point-source";
        case ExperimentKind::BranchFit: return "branch-fit";
        case ExperimentKind::Convergence: return "convergence";
    }
    return "unknown";
}

inline ExperimentKind kind_from_string(const std::string& s) {
    for (auto k : {ExperimentKind::DecIdentities, ExperimentKind::Hodge,
                   ExperimentKind::Dirichlet, ExperimentKind::Neumann, ExperimentKind::Cauchy,
                   ExperimentKind::PointSource, ExperimentKind::BranchFit,
                   ExperimentKind::Convergence})
        if (s == to_string(k)) return k;
    throw ConfigError("unknown experiment kind '" + s + "'");
}

// --- parameter blocks per experiment kind ----------------------------------

struct DecIdentityParams {
    int trials = 1000;
    int mesh_min = 4, mesh_max = 8;
    double amp_osc = 1.2, amp_const = 3.8;  // |w lambda| stays <= 5
    double weight = 1.0;
    double tol_nilpotency = 1e-12;
    double tol_chain = 1e-13;
    double tol_conjugation = 1e-12;
    double tol_adjoint = 1e-12;
};

struct HodgeParams {
    int dimension_draws = 50;
    int decompose_draws = 100;
    int mesh_min = 4, mesh_max = 8;
    double amp_osc = 1.2, amp_const = 1.0;
    double weight = 1.0;
    double gap_tol = 1e-6;
    double cg_tol = 1e-12;
    double tol_transport = 1e-8;
    double tol_reassembly = 1e-10;
    double tol_orthogonality = 1e-8;
    double tol_oracle = 1e-8;
};

struct FamilyRunParams {
    ConvergenceFamily family;
    double min_order = 1.0;
    double jump_rtol = 0.01;       // Dirichlet flux-jump / Neumann value-jump check
    double cauchy_jump_tol = 1e-3; // consistent-Cauchy absolute jump bound
};

struct PointSourceParams {
    PointSourceSpec spec;
    std::vector<double> sweep_radii{1.0, 0.5, 0.25, 0.125};  // R sweep (E * R / 2 pi C^2 -> 1)
    bool run_control = true;          // unregularized 1/h divergence control
    bool run_constant_variant = true; // also report the constants-only phi_d
    double tol_sup = 5e-3;
    double tol_energy_rel = 0.02;
    double tol_interior = 1e-3;  // relative to C/R
    double tol_sweep = 0.03;
};

struct BranchFitParams {
    std::vector<double> a_values{-2.0, -1.0, -0.5};
    BranchFitSpec base;
    double tol_rel = 0.05;
    double tol_window_drift = 0.02;
};

struct ConvergenceParams {
    FamilyRunParams dirichlet, neumann, cauchy;
};

using ExperimentParams =
    std::variant<DecIdentityParams, HodgeParams, FamilyRunParams, PointSourceParams,
                 BranchFitParams, ConvergenceParams>;

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::DecIdentities;
    long seed = 42;
    std::string out_dir;  // optional; CLI --out overrides
    ExperimentParams params;
};

// --- JSON (de)serialization -------------------------------------------------

namespace detail {

template <typename T>
void get_if_present(const nlohmann::json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

inline BlendKind blend_from_string(const std::string& s) {
    if (s == "smooth") return BlendKind::SmoothBump;
    if (s == "quintic") return BlendKind::Quintic;
    throw ConfigError("unknown blend kind '" + s + "' (expected smooth|quintic)");
}
inline const char* blend_to_string(BlendKind b) {
    return b == BlendKind::SmoothBump ? "smooth" : "quintic";
}

inline void profile_from_json(const nlohmann::json& j, CutoffProfile& p) {
    get_if_present(j, "a", p.a);
    get_if_present(j, "eps", p.eps);
    get_if_present(j, "eta", p.eta);
    if (j.contains("blend")) p.blend = blend_from_string(j.at("blend").get<std::string>());
}
inline nlohmann::ordered_json profile_to_json(const CutoffProfile& p) {
    return {{"a", p.a}, {"eps", p.eps}, {"eta", p.eta}, {"blend", blend_to_string(p.blend)}};
}

inline void family_from_json(const nlohmann::json& j, ConvergenceFamily& f) {
    if (j.contains("geometry")) {
        std::string g = j.at("geometry").get<std::string>();
        if (g == "interval") f.geo = ConvergenceFamily::Geo::Interval;
        else if (g == "radial") f.geo = ConvergenceFamily::Geo::Radial;
        else throw ConfigError("unknown family geometry '" + g + "'");
    }
    get_if_present(j, "x_min", f.x_min);
    get_if_present(j, "x_max", f.x_max);
    get_if_present(j, "x0", f.x0);
    get_if_present(j, "far_left", f.far_left);
    get_if_present(j, "far_right", f.far_right);
    get_if_present(j, "g", f.g);
    get_if_present(j, "h", f.h);
    get_if_present(j, "r_min", f.r_min);
    get_if_present(j, "r_max", f.r_max);
    get_if_present(j, "radius", f.radius);
    get_if_present(j, "charge", f.charge);
    if (j.contains("profile")) profile_from_json(j.at("profile"), f.profile);
    get_if_present(j, "eps0", f.eps0);
    get_if_present(j, "levels", f.levels);
    get_if_present(j, "nodes_per_inner_zone", f.nodes_per_inner_zone);
    get_if_present(j, "weight", f.weight);
}
inline nlohmann::ordered_json family_to_json(const ConvergenceFamily& f) {
    nlohmann::ordered_json j;
    j["geometry"] = f.geo == ConvergenceFamily::Geo::Interval ? "interval" : "radial";
    j["x_min"] = f.x_min;
    j["x_max"] = f.x_max;
    j["x0"] = f.x0;
    j["far_left"] = f.far_left;
    j["far_right"] = f.far_right;
    j["g"] = f.g;
    j["h"] = f.h;
    j["r_min"] = f.r_min;
    j["r_max"] = f.r_max;
    j["radius"] = f.radius;
    j["charge"] = f.charge;
    j["profile"] = profile_to_json(f.profile);
    j["eps0"] = f.eps0;
    j["levels"] = f.levels;
    j["nodes_per_inner_zone"] = f.nodes_per_inner_zone;
    j["weight"] = f.weight;
    return j;
}

inline void family_run_from_json(const nlohmann::json& j, FamilyRunParams& p) {
    if (j.contains("family")) family_from_json(j.at("family"), p.family);
    get_if_present(j, "min_order", p.min_order);
    get_if_present(j, "jump_rtol", p.jump_rtol);
    get_if_present(j, "cauchy_jump_tol", p.cauchy_jump_tol);
}
inline nlohmann::ordered_json family_run_to_json(const FamilyRunParams& p) {
    return {{"family", family_to_json(p.family)},
            {"min_order", p.min_order},
            {"jump_rtol", p.jump_rtol},
            {"cauchy_jump_tol", p.cauchy_jump_tol}};
}

}  // namespace detail

// Built-in defaults per experiment kind; these are the validation suites the
// CLI runs when no config file is given.
inline ExperimentConfig default_config(ExperimentKind kind) {
    ExperimentConfig c;
    c.kind = kind;
    switch (kind) {
        case ExperimentKind::DecIdentities:
            c.params = DecIdentityParams{};
            break;
        case ExperimentKind::Hodge:
            c.params = HodgeParams{};
            break;
        case ExperimentKind::Dirichlet: {
            FamilyRunParams p;
            p.family.mode = Mode::Dirichlet;
            p.family.profile.a = 0.5;
            c.params = p;
            break;
        }
        case ExperimentKind::Neumann: {
            FamilyRunParams p;
            p.family.mode = Mode::Neumann;
            p.family.profile.a = 0.5;
            p.family.g = 0.0;
            p.family.h = 1.0;
            p.family.far_right = 0.4;  // asymmetric far data so the flux error is fittable
            p.jump_rtol = 0.02;
            c.params = p;
            break;
        }
        case ExperimentKind::Cauchy: {
            FamilyRunParams p;
            p.family.mode = Mode::Cauchy;
            p.family.geo = ConvergenceFamily::Geo::Radial;
            p.family.profile.a = 1.0;
            p.family.eps0 = 0.04;
            p.family.levels = 4;
            c.params = p;
            break;
        }
        case ExperimentKind::PointSource:
            c.params = PointSourceParams{};
            break;
        case ExperimentKind::BranchFit:
            c.params = BranchFitParams{};
            break;
        case ExperimentKind::Convergence: {
            ConvergenceParams p;
            p.dirichlet = std::get<FamilyRunParams>(default_config(ExperimentKind::Dirichlet).params);
            p.neumann = std::get<FamilyRunParams>(default_config(ExperimentKind::Neumann).params);
            p.cauchy = std::get<FamilyRunParams>(default_config(ExperimentKind::Cauchy).params);
            c.params = p;
            break;
        }
    }
    return c;
}

inline void validate(const ExperimentConfig& c) {
    auto positive = [](double v, const char* what) {
        if (!(v > 0.0)) throw ConfigError(std::string("config: ") + what + " must be positive");
    };
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, DecIdentityParams>) {
                if (p.trials < 1) throw ConfigError("config: trials must be >= 1");
                if (p.mesh_min < 2 || p.mesh_max < p.mesh_min)
                    throw ConfigError("config: invalid mesh size range");
                positive(p.tol_nilpotency, "tol_nilpotency");
                positive(p.tol_chain, "tol_chain");
                positive(p.tol_conjugation, "tol_conjugation");
                positive(p.tol_adjoint, "tol_adjoint");
            } else if constexpr (std::is_same_v<T, HodgeParams>) {
                if (p.dimension_draws < 1 || p.decompose_draws < 1)
                    throw ConfigError("config: draw counts must be >= 1");
                positive(p.gap_tol, "gap_tol");
                positive(p.cg_tol, "cg_tol");
                positive(p.tol_transport, "tol_transport");
                positive(p.tol_reassembly, "tol_reassembly");
                positive(p.tol_orthogonality, "tol_orthogonality");
                positive(p.tol_oracle, "tol_oracle");
            } else if constexpr (std::is_same_v<T, FamilyRunParams>) {
                homhodge::validate(p.family.profile);
                if (p.family.levels < 1) throw ConfigError("config: levels must be >= 1");
                positive(p.family.eps0, "eps0");
                positive(p.family.nodes_per_inner_zone, "nodes_per_inner_zone");
                positive(p.jump_rtol, "jump_rtol");
                positive(p.cauchy_jump_tol, "cauchy_jump_tol");
            } else if constexpr (std::is_same_v<T, PointSourceParams>) {
                homhodge::validate(p.spec.profile);
                if (!(p.spec.radius > 0 && p.spec.radius < p.spec.r_max))
                    throw ConfigError("config: require 0 < R < r_max");
                if (p.spec.n < 16) throw ConfigError("config: point-source grid too coarse");
                positive(p.tol_sup, "tol_sup");
                positive(p.tol_energy_rel, "tol_energy_rel");
                positive(p.tol_interior, "tol_interior");
            } else if constexpr (std::is_same_v<T, BranchFitParams>) {
                if (p.a_values.empty()) throw ConfigError("config: a_values must not be empty");
                positive(p.tol_rel, "tol_rel");
                positive(p.tol_window_drift, "tol_window_drift");
            } else if constexpr (std::is_same_v<T, ConvergenceParams>) {
                homhodge::validate(p.dirichlet.family.profile);
                homhodge::validate(p.neumann.family.profile);
                homhodge::validate(p.cauchy.family.profile);
            }
        },
        c.params);
}

inline ExperimentConfig parse_config(const nlohmann::json& j) {
    if (!j.contains("kind")) throw ConfigError("config: missing 'kind'");
    ExperimentConfig c = default_config(kind_from_string(j.at("kind").get<std::string>()));
    detail::get_if_present(j, "seed", c.seed);
    detail::get_if_present(j, "out_dir", c.out_dir);
    std::visit(
        [&](auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, DecIdentityParams>) {
                detail::get_if_present(j, "trials", p.trials);
                detail::get_if_present(j, "mesh_min", p.mesh_min);
                detail::get_if_present(j, "mesh_max", p.mesh_max);
                detail::get_if_present(j, "amp_osc", p.amp_osc);
                detail::get_if_present(j, "amp_const", p.amp_const);
                detail::get_if_present(j, "weight", p.weight);
                detail::get_if_present(j, "tol_nilpotency", p.tol_nilpotency);
                detail::get_if_present(j, "tol_chain", p.tol_chain);
                detail::get_if_present(j, "tol_conjugation", p.tol_conjugation);
                detail::get_if_present(j, "tol_adjoint", p.tol_adjoint);
            } else if constexpr (std::is_same_v<T, HodgeParams>) {
                detail::get_if_present(j, "dimension_draws", p.dimension_draws);
                detail::get_if_present(j, "decompose_draws", p.decompose_draws);
                detail::get_if_present(j, "mesh_min", p.mesh_min);
                detail::get_if_present(j, "mesh_max", p.mesh_max);
                detail::get_if_present(j, "amp_osc", p.amp_osc);
                detail::get_if_present(j, "amp_const", p.amp_const);
                detail::get_if_present(j, "weight", p.weight);
                detail::get_if_present(j, "gap_tol", p.gap_tol);
                detail::get_if_present(j, "cg_tol", p.cg_tol);
                detail::get_if_present(j, "tol_transport", p.tol_transport);
                detail::get_if_present(j, "tol_reassembly", p.tol_reassembly);
                detail::get_if_present(j, "tol_orthogonality", p.tol_orthogonality);
                detail::get_if_present(j, "tol_oracle", p.tol_oracle);
            } else if constexpr (std::is_same_v<T, FamilyRunParams>) {
                detail::family_run_from_json(j, p);
            } else if constexpr (std::is_same_v<T, PointSourceParams>) {
                detail::get_if_present(j, "charge", p.spec.charge);
                detail::get_if_present(j, "radius", p.spec.radius);
                detail::get_if_present(j, "r_min", p.spec.r_min);
                detail::get_if_present(j, "r_max", p.spec.r_max);
                detail::get_if_present(j, "n", p.spec.n);
                if (j.contains("profile")) detail::profile_from_json(j.at("profile"), p.spec.profile);
                detail::get_if_present(j, "weight", p.spec.weight);
                detail::get_if_present(j, "sweep_radii", p.sweep_radii);
                detail::get_if_present(j, "run_control", p.run_control);
                detail::get_if_present(j, "run_constant_variant", p.run_constant_variant);
                detail::get_if_present(j, "tol_sup", p.tol_sup);
                detail::get_if_present(j, "tol_energy_rel", p.tol_energy_rel);
                detail::get_if_present(j, "tol_interior", p.tol_interior);
                detail::get_if_present(j, "tol_sweep", p.tol_sweep);
            } else if constexpr (std::is_same_v<T, BranchFitParams>) {
                detail::get_if_present(j, "a_values", p.a_values);
                detail::get_if_present(j, "x_max", p.base.x_max);
                detail::get_if_present(j, "n", p.base.n);
                detail::get_if_present(j, "eps", p.base.eps);
                detail::get_if_present(j, "eta", p.base.eta);
                detail::get_if_present(j, "weight", p.base.weight);
                detail::get_if_present(j, "tol_rel", p.tol_rel);
                detail::get_if_present(j, "tol_window_drift", p.tol_window_drift);
            } else if constexpr (std::is_same_v<T, ConvergenceParams>) {
                if (j.contains("dirichlet")) detail::family_run_from_json(j.at("dirichlet"), p.dirichlet);
                if (j.contains("neumann")) detail::family_run_from_json(j.at("neumann"), p.neumann);
                if (j.contains("cauchy")) detail::family_run_from_json(j.at("cauchy"), p.cauchy);
            }
        },
        c.params);
    validate(c);
    return c;
}

inline nlohmann::ordered_json serialize_config(const ExperimentConfig& c) {
    nlohmann::ordered_json j;
    j["kind"] = to_string(c.kind);
    j["seed"] = c.seed;
    if (!c.out_dir.empty()) j["out_dir"] = c.out_dir;
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, DecIdentityParams>) {
                j["trials"] = p.trials;
                j["mesh_min"] = p.mesh_min;
                j["mesh_max"] = p.mesh_max;
                j["amp_osc"] = p.amp_osc;
                j["amp_const"] = p.amp_const;
                j["weight"] = p.weight;
                j["tol_nilpotency"] = p.tol_nilpotency;
                j["tol_chain"] = p.tol_chain;
                j["tol_conjugation"] = p.tol_conjugation;
                j["tol_adjoint"] = p.tol_adjoint;
            } else if constexpr (std::is_same_v<T, HodgeParams>) {
                j["dimension_draws"] = p.dimension_draws;
                j["decompose_draws"] = p.decompose_draws;
                j["mesh_min"] = p.mesh_min;
                j["mesh_max"] = p.mesh_max;
                j["amp_osc"] = p.amp_osc;
                j["amp_const"] = p.amp_const;
                j["weight"] = p.weight;
                j["gap_tol"] = p.gap_tol;
                j["cg_tol"] = p.cg_tol;
                j["tol_transport"] = p.tol_transport;
                j["tol_reassembly"] = p.tol_reassembly;
                j["tol_orthogonality"] = p.tol_orthogonality;
                j["tol_oracle"] = p.tol_oracle;
            } else if constexpr (std::is_same_v<T, FamilyRunParams>) {
                nlohmann::ordered_json fam = detail::family_run_to_json(p);
                for (auto& [k, v] : fam.items()) j[k] = v;
            } else if constexpr (std::is_same_v<T, PointSourceParams>) {
                j["charge"] = p.spec.charge;
                j["radius"] = p.spec.radius;
                j["r_min"] = p.spec.r_min;
                j["r_max"] = p.spec.r_max;
                j["n"] = p.spec.n;
                j["profile"] = detail::profile_to_json(p.spec.profile);
                j["weight"] = p.spec.weight;
                j["sweep_radii"] = p.sweep_radii;
                j["run_control"] = p.run_control;
                j["run_constant_variant"] = p.run_constant_variant;
                j["tol_sup"] = p.tol_sup;
                j["tol_energy_rel"] = p.tol_energy_rel;
                j["tol_interior"] = p.tol_interior;
                j["tol_sweep"] = p.tol_sweep;
            } else if constexpr (std::is_same_v<T, BranchFitParams>) {
                j["a_values"] = p.a_values;
                j["x_max"] = p.base.x_max;
                j["n"] = p.base.n;
                j["eps"] = p.base.eps;
                j["eta"] = p.base.eta;
                j["weight"] = p.base.weight;
                j["tol_rel"] = p.tol_rel;
                j["tol_window_drift"] = p.tol_window_drift;
            } else if constexpr (std::is_same_v<T, ConvergenceParams>) {
                j["dirichlet"] = detail::family_run_to_json(p.dirichlet);
                j["neumann"] = detail::family_run_to_json(p.neumann);
                j["cauchy"] = detail::family_run_to_json(p.cauchy);
            }
        },
        c.params);
    return j;
}

}  // namespace homhodge
