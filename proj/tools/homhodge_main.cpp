// Command-line harness: runs the built-in validation suites (twisted-calculus
// identities, Hodge decomposition sweeps, penalized Dirichlet/Neumann/Cauchy
// convergence studies, the hollow-sphere point source, and indicial branch
// fits) and writes CSV tables plus JSON summaries.
//
// Exit codes: 0 all checks pass, 1 at least one check failed, 2 configuration
// error, 3 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "homhodge/config.hpp"
#include "homhodge/harness.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitNumericalError = 3;

struct KindInfo {
    homhodge::ExperimentKind kind;
    const char* description;
};

constexpr KindInfo kKinds[] = {
    {homhodge::ExperimentKind::DecIdentities,
     "nilpotency, chain-map, adjointness and conjugation identity sweep"},
    {homhodge::ExperimentKind::Hodge,
     "cohomology dimensions, harmonic transport and Hodge decomposition sweep"},
    {homhodge::ExperimentKind::Dirichlet, "penalized Dirichlet convergence family (1D)"},
    {homhodge::ExperimentKind::Neumann, "penalized Neumann convergence family (1D)"},
    {homhodge::ExperimentKind::Cauchy, "consistent-Cauchy convergence family (radial)"},
    {homhodge::ExperimentKind::PointSource,
     "hollow-sphere point source: fields, energy, R sweep, divergence control"},
    {homhodge::ExperimentKind::BranchFit, "inner Euler-Cauchy branch exponent fits"},
    {homhodge::ExperimentKind::Convergence, "all three penalization families"},
};

int run_kind(homhodge::ExperimentKind kind, const std::string& config_path,
             const std::string& out_override, long seed_override, bool seed_given) {
    homhodge::ExperimentConfig config;
    try {
        if (!config_path.empty()) {
            std::ifstream is(config_path);
            if (!is) throw homhodge::ConfigError("cannot read config file " + config_path);
            nlohmann::json j = nlohmann::json::parse(is);
            config = homhodge::parse_config(j);
            if (config.kind != kind)
                throw homhodge::ConfigError("config kind does not match the subcommand");
        } else {
            config = homhodge::default_config(kind);
        }
        if (seed_given) config.seed = seed_override;
        homhodge::validate(config);
    } catch (const homhodge::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    }

    std::filesystem::path out = !out_override.empty()
                                    ? std::filesystem::path(out_override)
                                    : (!config.out_dir.empty()
                                           ? std::filesystem::path(config.out_dir)
                                           : std::filesystem::path("out") /
                                                 homhodge::to_string(kind));
    try {
        homhodge::RunResult result = homhodge::run_experiment(config, out);
        homhodge::print_report(std::cout, result);
        std::cout << "outputs in " << out.string() << "\n";
        return result.pass ? kExitPass : kExitCheckFailed;
    } catch (const homhodge::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumericalError;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"homothetic Hodge calculus and penalized interface solvers"};
    app.require_subcommand(0, 1);

    bool list = false;
    app.add_flag("--list", list, "list the built-in validation suites and exit");

    struct SubArgs {
        std::string config, out;
        long seed = 0;
        bool seed_given = false;
    };
    std::vector<std::pair<homhodge::ExperimentKind, std::shared_ptr<SubArgs>>> subs;
    for (const auto& info : kKinds) {
        auto args = std::make_shared<SubArgs>();
        CLI::App* sub = app.add_subcommand(homhodge::to_string(info.kind), info.description);
        sub->add_option("--config", args->config, "JSON config file (defaults are built in)");
        sub->add_option("--out", args->out, "output directory");
        sub->add_option("--seed", args->seed, "RNG seed override")
            ->each([args](const std::string&) { args->seed_given = true; });
        subs.emplace_back(info.kind, args);
    }

    CLI11_PARSE(app, argc, argv);

    if (list) {
        for (const auto& info : kKinds)
            std::cout << homhodge::to_string(info.kind) << "  -  " << info.description << "\n";
        return kExitPass;
    }
    for (auto& [kind, args] : subs) {
        CLI::App* sub = app.get_subcommand(homhodge::to_string(kind));
        if (sub->parsed())
            return run_kind(kind, args->config, args->out, args->seed, args->seed_given);
    }
    std::cout << app.help();
    return kExitPass;
}
