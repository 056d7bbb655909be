// fslwalk: discrete-time quantum walks on Fock-state lattices.
//
//   fslwalk run --scenario fig2b [--out DIR] [--plot] [--seed N]
//   fslwalk run --config FILE [--out DIR] [--plot] [--seed N]
//   fslwalk validate --config FILE | --scenario NAME
//   fslwalk list-scenarios
//
// Exit code 0 on success; nonzero with an error JSON line on stderr.

#include "fsl/scenario.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>

namespace {

fsl::scenario::ScenarioConfig resolve_config(const std::string& scenario_name,
                                             const std::string& config_file) {
    if (!scenario_name.empty() && !config_file.empty())
        throw std::invalid_argument("pass either --scenario or --config, not both");
    if (!scenario_name.empty()) return fsl::scenario::preset(scenario_name);
    if (!config_file.empty()) return fsl::scenario::load_config(config_file);
    throw std::invalid_argument("one of --scenario or --config is required");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete-time quantum walk simulator on Fock-state lattices"};
    app.set_version_flag("--version", std::string("fslwalk ") + fsl::scenario::kVersion);
    app.require_subcommand(1);

    std::string scenario_name, config_file, out_dir = "out";
    bool plot = false;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int threads = 0;

    CLI::App* run = app.add_subcommand("run", "execute a scenario");
    run->add_option("--scenario", scenario_name, "preset name (see list-scenarios)");
    run->add_option("--config", config_file, "config file path");
    run->add_option("--out", out_dir, "output directory")->capture_default_str();
    run->add_flag("--plot", plot, "also write SVG plots");
    run->add_option("--seed", seed, "override the scenario seed")
        ->each([&](const std::string&) { seed_given = true; });
    run->add_option("--threads", threads, "worker threads for noise ensembles (0 = auto)");

    CLI::App* validate = app.add_subcommand("validate", "dry-run checks of a scenario");
    validate->add_option("--scenario", scenario_name, "preset name");
    validate->add_option("--config", config_file, "config file path");

    CLI::App* list = app.add_subcommand("list-scenarios", "list preset scenarios");

    CLI11_PARSE(app, argc, argv);

    try {
        if (list->parsed()) {
            for (const auto& name : fsl::scenario::preset_names()) std::cout << name << "\n";
            return 0;
        }
        fsl::scenario::ScenarioConfig cfg = resolve_config(scenario_name, config_file);
        if (seed_given) {
            cfg.seed = seed;
            cfg.seed_set = true;
        }
        if (validate->parsed()) {
            fsl::scenario::ValidationReport rep = fsl::scenario::validate_scenario(cfg);
            for (const auto& v : rep.variants) {
                std::cout << "variant " << (v.label.empty() ? "(default)" : v.label) << ": "
                          << v.site_count << " sites x " << v.coin_dim
                          << " coin states = " << v.total_dimension << " amplitudes";
                if (v.suggested_n_max > 0) std::cout << ", n_max -> " << v.suggested_n_max;
                std::cout << ", est. generator norm " << v.est_generator_norm
                          << ", est. runtime " << v.est_seconds << " s\n";
                for (const auto& n : v.notes) std::cout << "  note: " << n << "\n";
            }
            for (const auto& e : rep.errors) std::cout << "error: " << e << "\n";
            std::cout << (rep.ok ? "ok" : "invalid") << "\n";
            return rep.ok ? 0 : 2;
        }
        // run
        for (const auto& v : cfg.variants)
            if (v.noise && !cfg.seed_set)
                throw std::invalid_argument("noise scenarios require a seed");
        fsl::scenario::RunOptions opts;
        opts.out_dir = out_dir;
        opts.plot = plot;
        opts.threads = threads;
        fsl::scenario::RunResult res = fsl::scenario::run_scenario(cfg, opts);
        std::cout << "wrote " << out_dir << " (config " << res.config_hash << ")\n";
        return 0;
    } catch (const std::exception& ex) {
        nlohmann::json err{{"error", ex.what()}};
        std::cerr << err.dump() << "\n";
        return 1;
    }
}
