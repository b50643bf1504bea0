#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config_io.hpp"

int main(int argc, char** argv) {
    CLI::App app{"hybrid repeater chain analytics and Monte-Carlo simulation"};
    app.require_subcommand(1);

    rlab::cli::AnalyzeOptions analyze_opts;
    auto* analyze = app.add_subcommand(
        "analyze", "fidelity/success-probability tradeoff over a p_c grid");
    analyze->add_option("--eta-sq", analyze_opts.eta_sq, "fiber transmission eta^2")
        ->required();
    analyze->add_option("--pc-min", analyze_opts.pc_min, "first postselection window")
        ->required();
    analyze->add_option("--pc-max", analyze_opts.pc_max, "last postselection window")
        ->required();
    analyze->add_option("--pc-steps", analyze_opts.pc_steps, "grid point count")
        ->required();
    analyze->add_option("--out", analyze_opts.out_path, "CSV output path")->required();

    rlab::cli::SimulateOptions sim_opts;
    bool sim_dump = false;
    auto* simulate =
        app.add_subcommand("simulate", "one Monte-Carlo run of a chain config");
    simulate->add_option("--config", sim_opts.config_path, "chain config JSON");
    simulate->add_option("--seed", sim_opts.seed, "RNG seed (required, no default)");
    simulate->add_option("--out", sim_opts.out_path, "result JSON path");
    simulate->add_flag("--dump-defaults", sim_dump,
                       "print the resolved default config and exit");

    rlab::cli::SweepOptions sweep_opts;
    bool sweep_dump = false;
    auto* sweep =
        app.add_subcommand("sweep", "Monte-Carlo sweep over gate error values");
    sweep->add_option("--config", sweep_opts.config_path, "chain config JSON");
    sweep->add_option("--seed", sweep_opts.seed, "base RNG seed (required)");
    sweep->add_option("--epsilons", sweep_opts.epsilons,
                      "comma-separated gate error values")
        ->delimiter(',');
    sweep->add_option("--runs-per-point", sweep_opts.runs_per_point,
                      "independent runs averaged per point");
    sweep->add_option("--out", sweep_opts.out_path, "CSV output path");
    sweep->add_flag("--dump-defaults", sweep_dump,
                    "print the resolved default config and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    if (*analyze)
        return rlab::cli::cmd_analyze(analyze_opts, std::cout, std::cerr);

    if (*simulate) {
        if (sim_dump) {
            std::cout << rlab::cli::default_config_text();
            return 0;
        }
        if (sim_opts.config_path.empty() || sim_opts.out_path.empty() ||
            simulate->count("--seed") == 0) {
            std::cerr << "error: simulate requires --config, --seed and --out\n";
            return 1;
        }
        return rlab::cli::cmd_simulate(sim_opts, std::cout, std::cerr);
    }

    if (*sweep) {
        if (sweep_dump) {
            std::cout << rlab::cli::default_config_text();
            return 0;
        }
        if (sweep_opts.config_path.empty() || sweep_opts.out_path.empty() ||
            sweep->count("--seed") == 0 || sweep->count("--epsilons") == 0) {
            std::cerr
                << "error: sweep requires --config, --seed, --epsilons and --out\n";
            return 1;
        }
        return rlab::cli::cmd_sweep(sweep_opts, std::cout, std::cerr);
    }

    return 1;
}
