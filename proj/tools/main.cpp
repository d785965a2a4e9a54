#include "cli.hpp"

#include <CLI11/CLI11.hpp>

#include <iostream>
#include <map>

int main(int argc, char** argv) {
    using namespace syncnet::cli;
    CLI::App app{"syncnet: synchronization analysis for networks over switching digraphs"};
    app.require_subcommand(1);

    RunConfig cfg;
    double dt = 0, horizon = 0, phi = 0, gamma = 0;
    std::uint64_t seed = 0;

    auto add_common = [&](CLI::App* sub, bool with_target) {
        if (with_target) sub->add_option("preset", cfg.target, "Preset scenario name");
        sub->add_option("--config", cfg.config, "Input JSON file");
        sub->add_option("--out", cfg.out, "Output directory")->capture_default_str();
        sub->add_option("--dt", dt, "Integration step");
        sub->add_option("--horizon", horizon, "Simulation horizon");
        sub->add_option("--phi", phi, "Coupling strength override");
        sub->add_option("--gamma", gamma, "Contraction target in (0, 1)");
        sub->add_option("--seed", seed, "Initial-condition seed (overrides SYNCNET_SEED)");
        sub->add_option("--jobs", cfg.jobs, "Worker threads for sweep")->capture_default_str();
    };
    const std::map<std::string, std::string> about{
        {"analyze-graph", "Reaches, kernel vectors and spectra of each graph (analysis.json)"},
        {"check-condition", "Convergence condition for a linear network (condition.json); exit 2 if unsatisfied"},
        {"simulate", "Integrate a scenario; writes trajectory CSV/SVG, switch events and summary.json"},
        {"reproduce", "Simulate a preset and compare the verdict with its expectation; exit 2 on mismatch"},
        {"sweep", "Convergence rate over a grid of coupling strengths (sweep.csv)"},
    };
    for (const auto& name : command_names()) {
        auto* sub = app.add_subcommand(name, about.at(name));
        add_common(sub, true);
        if (name == "sweep") sub->add_option("--phis", cfg.phis, "Coupling grid")->delimiter(',');
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kInputError;
    }
    cfg.command = app.get_subcommands().front()->get_name();
    auto* sub = app.get_subcommands().front();
    if (sub->count("--dt")) cfg.dt = dt;
    if (sub->count("--horizon")) cfg.horizon = horizon;
    if (sub->count("--phi")) cfg.phi = phi;
    if (sub->count("--gamma")) cfg.gamma = gamma;
    if (sub->count("--seed")) cfg.seed = seed;
    return run(cfg, std::cout, std::cerr);
}
