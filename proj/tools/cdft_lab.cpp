// Command-line front end: solve, counterexample, functional.
#include "cdft/commands.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

int main(int argc, char** argv) {
    CLI::App app{"Current-density functional laboratory: magnetic ground states, "
                 "Hohenberg-Kohn functionals and the eps-sweep counterexample"};
    app.require_subcommand(1);

    cdft::CommandOptions opt;
    std::string config;
    std::string out;
    std::string rho;
    std::string current;
    std::uint64_t seed = 0;

    const auto common = [&](CLI::App* sub) {
        sub->add_option("--config", config, "JSON run configuration");
        sub->add_option("--out", out, "output directory (overrides output_dir)");
        sub->add_option("--seed", seed, "eigensolver seed (overrides solver.seed)");
    };
    CLI::App* solve = app.add_subcommand("solve", "lowest eigenpairs and ground-state densities");
    common(solve);
    CLI::App* counter = app.add_subcommand("counterexample", "eps sweep and verdicts");
    common(counter);
    counter->add_flag("--refine", opt.refine, "repeat the sweep at 2n-1 nodes and report the order");
    CLI::App* functional = app.add_subcommand("functional", "functionals of a (rho, j) pair from files");
    common(functional);
    functional->add_option("--rho", rho, "scalar field CSV")->required();
    functional->add_option("--current", current, "vector field CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return cdft::kExitConfig;
    }

    if (!config.empty()) opt.config = config;
    if (!out.empty()) opt.out = out;
    if (!rho.empty()) opt.rho = rho;
    if (!current.empty()) opt.current = current;
    for (CLI::App* sub : {solve, counter, functional}) {
        if (sub->parsed() && sub->count("--seed") > 0) opt.seed = seed;
    }

    if (solve->parsed()) return cdft::cmd_solve(opt, std::cout, std::cerr);
    if (counter->parsed()) return cdft::cmd_counterexample(opt, std::cout, std::cerr);
    return cdft::cmd_functional(opt, std::cout, std::cerr);
}
