#include "treecover/pipeline.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"coherent cover towers and tree embeddings for finite metric spaces"};
    app.require_subcommand(1);
    treecover::PipelineConfig config;

    auto add_space = [&](CLI::App* cmd) {
        cmd->add_option("--space", config.space,
                        "matrix:FILE, edges:FILE, singleton, path:m, grid:m:d, "
                        "or random-graph:n:p:seed");
    };
    auto add_out = [&](CLI::App* cmd) {
        cmd->add_option("--out", config.out_dir, "artifact directory");
    };
    auto add_pairs = [&](CLI::App* cmd) {
        cmd->add_option("--pairs", config.pairs, "auto, exhaustive, or sample:N");
        cmd->add_option("--seed", config.seed, "seed for pair sampling");
    };

    CLI::App* validate = app.add_subcommand("validate", "check a space satisfies the metric axioms");
    add_space(validate);

    CLI::App* build = app.add_subcommand("build", "build the cover tower, forest, and vertex map");
    add_space(build);
    build->add_option("--generator", config.generator,
                      "cover generator: interval, product, greedy, or auto");
    build->add_option("--fprime", config.control,
                      "control function bounding cover diameters: linear:a:b, const:b, "
                      "or empirical:r1,r2,...");
    build->add_option("--growth-constant", config.growth_constant,
                      "multiplier in the level scale recurrence");
    build->add_option("--colors", config.colors,
                      "expected color count (must match the generator)");
    build->add_option("--basepoint", config.basepoint, "point index anchoring the tower");
    add_pairs(build);
    add_out(build);

    CLI::App* verify = app.add_subcommand("verify", "re-check all certificates on built artifacts");
    add_space(verify);
    add_pairs(verify);
    add_out(verify);

    CLI::App* exp = app.add_subcommand("export", "emit the forest from a built tower");
    add_space(exp);
    add_out(exp);
    exp->add_option("--format", config.format, "native, dot, or both");

    CLI::App* report = app.add_subcommand("report", "emit the distortion report and pair table");
    add_space(report);
    add_pairs(report);
    add_out(report);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // CLI11 picks its own exit codes; fold every real failure into the
        // input-error status and keep 0 for --help.
        return app.exit(e) == 0 ? 0 : 2;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    return treecover::run_command(command, config, std::cout);
}
