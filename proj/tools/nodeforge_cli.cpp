#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nodeforge/commands.hpp"
#include "nodeforge/errors.hpp"

namespace {

struct CliFlags {
    std::string config_path;
    std::string library_file;
    std::string trajectory_file;
    std::string run_dir;
    std::string out;
    std::string delta_mode;
    double alpha = -1.0;
    std::int64_t seed = -1;
    int epochs = -1;
    int n = -1;
    int rounds = -1;
    int jobs = -1;
};

void add_common_flags(CLI::App* cmd, CliFlags& flags, bool wants_config = true) {
    if (wants_config) {
        cmd->add_option("--config", flags.config_path, "Run configuration JSON file")
            ->required();
    }
    cmd->add_option("--seed", flags.seed, "Deterministic sampling seed");
    cmd->add_option("--alpha", flags.alpha, "Quality mixing weight in [0, 1]");
    cmd->add_option("--epochs", flags.epochs, "Optimization epochs K");
    cmd->add_option("--n", flags.n, "Context buffer size N");
    cmd->add_option("--rounds", flags.rounds, "Search rounds per session");
    cmd->add_option("--delta-mode", flags.delta_mode, "Relative gain mode: magnitude|literal");
    cmd->add_option("--jobs", flags.jobs, "Parallel trajectory workers");
    cmd->add_option("--out", flags.out, "Run directory");
}

nodeforge::RunConfig merged_config(const CliFlags& flags) {
    nodeforge::RunConfig config = nodeforge::load_config(flags.config_path);
    if (flags.seed >= 0) config.seed = static_cast<std::uint64_t>(flags.seed);
    if (flags.alpha >= 0.0) config.alpha = flags.alpha;
    if (flags.epochs >= 0) config.epochs = flags.epochs;
    if (flags.n >= 0) config.n = flags.n;
    if (flags.rounds >= 0) config.rounds = flags.rounds;
    if (flags.jobs >= 0) config.jobs = flags.jobs;
    if (!flags.delta_mode.empty()) config.delta_mode = flags.delta_mode;
    if (!flags.out.empty()) config.out = flags.out;
    nodeforge::validate_config(config);
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nodeforge: two-stage node library synthesis and optimization"};
    app.require_subcommand(1);

    CliFlags flags;
    CLI::App* generate = app.add_subcommand(
        "generate", "Harvest knowledge and synthesize the initial node library");
    add_common_flags(generate, flags);

    CLI::App* optimize =
        app.add_subcommand("optimize", "Run reward-guided refinement epochs on a library");
    optimize->add_option("--library", flags.library_file, "Node library JSON file")->required();
    add_common_flags(optimize, flags);

    CLI::App* run = app.add_subcommand("run", "Execute a library over a dataset");
    run->add_option("--library", flags.library_file, "Node library JSON file")->required();
    add_common_flags(run, flags);

    CLI::App* score = app.add_subcommand("score", "Recompute rewards for a dumped trajectory");
    score->add_option("--trajectory", flags.trajectory_file, "Trajectory JSON file")
        ->required();
    add_common_flags(score, flags);

    CLI::App* inspect = app.add_subcommand("inspect", "Summarize a run directory");
    inspect->add_option("run_dir", flags.run_dir, "Run directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& error) {
        const int code = app.exit(error);
        return code == 0 ? 0 : 2;
    }

    try {
        if (generate->parsed()) {
            return nodeforge::cmd_generate(merged_config(flags), std::cout, std::cerr);
        }
        if (optimize->parsed()) {
            return nodeforge::cmd_optimize(merged_config(flags), flags.library_file, std::cout,
                                           std::cerr);
        }
        if (run->parsed()) {
            return nodeforge::cmd_run(merged_config(flags), flags.library_file, std::cout,
                                      std::cerr);
        }
        if (score->parsed()) {
            return nodeforge::cmd_score(merged_config(flags), flags.trajectory_file, std::cout,
                                        std::cerr);
        }
        if (inspect->parsed()) {
            return nodeforge::cmd_inspect(flags.run_dir, std::cout, std::cerr);
        }
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return nodeforge::exit_code_for(error);
    }
    return 2;
}
