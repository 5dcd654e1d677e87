// Command-line front end: batch subcommands over a key=value run config.

#include <CLI11.hpp>

#include <iostream>

#include "sgf/driver.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Spectral simulator and verification harness for stochastic "
                 "second-grade fluids on the torus"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int workers = 0;

    for (const std::string& name : sgf::subcommand_names()) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "run configuration file")->required();
        sub->add_option("--set", overrides, "override: section.key=value")->take_all();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed, "master seed")->each([&](const std::string&) {
            seed_given = true;
        });
        sub->add_option("--workers", workers, "worker thread count");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        sgf::RunConfig rc = sgf::parse_config(config_path, overrides);
        if (!out_dir.empty()) rc.out_dir = out_dir;
        if (seed_given) rc.seed = seed;
        if (workers > 0) rc.workers = workers;
        return sgf::run_subcommand(app.get_subcommands().front()->get_name(), rc);
    } catch (const sgf::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return sgf::kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return sgf::kExitRuntimeError;
    }
}
