#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mottbox/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"mottbox: apparatus hidden variables and Mott's cloud chamber"};
    std::string config;
    mottbox::cli::Overrides overrides;
    std::uint64_t seed = 0;
    std::string out_dir;

    app.add_option("config", config, "experiment configuration (JSON)")->required();
    auto* seed_opt = app.add_option("--seed", seed, "override the configuration seed");
    auto* dir_opt = app.add_option("--out-dir", out_dir, "directory for output files (default: .)");
    app.add_option("--threads", overrides.threads, "worker cap; results do not depend on it (0: all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : mottbox::cli::kExitValidation;
    }
    if (*seed_opt) overrides.seed = seed;
    if (*dir_opt) overrides.out_dir = out_dir;
    return mottbox::cli::run_file(config, overrides, std::cout, std::cerr);
}
