#include "commands.hpp"
#include "config.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv) {
    using namespace triq::cli;

    CLI::App app{"Three-qubit entanglement decay and protection experiments"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"decay", "Entanglement decay under the Lindblad model"},
        {"protect", "Paired DD-protected and free runs under the OU bath"},
        {"calibrate", "Fit the OU amplitude to the configured T2"},
        {"tomo", "Seven-setting readout and maximum-likelihood reconstruction"},
        {"schedule-dump", "Write one cycle of the configured DD sequence"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "Config file (flat dotted keys)")->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "Output directory");
        sub->add_option("--seed", seed, "Master seed, overrides config and TRIQ_SEED");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kConfigError;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    ExperimentConfig cfg;
    try {
        RawConfig raw = config_path.empty() ? RawConfig{} : load_config_file(config_path);
        apply_env_overrides(raw, [](const char* name) { return std::getenv(name); });
        if (seed) set_override(raw, "seed", std::to_string(*seed), "--seed");
        cfg = resolve(raw);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    }
    RunContext ctx;
    ctx.out_dir = out_dir;
    ctx.log = &std::cout;
    return run_command(command, cfg, ctx, std::cerr);
}
