#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dilaton/run_config.hpp"

int main(int argc, char** argv) {
    CLI::App app{
        "Light propagation and atom-interferometer phases in gravity and "
        "dilaton backgrounds"};
    app.require_subcommand(1);

    struct Options {
        std::optional<std::string> config;
        std::vector<std::string> overrides;
        std::optional<std::string> out;
        std::optional<int> jobs;
    };

    const std::vector<std::pair<std::string, dilaton::cli::Scenario>> scenarios = {
        {"phase", dilaton::cli::Scenario::phase},
        {"gradiometer", dilaton::cli::Scenario::gradiometer},
        {"eep", dilaton::cli::Scenario::eep},
        {"darkmatter", dilaton::cli::Scenario::darkmatter},
        {"optics-grid", dilaton::cli::Scenario::optics_grid},
        {"validate", dilaton::cli::Scenario::validate},
    };
    const char* descriptions[] = {
        "Mach-Zehnder phase breakdown: engine vs closed form vs quadrature",
        "Differential phase of two vertically separated interferometers",
        "Two-species differential phase theta_k and its k-reversal",
        "Oscillating-background differential phase and signal amplitude",
        "Spacetime grid of eikonal phase, amplitude and wave vector (CSV)",
        "Run the engine/closed-form/oracle validation battery",
    };

    std::vector<Options> options(scenarios.size());
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        CLI::App* sub = app.add_subcommand(scenarios[i].first, descriptions[i]);
        sub->add_option("--config", options[i].config, "JSON config file");
        sub->add_option("--set", options[i].overrides,
                        "Override a config value, dotted.path=json_value (repeatable)");
        sub->add_option("--out", options[i].out, "Output CSV path (default: stdout)");
        sub->add_option("--jobs", options[i].jobs,
                        "Worker threads for sweeps (default: DILATON_SIM_JOBS or all cores)");
    }

    CLI11_PARSE(app, argc, argv);

    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        if (app.get_subcommand(scenarios[i].first)->parsed()) {
            return dilaton::cli::run_cli(scenarios[i].second, options[i].config,
                                         options[i].overrides, options[i].out,
                                         options[i].jobs, std::cout, std::cerr);
        }
    }
    std::cerr << "no scenario selected\n";
    return 2;
}
