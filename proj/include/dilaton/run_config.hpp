#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace dilaton::cli {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Scenario {
    phase,
    gradiometer,
    eep,
    darkmatter,
    optics_grid,
    validate,
};

Scenario scenario_from_string(const std::string& name);
const char* scenario_name(Scenario s);

// One sweep axis over a dotted config path, e.g. "phase.T_s".
struct SweepAxis {
    std::string param;
    double min = 0.0;
    double max = 0.0;
    int steps = 1;
    bool log_scale = false;

    double value_at(int i) const;
};

struct RunConfig {
    Scenario scenario = Scenario::phase;
    nlohmann::json params;  // scenario parameter tree, unit-suffixed keys
    std::vector<SweepAxis> sweep;
    std::string out_path;  // empty = stdout
    int jobs = 0;          // 0 = decide from env / hardware

    static RunConfig from_json(const nlohmann::json& j);
    static nlohmann::json defaults(Scenario s);
};

// Parses the config file (if any), layers defaults underneath and applies
// --set overrides (dotted paths, JSON-parsed values).
RunConfig load_config(Scenario scenario, const std::optional<std::string>& path,
                      const std::vector<std::string>& overrides,
                      const std::optional<std::string>& out,
                      std::optional<int> jobs);

struct RunResult {
    int exit_code = 0;        // 0 ok, 1 validation failure
    std::string csv;          // full emitted table
    std::string summary;      // human-readable one-liner(s)
};

// Executes the scenario: expands the sweep Cartesian product, evaluates
// rows on a worker pool, emits CSV deterministically in index order.
// Throws config_error for malformed configs and physics_error for violated
// physical preconditions; the CLI maps those to exit codes 2 and 3.
RunResult run(const RunConfig& config);

// Convenience wrapper used by the binary: catches the documented error
// classes, prints to err and returns the exit status.
int run_cli(Scenario scenario, const std::optional<std::string>& config_path,
            const std::vector<std::string>& overrides,
            const std::optional<std::string>& out, std::optional<int> jobs,
            std::ostream& out_stream, std::ostream& err_stream);

int default_jobs();  // DILATON_SIM_JOBS env var, else hardware concurrency

}  // namespace dilaton::cli
