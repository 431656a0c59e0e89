#include "dilaton/run_config.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "dilaton/csv.hpp"
#include "dilaton/optics.hpp"
#include "dilaton/oracle.hpp"
#include "dilaton/validation.hpp"

namespace dilaton::cli {

using nlohmann::json;

Scenario scenario_from_string(const std::string& name) {
    if (name == "phase") return Scenario::phase;
    if (name == "gradiometer") return Scenario::gradiometer;
    if (name == "eep") return Scenario::eep;
    if (name == "darkmatter") return Scenario::darkmatter;
    if (name == "optics-grid" || name == "optics_grid") return Scenario::optics_grid;
    if (name == "validate") return Scenario::validate;
    throw config_error("unknown scenario: " + name);
}

const char* scenario_name(Scenario s) {
    switch (s) {
        case Scenario::phase: return "phase";
        case Scenario::gradiometer: return "gradiometer";
        case Scenario::eep: return "eep";
        case Scenario::darkmatter: return "darkmatter";
        case Scenario::optics_grid: return "optics-grid";
        case Scenario::validate: return "validate";
    }
    return "?";
}

double SweepAxis::value_at(int i) const {
    if (steps == 1) return min;
    const double f = static_cast<double>(i) / (steps - 1);
    if (log_scale) return std::exp(std::log(min) + f * (std::log(max) - std::log(min)));
    return min + f * (max - min);
}

namespace {

json constants_defaults(double g) {
    return json{{"c_m_per_s", 299792458.0},
                {"hbar_J_s", 1.054571817e-34},
                {"g_m_per_s2", g}};
}

// Dotted-path access into the parameter tree.
json* resolve_path(json& root, const std::string& path, bool create) {
    json* node = &root;
    std::size_t begin = 0;
    while (begin <= path.size()) {
        const std::size_t dot = path.find('.', begin);
        const std::string key = path.substr(begin, dot == std::string::npos
                                                       ? std::string::npos
                                                       : dot - begin);
        if (key.empty()) return nullptr;
        if (dot == std::string::npos) {
            if (!node->is_object()) return nullptr;
            if (!create && !node->contains(key)) return nullptr;
            return &(*node)[key];
        }
        if (!node->is_object()) return nullptr;
        if (!node->contains(key)) {
            if (!create) return nullptr;
            (*node)[key] = json::object();
        }
        node = &(*node)[key];
        begin = dot + 1;
    }
    return nullptr;
}

const json* resolve_path(const json& root, const std::string& path) {
    return resolve_path(const_cast<json&>(root), path, false);
}

double require_number(const json& params, const std::string& path) {
    const json* node = resolve_path(params, path);
    if (!node || !node->is_number())
        throw config_error("missing or non-numeric config key: " + path);
    return node->get<double>();
}

// Deep merge: overlay wins, objects merge recursively.
json merge(const json& base, const json& overlay) {
    if (!base.is_object() || !overlay.is_object()) return overlay;
    json out = base;
    for (auto it = overlay.begin(); it != overlay.end(); ++it) {
        if (out.contains(it.key())) {
            out[it.key()] = merge(out[it.key()], it.value());
        } else {
            out[it.key()] = it.value();
        }
    }
    return out;
}

void flatten_inputs(const json& node, const std::string& prefix,
                    std::vector<std::string>& names,
                    std::vector<std::string>& values) {
    if (node.is_object()) {
        for (auto it = node.begin(); it != node.end(); ++it) {
            flatten_inputs(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(),
                           names, values);
        }
        return;
    }
    names.push_back(prefix);
    if (node.is_number()) {
        values.push_back(csv::format_double(node.get<double>()));
    } else if (node.is_string()) {
        values.push_back(node.get<std::string>());
    } else if (node.is_boolean()) {
        values.push_back(node.get<bool>() ? "true" : "false");
    } else if (node.is_array()) {
        std::string joined;
        for (const auto& item : node) {
            if (!joined.empty()) joined += ';';
            joined += item.is_string() ? item.get<std::string>() : item.dump();
        }
        values.push_back(joined);
    } else {
        values.push_back(node.dump());
    }
}

PhysicalContext context_from(const json& params) {
    PhysicalContext ctx;
    ctx.c = require_number(params, "constants.c_m_per_s");
    ctx.hbar = require_number(params, "constants.hbar_J_s");
    ctx.g = require_number(params, "constants.g_m_per_s2");
    ctx.validate();
    return ctx;
}

DilatonParams dilaton_from(const json& params, const std::string& prefix) {
    DilatonParams p;
    p.rho0_bar = require_number(params, prefix + ".rho0_bar");
    p.k_rho = require_number(params, prefix + ".k_rho_per_m");
    p.omega_rho = require_number(params, prefix + ".omega_rho_rad_per_s");
    p.phi_rho = require_number(params, prefix + ".phi_rho_rad");
    p.beta_S_bar = require_number(params, prefix + ".beta_S_bar");
    p.d_e = require_number(params, prefix + ".d_e");
    p.validate();
    return p;
}

}  // namespace

json RunConfig::defaults(Scenario s) {
    json d;
    switch (s) {
        case Scenario::phase:
            d["constants"] = constants_defaults(9.81);
            d["phase"] = json{{"T_s", 0.5},
                              {"k_per_m", 1.61e7},
                              {"mass_kg", 1.44316060e-25},
                              {"beta", 0.0},
                              {"rho0", 0.0},
                              {"z0_m", 0.0},
                              {"v0_m_per_s", 0.0},
                              {"omega_rho_rad_per_s", 0.0},
                              {"k_rho_per_m", 0.0},
                              {"phi_rho_rad", 0.0}};
            break;
        case Scenario::gradiometer:
            d["constants"] = constants_defaults(9.81);
            d["gradiometer"] = json{{"T_s", 0.5},
                                    {"k_per_m", 1.61e7},
                                    {"mass_kg", 1.44316060e-25},
                                    {"beta", 0.0},
                                    {"v0_m_per_s", 0.0},
                                    {"ell_m", 1000.0},
                                    {"delta_g_m_per_s2", 0.0}};
            break;
        case Scenario::eep:
            d["constants"] = constants_defaults(9.81);
            d["eep"] = json{{"T_s", 0.5},
                            {"k_per_m", 1.61e7},
                            {"delta_k_per_m", 0.0},
                            {"mass_kg", 1.44316060e-25},
                            {"delta_m_kg", 0.0},
                            {"beta_a", 0.0},
                            {"beta_b", 0.0},
                            {"v0_m_per_s", 0.0},
                            {"delta_v0_m_per_s", 0.0},
                            {"z0_m", 0.0},
                            {"delta_z0_m", 0.0}};
            break;
        case Scenario::darkmatter:
            d["constants"] = constants_defaults(0.0);
            d["darkmatter"] = json{{"T_s", 1.0},
                                   {"k_per_m", 1.61e7},
                                   {"mass_kg", 1.44316060e-25},
                                   {"v0_m_per_s", 0.0},
                                   {"ell_m", 1.0e6},
                                   {"rho0", 1e-6},
                                   {"omega_rho_rad_per_s", 1.0},
                                   {"k_rho_per_m", 1e-9},
                                   {"phi_rho_rad", 0.0},
                                   {"sa_samples", 0}};
            break;
        case Scenario::optics_grid:
            // Exaggerated demonstration values in natural units (c = 1):
            // g L/(2c^2) = 0.2, d_e beta_S = 0.3, d_e rho0 = 0.02,
            // k_rho L = 5, omega_rho L/c = 40, q = 0.
            d["constants"] = json{{"c_m_per_s", 1.0},
                                  {"hbar_J_s", 1.0},
                                  {"g_m_per_s2", 0.4}};
            d["optics_grid"] = json{{"L_m", 1.0},
                                    {"t_min_s", 0.0},
                                    {"t_max_s", 1.0},
                                    {"z_min_m", 0.0},
                                    {"z_max_m", 1.0},
                                    {"nt", 200},
                                    {"nz", 200},
                                    {"kx_per_m", 0.0},
                                    {"ky_per_m", 0.0},
                                    {"kz_per_m", 50.0},
                                    {"a_in", 1.0},
                                    {"dilaton", json{{"rho0_bar", 0.02},
                                                     {"k_rho_per_m", 5.0},
                                                     {"omega_rho_rad_per_s", 40.0},
                                                     {"phi_rho_rad", 0.0},
                                                     {"beta_S_bar", 0.3},
                                                     {"d_e", 1.0}}}};
            break;
        case Scenario::validate:
            d["validate"] = json{{"seed", 20240915},
                                 {"draws_triangulation", 50},
                                 {"draws_k_reversal", 1000},
                                 {"draws_dm_limits", 100},
                                 {"draws_phi_sa", 100},
                                 {"draws_closure", 100},
                                 {"phi_sa_samples", 10000},
                                 {"rel_tol", 1e-8}};
            break;
    }
    return d;
}

RunConfig RunConfig::from_json(const json& j) {
    RunConfig config;
    if (!j.is_object()) throw config_error("config root must be a JSON object");
    if (j.contains("scenario")) {
        if (!j["scenario"].is_string())
            throw config_error("scenario must be a string");
        config.scenario = scenario_from_string(j["scenario"].get<std::string>());
    }
    config.params = merge(defaults(config.scenario), j);
    config.params.erase("scenario");
    config.params.erase("sweep");
    config.params.erase("out");
    config.params.erase("jobs");

    if (j.contains("sweep")) {
        if (!j["sweep"].is_array()) throw config_error("sweep must be an array");
        for (const auto& axis_json : j["sweep"]) {
            SweepAxis axis;
            if (!axis_json.contains("param") || !axis_json["param"].is_string())
                throw config_error("sweep axis needs a string 'param'");
            axis.param = axis_json["param"].get<std::string>();
            axis.min = axis_json.value("min", 0.0);
            axis.max = axis_json.value("max", axis.min);
            axis.steps = axis_json.value("steps", 1);
            const std::string scale = axis_json.value("scale", "linear");
            if (scale == "log") {
                axis.log_scale = true;
            } else if (scale != "linear") {
                throw config_error("sweep scale must be 'linear' or 'log'");
            }
            if (axis.steps < 1) throw config_error("sweep steps must be >= 1");
            if (axis.log_scale && !(axis.min > 0.0 && axis.max > 0.0))
                throw config_error("log sweep bounds must be positive");
            const json* target = resolve_path(config.params, axis.param);
            if (!target || !target->is_number())
                throw config_error("sweep axis references unknown parameter: " + axis.param);
            config.sweep.push_back(axis);
        }
    }
    if (j.contains("out")) config.out_path = j["out"].get<std::string>();
    if (j.contains("jobs")) config.jobs = j["jobs"].get<int>();
    return config;
}

RunConfig load_config(Scenario scenario, const std::optional<std::string>& path,
                      const std::vector<std::string>& overrides,
                      const std::optional<std::string>& out,
                      std::optional<int> jobs) {
    json j = json::object();
    if (path) {
        std::ifstream in(*path);
        if (!in) throw config_error("cannot open config file: " + *path);
        try {
            in >> j;
        } catch (const json::parse_error& e) {
            throw config_error(std::string("config parse error: ") + e.what());
        }
    }
    j["scenario"] = scenario_name(scenario);
    RunConfig config = RunConfig::from_json(j);
    config.scenario = scenario;

    for (const std::string& assignment : overrides) {
        const std::size_t eq = assignment.find('=');
        if (eq == std::string::npos || eq == 0)
            throw config_error("--set expects key=value, got: " + assignment);
        const std::string key = assignment.substr(0, eq);
        const std::string raw = assignment.substr(eq + 1);
        json value;
        try {
            value = json::parse(raw);
        } catch (const json::parse_error&) {
            value = raw;  // unquoted strings pass through
        }
        json* node = resolve_path(config.params, key, true);
        if (!node) throw config_error("bad --set path: " + key);
        *node = value;
    }
    if (out) config.out_path = *out;
    if (jobs) config.jobs = *jobs;
    return config;
}

int default_jobs() {
    if (const char* env = std::getenv("DILATON_SIM_JOBS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

namespace {

struct ScenarioTable {
    std::vector<std::string> output_columns;
    // Computes the output cells for one fully substituted parameter tree.
    std::function<std::vector<double>(const json&)> evaluate;
};

ScenarioTable make_phase_table() {
    ScenarioTable table;
    table.output_columns = {
        "phi0_engine_rad", "wave_vector_mod_engine_rad", "dilaton_linear_engine_rad",
        "dilaton_oscillation_engine_rad", "fsl_engine_rad", "total_engine_rad",
        "phi0_closed_rad", "wave_vector_closed_rad", "beta_term_closed_rad",
        "fsl_closed_rad", "total_closed_rad", "dilaton_linear_oracle_rad",
        "rel_dev_phi0", "rel_dev_wave_vector", "rel_dev_dilaton_linear",
        "rel_dev_fsl", "rel_dev_total"};
    table.evaluate = [](const json& params) {
        const PhysicalContext ctx = context_from(params);
        forms::SinglePhaseParams p;
        p.T = require_number(params, "phase.T_s");
        p.k = require_number(params, "phase.k_per_m");
        p.species.m = require_number(params, "phase.mass_kg");
        p.species.beta = require_number(params, "phase.beta");
        p.species.rho0 = require_number(params, "phase.rho0");
        p.z0 = require_number(params, "phase.z0_m");
        p.v0 = require_number(params, "phase.v0_m_per_s");
        p.ctx = ctx;

        DilatonParams dilaton;
        dilaton.k_rho = require_number(params, "phase.k_rho_per_m");
        dilaton.omega_rho = require_number(params, "phase.omega_rho_rad_per_s");
        dilaton.phi_rho = require_number(params, "phase.phi_rho_rad");
        dilaton.validate();

        const geometry::InterferometerSpec spec = geometry::mach_zehnder(
            p.T, p.k, p.species, p.z0, p.v0, dilaton, ctx);
        using engine::PerturbationTerm;
        constexpr PerturbationTerm kTerms[] = {
            PerturbationTerm::wave_vector_mod, PerturbationTerm::dilaton_linear,
            PerturbationTerm::dilaton_oscillation, PerturbationTerm::fsl};
        const engine::PhaseBreakdown breakdown = engine::total_phase(spec, kTerms);
        const forms::SinglePhaseBreakdown closed = forms::single_phase_breakdown(p);

        oracle::QuadratureConfig quad_cfg;
        const oracle::QuadResult lin_oracle = oracle::quad_term_phase(
            spec, PerturbationTerm::dilaton_linear, quad_cfg);

        const double osc = breakdown.term(PerturbationTerm::dilaton_oscillation);
        const double total_gravity = breakdown.total - osc;
        const double floor = 1e-30;
        return std::vector<double>{
            breakdown.phi0,
            breakdown.term(PerturbationTerm::wave_vector_mod),
            breakdown.term(PerturbationTerm::dilaton_linear),
            osc,
            breakdown.phi_fsl,
            breakdown.total,
            closed.phi0,
            closed.wave_vector_term,
            closed.beta_term,
            closed.fsl_term,
            closed.total,
            lin_oracle.value,
            relative_deviation(breakdown.phi0, closed.phi0, floor),
            relative_deviation(breakdown.term(PerturbationTerm::wave_vector_mod),
                               closed.wave_vector_term, floor),
            relative_deviation(breakdown.term(PerturbationTerm::dilaton_linear),
                               closed.beta_term, floor),
            relative_deviation(breakdown.phi_fsl, closed.fsl_term, floor),
            relative_deviation(total_gravity, closed.total, floor)};
    };
    return table;
}

ScenarioTable make_gradiometer_table() {
    ScenarioTable table;
    table.output_columns = {"delta_phi_rad", "delta_phi_over_kgT2", "g_ell_over_c2"};
    table.evaluate = [](const json& params) {
        const PhysicalContext ctx = context_from(params);
        forms::GradiometerPair pair;
        pair.T = require_number(params, "gradiometer.T_s");
        pair.k = require_number(params, "gradiometer.k_per_m");
        pair.m = require_number(params, "gradiometer.mass_kg");
        pair.v0 = require_number(params, "gradiometer.v0_m_per_s");
        pair.ell = require_number(params, "gradiometer.ell_m");
        pair.delta_g = require_number(params, "gradiometer.delta_g_m_per_s2");
        pair.g = ctx.g;
        const double beta = require_number(params, "gradiometer.beta");
        const double phi = forms::gradiometer_phase(pair, beta, ctx);
        const double kgT2 = pair.k * pair.g * pair.T * pair.T;
        return std::vector<double>{phi, phi / kgT2,
                                   pair.g * pair.ell / (ctx.c * ctx.c)};
    };
    return table;
}

ScenarioTable make_eep_table() {
    ScenarioTable table;
    table.output_columns = {"theta_plus_k", "theta_minus_k", "k_reversal_two_theta",
                            "k_reversal_closed", "rel_dev_k_reversal"};
    table.evaluate = [](const json& params) {
        const PhysicalContext ctx = context_from(params);
        forms::EepPair pair;
        pair.m = require_number(params, "eep.mass_kg");
        pair.delta_m = require_number(params, "eep.delta_m_kg");
        pair.k = require_number(params, "eep.k_per_m");
        pair.delta_k = require_number(params, "eep.delta_k_per_m");
        pair.beta_a = require_number(params, "eep.beta_a");
        pair.beta_b = require_number(params, "eep.beta_b");
        pair.v0 = require_number(params, "eep.v0_m_per_s");
        pair.delta_v0 = require_number(params, "eep.delta_v0_m_per_s");
        pair.z0 = require_number(params, "eep.z0_m");
        pair.delta_z0 = require_number(params, "eep.delta_z0_m");
        const double T = require_number(params, "eep.T_s");
        const double theta_plus = forms::eep_theta(pair, +1, ctx.g, T, ctx);
        const double theta_minus = forms::eep_theta(pair, -1, ctx.g, T, ctx);
        const double two_theta = 0.5 * (theta_plus - theta_minus);
        const double closed = forms::k_reversal(pair, ctx.g, T, ctx);
        return std::vector<double>{theta_plus, theta_minus, two_theta, closed,
                                   relative_deviation(two_theta, closed, 1e-300)};
    };
    return table;
}

ScenarioTable make_darkmatter_table(const json& base_params) {
    ScenarioTable table;
    table.output_columns = {"delta_phi_rad", "delta_phi_over_ckT2", "phi_sa_rad",
                            "phi_sa_over_ckT2", "phi_sa_signed_rad"};
    const int sa_samples =
        static_cast<int>(require_number(base_params, "darkmatter.sa_samples"));
    if (sa_samples > 0) table.output_columns.push_back("phi_sa_numeric_rad");
    table.evaluate = [sa_samples](const json& params) {
        const PhysicalContext ctx = context_from(params);
        forms::DarkMatterPair pair;
        pair.ctx = ctx;
        pair.T = require_number(params, "darkmatter.T_s");
        pair.k = require_number(params, "darkmatter.k_per_m");
        pair.m = require_number(params, "darkmatter.mass_kg");
        pair.v0 = require_number(params, "darkmatter.v0_m_per_s");
        pair.ell = require_number(params, "darkmatter.ell_m");
        pair.rho0 = require_number(params, "darkmatter.rho0");
        pair.omega_rho = require_number(params, "darkmatter.omega_rho_rad_per_s");
        pair.k_rho = require_number(params, "darkmatter.k_rho_per_m");
        pair.phi_rho = require_number(params, "darkmatter.phi_rho_rad");
        const double delta_phi = forms::dm_differential_phase(pair);
        const double sa = forms::dm_signal_amplitude(pair);
        const double ckT2 = sq(ctx.c * pair.k * pair.T);
        std::vector<double> row{delta_phi, delta_phi / ckT2, sa, sa / ckT2,
                                forms::dm_signal_amplitude_signed(pair)};
        if (sa_samples > 0) row.push_back(oracle::phi_sa_numeric(pair, sa_samples));
        return row;
    };
    return table;
}

// Rows are evaluated block-parallel but written to the sink in index
// order: output bytes are deterministic and memory stays bounded by the
// block size for arbitrarily long sweeps.
int run_table_scenario(const RunConfig& config, const ScenarioTable& table,
                       std::ostream& sink, std::string& summary) {
    std::vector<std::string> input_names, input_values;
    flatten_inputs(config.params, "", input_names, input_values);
    {
        std::vector<std::string> cells = input_names;
        cells.insert(cells.end(), table.output_columns.begin(),
                     table.output_columns.end());
        sink << csv::row(cells);
    }

    long total = 1;
    for (const auto& axis : config.sweep) total *= axis.steps;

    const auto point_params = [&](long index) {
        json params = config.params;
        long rest = index;
        for (std::size_t a = config.sweep.size(); a-- > 0;) {
            const SweepAxis& axis = config.sweep[a];
            const int i = static_cast<int>(rest % axis.steps);
            rest /= axis.steps;
            *resolve_path(params, axis.param, true) = axis.value_at(i);
        }
        return params;
    };

    const auto render_row = [&](long i) {
        const json params = point_params(i);
        std::vector<std::string> input_names_i, input_values_i;
        flatten_inputs(params, "", input_names_i, input_values_i);
        const std::vector<double> outputs = table.evaluate(params);
        std::vector<std::string> cells = std::move(input_values_i);
        for (double v : outputs) cells.push_back(csv::format_double(v));
        return csv::row(cells);
    };

    constexpr long kBlock = 4096;
    const int jobs = config.jobs > 0 ? config.jobs : default_jobs();
    std::vector<std::string> block_rows;
    std::exception_ptr first_error;
    std::mutex error_mutex;

    for (long begin = 0; begin < total && !first_error; begin += kBlock) {
        const long end = std::min(total, begin + kBlock);
        block_rows.assign(static_cast<std::size_t>(end - begin), {});
        std::atomic<long> next{begin};
        const auto worker = [&]() {
            for (;;) {
                const long i = next.fetch_add(1);
                if (i >= end) return;
                try {
                    block_rows[static_cast<std::size_t>(i - begin)] = render_row(i);
                } catch (...) {
                    std::scoped_lock lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    next.store(end);
                    return;
                }
            }
        };
        const int n_threads = static_cast<int>(std::min<long>(jobs, end - begin));
        if (n_threads <= 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            pool.reserve(static_cast<std::size_t>(n_threads));
            for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
            for (auto& t : pool) t.join();
        }
        for (const auto& row : block_rows) sink << row;
    }
    if (first_error) std::rethrow_exception(first_error);

    summary = std::to_string(total) + " row(s), scenario " +
              std::string(scenario_name(config.scenario));
    return 0;
}

int run_optics_grid(const RunConfig& config, std::ostream& sink,
                    std::string& summary) {
    if (!config.sweep.empty())
        throw config_error("optics-grid does not support sweep axes; the grid is the scan");
    const json& params = config.params;
    const PhysicalContext ctx = context_from(params);
    const DilatonParams dilaton = dilaton_from(params, "optics_grid.dilaton");
    optics::complex4 e{std::complex<double>(0.0, 0.0),
                       std::complex<double>(1.0, 0.0),
                       std::complex<double>(0.0, 0.0),
                       std::complex<double>(0.0, 0.0)};
    const optics::WaveSpec w = optics::WaveSpec::from_components(
        require_number(params, "optics_grid.kx_per_m"),
        require_number(params, "optics_grid.ky_per_m"),
        require_number(params, "optics_grid.kz_per_m"),
        require_number(params, "optics_grid.a_in"), e);
    const optics::GridRegion region{require_number(params, "optics_grid.t_min_s"),
                                    require_number(params, "optics_grid.t_max_s"),
                                    require_number(params, "optics_grid.z_min_m"),
                                    require_number(params, "optics_grid.z_max_m")};
    const int nt = static_cast<int>(require_number(params, "optics_grid.nt"));
    const int nz = static_cast<int>(require_number(params, "optics_grid.nz"));
    const double L = require_number(params, "optics_grid.L_m");
    const optics::FieldGrid grid = optics::field_grid(region, nt, nz, L, w, dilaton, ctx);

    sink << "t,z,scaled_phase,amplitude_dev,K0_scaled,Kz_scaled\n";
    for (int it = 0; it < nt; ++it) {
        for (int iz = 0; iz < nz; ++iz) {
            const std::size_t i = grid.index(it, iz);
            sink << csv::row_values({grid.t[it], grid.z[iz], grid.scaled_phase[i],
                                     grid.amplitude_dev[i], grid.K0_scaled[i],
                                     grid.Kz_scaled[i]});
        }
    }
    summary = std::to_string(nt) + "x" + std::to_string(nz) + " grid";
    return 0;
}

int run_validate(const RunConfig& config, std::ostream& sink, std::string& summary) {
    if (!config.sweep.empty())
        throw config_error("validate does not support sweep axes");
    const json& params = config.params;
    validation::ValidationConfig vcfg;
    vcfg.seed = static_cast<std::uint64_t>(require_number(params, "validate.seed"));
    vcfg.draws_triangulation =
        static_cast<int>(require_number(params, "validate.draws_triangulation"));
    vcfg.draws_k_reversal =
        static_cast<int>(require_number(params, "validate.draws_k_reversal"));
    vcfg.draws_dm_limits =
        static_cast<int>(require_number(params, "validate.draws_dm_limits"));
    vcfg.draws_phi_sa = static_cast<int>(require_number(params, "validate.draws_phi_sa"));
    vcfg.draws_closure = static_cast<int>(require_number(params, "validate.draws_closure"));
    vcfg.phi_sa_samples =
        static_cast<int>(require_number(params, "validate.phi_sa_samples"));
    vcfg.rel_tol = require_number(params, "validate.rel_tol");

    const validation::Report report = validation::run_all(vcfg);
    int failures = 0;
    for (const auto& row : report.rows) failures += row.pass ? 0 : 1;

    sink << report.to_csv();
    summary = std::to_string(report.rows.size()) + " checks, " +
              std::to_string(failures) + " failure(s)";
    return failures == 0 ? 0 : 1;
}

int run_to(const RunConfig& config, std::ostream& sink, std::string& summary) {
    switch (config.scenario) {
        case Scenario::phase:
            return run_table_scenario(config, make_phase_table(), sink, summary);
        case Scenario::gradiometer:
            return run_table_scenario(config, make_gradiometer_table(), sink, summary);
        case Scenario::eep:
            return run_table_scenario(config, make_eep_table(), sink, summary);
        case Scenario::darkmatter:
            return run_table_scenario(config, make_darkmatter_table(config.params),
                                      sink, summary);
        case Scenario::optics_grid:
            return run_optics_grid(config, sink, summary);
        case Scenario::validate:
            return run_validate(config, sink, summary);
    }
    throw config_error("unhandled scenario");
}

}  // namespace

RunResult run(const RunConfig& config) {
    std::ostringstream sink;
    RunResult result;
    result.exit_code = run_to(config, sink, result.summary);
    result.csv = sink.str();
    return result;
}

int run_cli(Scenario scenario, const std::optional<std::string>& config_path,
            const std::vector<std::string>& overrides,
            const std::optional<std::string>& out, std::optional<int> jobs,
            std::ostream& out_stream, std::ostream& err_stream) {
    try {
        const RunConfig config = load_config(scenario, config_path, overrides, out, jobs);
        std::string summary;
        int code = 0;
        if (config.out_path.empty()) {
            code = run_to(config, out_stream, summary);
        } else {
            std::ofstream file(config.out_path, std::ios::binary);
            if (!file) {
                err_stream << "cannot open output file: " << config.out_path << "\n";
                return 2;
            }
            code = run_to(config, file, summary);
        }
        err_stream << summary << "\n";
        return code;
    } catch (const config_error& e) {
        err_stream << "config error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        err_stream << "config error: " << e.what() << "\n";
        return 2;
    } catch (const physics_error& e) {
        err_stream << "physics precondition violated: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace dilaton::cli
