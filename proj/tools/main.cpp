#include "semigrav/config.hpp"
#include "semigrav/errors.hpp"
#include "semigrav/run_modes.hpp"
#include "semigrav/spin_witness.hpp"
#include "semigrav/sweep.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

using nlohmann::json;
using namespace semigrav;

namespace {

constexpr int kOk = 0;
constexpr int kConfigFailure = 1;
constexpr int kRunFailure = 2;

struct Overrides {
    std::string config_path;
    std::string preset;
    std::optional<double> delta_x_big, delta_x_small, radius, radius_min, radius_max, abs_tol, rel_tol, target;
    std::optional<int> radius_count;
    std::vector<double> gammas;
    std::optional<std::string> gamma_model, output, format;
    std::optional<unsigned> threads;
    std::optional<std::string> potential, trajectory_term, initial;
    std::optional<double> coupling, softening, window_radius, dt, box, horizon, k_sigma;
    std::optional<long> steps, sample_every, checkpoint_every;
    std::optional<std::size_t> grid_n;
    bool print_config = false;
};

void add_flags(CLI::App* app, Overrides& o, bool with_preset) {
    app->add_option("--config", o.config_path, "JSON run configuration")->check(CLI::ExistingFile);
    if (with_preset) app->add_option("--preset", o.preset, "start from a named preset");
    app->add_option("--delta-x-big", o.delta_x_big, "arm-centre separation");
    app->add_option("--delta-x-small", o.delta_x_small, "spin splitting");
    app->add_option("--gamma", o.gammas, "coupling values")->expected(1, -1);
    app->add_option("--radius", o.radius, "single window radius");
    app->add_option("--radius-min", o.radius_min, "log-spaced radius range start");
    app->add_option("--radius-max", o.radius_max, "log-spaced radius range end");
    app->add_option("--radius-count", o.radius_count, "number of radii in the range");
    app->add_option("--gamma-model", o.gamma_model, "zero | point_newtonian | smoothed_newtonian");
    app->add_option("--abs-tol", o.abs_tol, "quadrature absolute tolerance");
    app->add_option("--rel-tol", o.rel_tol, "quadrature relative tolerance");
    app->add_option("--target-phi-delta", o.target, "tune the coupling to this phi_delta");
    app->add_option("--threads", o.threads, "worker threads for sweeps");
    app->add_option("--potential", o.potential, "quantum_pair | bohm_point | hybrid_r | mean_field");
    app->add_option("--coupling", o.coupling, "dynamics coupling G m1 m2");
    app->add_option("--softening", o.softening, "kernel softening length");
    app->add_option("--window-radius", o.window_radius, "hybrid window half-width");
    app->add_option("--trajectory-term", o.trajectory_term, "zero | point_newtonian");
    app->add_option("--initial", o.initial, "product | four_branch");
    app->add_option("--dt", o.dt, "time step");
    app->add_option("--steps", o.steps, "number of steps");
    app->add_option("--grid-n", o.grid_n, "grid points per axis");
    app->add_option("--box", o.box, "grid half-width");
    app->add_option("--sample-every", o.sample_every, "steps between samples");
    app->add_option("--checkpoint-every", o.checkpoint_every, "steps between checkpoints");
    app->add_option("--horizon", o.horizon, "bound-check horizon");
    app->add_option("--k-sigma", o.k_sigma, "confinement box size in packet widths");
    app->add_option("--output", o.output, "output file (default: standard output)");
    app->add_option("--format", o.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    app->add_flag("--print-config", o.print_config, "print the canonical configuration and exit");
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError({"config file '" + path + "' is not valid JSON: " + e.what()});
    }
    return j;
}

RunConfig build_config(const std::string& mode, const Overrides& o, const std::string& figure_preset) {
    json j = o.config_path.empty() ? json::object() : read_json_file(o.config_path);
    if (!figure_preset.empty()) j["preset"] = figure_preset;
    else if (!o.preset.empty()) j["preset"] = o.preset;
    j["mode"] = mode;
    auto set = [&](const json::json_pointer& p, const auto& v) {
        if (v) j[p] = *v;
    };
    set("/geometry/delta_x_big"_json_pointer, o.delta_x_big);
    set("/geometry/delta_x_small"_json_pointer, o.delta_x_small);
    if (!o.gammas.empty()) j["gammas"] = o.gammas;
    if (o.radius) {
        j["radius"]["log_range"] = false;
        j["radius"]["value"] = *o.radius;
    }
    if (o.radius_min || o.radius_max || o.radius_count) j["radius"]["log_range"] = true;
    set("/radius/min"_json_pointer, o.radius_min);
    set("/radius/max"_json_pointer, o.radius_max);
    set("/radius/count"_json_pointer, o.radius_count);
    set("/gamma_model"_json_pointer, o.gamma_model);
    set("/quadrature/abs_tol"_json_pointer, o.abs_tol);
    set("/quadrature/rel_tol"_json_pointer, o.rel_tol);
    set("/target_phi_delta"_json_pointer, o.target);
    set("/threads"_json_pointer, o.threads);
    set("/dynamics/potential/kind"_json_pointer, o.potential);
    set("/dynamics/potential/coupling"_json_pointer, o.coupling);
    set("/dynamics/potential/softening"_json_pointer, o.softening);
    set("/dynamics/potential/radius"_json_pointer, o.window_radius);
    set("/dynamics/potential/trajectory_term"_json_pointer, o.trajectory_term);
    set("/dynamics/initial/kind"_json_pointer, o.initial);
    set("/dynamics/dt"_json_pointer, o.dt);
    set("/dynamics/steps"_json_pointer, o.steps);
    set("/dynamics/sample_every"_json_pointer, o.sample_every);
    set("/dynamics/checkpoint_every"_json_pointer, o.checkpoint_every);
    set("/dynamics/grid/n"_json_pointer, o.grid_n);
    if (o.box) {
        j["dynamics"]["grid"]["x_min"] = -*o.box;
        j["dynamics"]["grid"]["x_max"] = *o.box;
    }
    set("/bound/horizon"_json_pointer, o.horizon);
    set("/bound/k_sigma"_json_pointer, o.k_sigma);
    set("/output/path"_json_pointer, o.output);
    set("/output/format"_json_pointer, o.format);
    return config_from_json(j);
}

void emit(const RunConfig& c, const std::function<void(std::ostream&)>& body) {
    if (c.output.path.empty()) {
        body(std::cout);
        return;
    }
    std::ofstream out(c.output.path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError({"cannot write output file '" + c.output.path + "'"});
    body(out);
}

int phase_rows(const RunConfig& c) {
    std::vector<SweepRow> rows;
    if (c.target_phi_delta) {
        for (double r : c.radius.values()) {
            try {
                rows.push_back(sweep_row(r, gamma_tuning(*c.target_phi_delta, r, c), c));
            } catch (const std::exception& e) {
                SweepRow bad = sweep_row(r, std::numeric_limits<double>::quiet_NaN(), c);
                bad.error = e.what();
                rows.push_back(bad);
            }
        }
    } else {
        rows = run_sweep(c);
    }
    emit(c, [&](std::ostream& out) { write_rows(out, rows, c.output.format); });
    return std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.ok(); }) ? kOk : kRunFailure;
}

int witness(const RunConfig& c) {
    json out = json::array();
    bool ok = true;
    for (double r : c.radius.values())
        for (double g : c.gammas) {
            json row = {{"R", r}, {"Gamma", g}};
            try {
                const auto routed = phases_auto(r, c.geometry, CouplingConfig{g}, c.gamma(), c.regimes, c.quadrature);
                const auto report = witness_report(routed.phases);
                const auto state = build_state(routed.phases);
                json curve = json::array();
                for (const auto& [theta, value] : report.wg_theta) curve.push_back({theta, value});
                row.update({{"W", report.w},
                            {"W3", report.w3},
                            {"W4", report.w4},
                            {"entangled", report.entangled},
                            {"concurrence", concurrence(state)},
                            {"spin_entropy", spin_entanglement_entropy(state)},
                            {"wg_theta", curve}});
            } catch (const std::exception& e) {
                row["error"] = e.what();
                ok = false;
            }
            out.push_back(row);
        }
    emit(c, [&](std::ostream& s) { s << out.dump(2) << "\n"; });
    return ok ? kOk : kRunFailure;
}

int evolve(const RunConfig& c) {
    const std::string base = c.output.path.empty() ? "evolve" : c.output.path;
    try {
        const auto summary = run_evolve(c, base);
        emit(c, [&](std::ostream& s) { s << summary.to_json().dump(2) << "\n"; });
    } catch (const RunError& e) {
        std::cerr << "evolve failed: " << e.what() << "\n  last checkpoint: "
                  << (e.checkpoint().empty() ? "none" : e.checkpoint()) << "\n";
        return kRunFailure;
    }
    return kOk;
}

int validate_appendix(const RunConfig& c) {
    const auto reports = run_bound_check(c);
    json out = {{"reports", json::array()}};
    bool ok = true;
    for (const auto& r : reports) {
        out["reports"].push_back(r.to_json());
        ok = ok && r.holds();
    }
    out["holds"] = ok;
    emit(c, [&](std::ostream& s) { s << out.dump(2) << "\n"; });
    return ok ? kOk : kRunFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Semiclassical gravity phase, witness and Bohmian dynamics toolkit"};
    app.require_subcommand(1);
    Overrides o;
    std::string figure_name;
    auto* phases = app.add_subcommand("phases", "phases at the configured radii and couplings");
    auto* witness_cmd = app.add_subcommand("witness", "entanglement witnesses at the configured points");
    auto* sweep = app.add_subcommand("sweep", "phase and witness table over R and Gamma");
    auto* figure = app.add_subcommand("figure", "sweep for a named preset");
    auto* evolve_cmd = app.add_subcommand("evolve", "two-particle dynamics with trajectories");
    auto* appendix = app.add_subcommand("validate-appendix", "semiclassical approximation bound check");
    for (auto* sub : {phases, witness_cmd, sweep, evolve_cmd, appendix}) add_flags(sub, o, true);
    add_flags(figure, o, false);
    figure->add_option("preset", figure_name, "fig2a | fig2b | fig2c | fig2d | fig3 | fig4")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kConfigFailure;
    }
    auto* chosen = app.get_subcommands().front();
    const std::string mode = chosen->get_name();

    RunConfig config;
    try {
        config = build_config(mode, o, mode == "figure" ? figure_name : "");
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kConfigFailure;
    }
    if (o.print_config) {
        std::cout << canonical_text(config);
        return kOk;
    }
    try {
        if (mode == "phases") return phase_rows(config);
        if (mode == "witness") return witness(config);
        if (mode == "sweep" || mode == "figure") return phase_rows(config);
        if (mode == "evolve") return evolve(config);
        return validate_appendix(config);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kConfigFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRunFailure;
    }
}
