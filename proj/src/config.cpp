#include "semigrav/config.hpp"

#include "semigrav/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace semigrav {

using nlohmann::json;

namespace {

const std::vector<std::string> kModes{"phases", "witness", "sweep", "figure", "evolve", "validate-appendix"};

bool one_of(const std::string& s, std::initializer_list<const char*> options) {
    return std::any_of(options.begin(), options.end(), [&](const char* o) { return s == o; });
}

// Typed field access on one JSON object; records type errors and unknown keys.
class Reader {
public:
    Reader(const json& obj, std::string path, std::vector<std::string>& errors)
        : obj_(obj), path_(std::move(path)), errors_(errors) {
        if (!obj_.is_object()) {
            errors_.push_back(where("") + " must be an object");
            valid_ = false;
        }
    }

    template <class T>
    T get(const std::string& key, T fallback) {
        seen_.insert(key);
        if (!valid_ || !obj_.contains(key) || obj_.at(key).is_null()) return fallback;
        try {
            return obj_.at(key).get<T>();
        } catch (const json::exception&) {
            errors_.push_back(where(key) + " has the wrong type");
            return fallback;
        }
    }

    template <class T>
    std::optional<T> optional(const std::string& key) {
        seen_.insert(key);
        if (!valid_ || !obj_.contains(key) || obj_.at(key).is_null()) return std::nullopt;
        try {
            return obj_.at(key).get<T>();
        } catch (const json::exception&) {
            errors_.push_back(where(key) + " has the wrong type");
            return std::nullopt;
        }
    }

    Reader child(const std::string& key) {
        seen_.insert(key);
        static const json empty = json::object();
        if (!valid_ || !obj_.contains(key) || obj_.at(key).is_null()) return Reader(empty, where(key), errors_);
        return Reader(obj_.at(key), where(key), errors_);
    }

    void finish() const {
        if (!valid_) return;
        for (const auto& [key, value] : obj_.items())
            if (!seen_.count(key)) errors_.push_back("unknown key " + where(key));
    }

    std::string where(const std::string& key) const {
        if (key.empty()) return "'" + (path_.empty() ? std::string("config") : path_) + "'";
        return "'" + (path_.empty() ? key : path_ + "." + key) + "'";
    }

private:
    const json& obj_;
    std::string path_;
    std::vector<std::string>& errors_;
    std::set<std::string> seen_;
    bool valid_ = true;
};

void collect(std::vector<std::string>& errors, const std::function<void()>& check) {
    try {
        check();
    } catch (const ConfigError& e) {
        errors.insert(errors.end(), e.violations().begin(), e.violations().end());
    } catch (const std::invalid_argument& e) {
        errors.emplace_back(e.what());
    }
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

void read_dynamics(Reader r, DynamicsSpec& d, std::vector<std::string>& errors) {
    const DynamicsSpec def;
    {
        Reader g = r.child("grid");
        d.grid.x_min = g.get("x_min", def.grid.x_min);
        d.grid.x_max = g.get("x_max", def.grid.x_max);
        d.grid.n = g.get<std::size_t>("n", def.grid.n);
        g.finish();
    }
    d.m1 = r.get("m1", def.m1);
    d.m2 = r.get("m2", def.m2);
    d.dt = r.get("dt", def.dt);
    d.steps = r.get("steps", def.steps);
    d.sample_every = r.get("sample_every", def.sample_every);
    d.checkpoint_every = r.get("checkpoint_every", def.checkpoint_every);
    {
        Reader p = r.child("potential");
        d.potential.kind = p.get("kind", def.potential.kind);
        d.potential.coupling = p.get("coupling", def.potential.coupling);
        d.potential.softening = p.get("softening", def.potential.softening);
        d.potential.radius = p.get("radius", def.potential.radius);
        d.potential.trajectory_term = p.get("trajectory_term", def.potential.trajectory_term);
        p.finish();
    }
    {
        Reader i = r.child("initial");
        d.initial.kind = i.get("kind", def.initial.kind);
        d.initial.centres = i.get("centres", def.initial.centres);
        d.initial.widths = i.get("widths", def.initial.widths);
        d.initial.momenta = i.get("momenta", def.initial.momenta);
        d.initial.branch_centres1 = i.get("branch_centres1", def.initial.branch_centres1);
        d.initial.branch_centres2 = i.get("branch_centres2", def.initial.branch_centres2);
        d.initial.branch_width = i.get("branch_width", def.initial.branch_width);
        d.initial.trajectory = i.optional<std::vector<double>>("trajectory");
        i.finish();
    }
    r.finish();

    const std::string p = "dynamics.";
    collect(errors, [&] { d.grid.validate(); });
    if (!finite_positive(d.m1) || !finite_positive(d.m2)) errors.push_back(p + "masses must be positive");
    if (!finite_positive(d.dt)) errors.push_back(p + "dt must be positive");
    if (d.steps < 1) errors.push_back(p + "steps must be >= 1");
    if (d.sample_every < 1) errors.push_back(p + "sample_every must be >= 1");
    if (d.checkpoint_every < 0) errors.push_back(p + "checkpoint_every must be >= 0");
    collect(errors, [&] { dynamics::potential_kind_from_string(d.potential.kind); });
    collect(errors, [&] { dynamics::trajectory_term_from_string(d.potential.trajectory_term); });
    if (!std::isfinite(d.potential.coupling)) errors.push_back(p + "potential.coupling must be finite");
    if (!finite_positive(d.potential.softening)) errors.push_back(p + "potential.softening must be positive");
    if (!finite_positive(d.potential.radius)) errors.push_back(p + "potential.radius must be positive");

    const auto& init = d.initial;
    auto inside = [&](double x) { return x >= d.grid.x_min && x <= d.grid.x_max; };
    auto pair_ok = [&](const std::vector<double>& v, const std::string& name, bool positive, bool in_box) {
        if (v.size() != 2) {
            errors.push_back(p + "initial." + name + " needs two values");
            return;
        }
        for (double x : v) {
            if (!std::isfinite(x) || (positive && !(x > 0.0))) errors.push_back(p + "initial." + name + " values invalid");
            else if (in_box && !inside(x)) errors.push_back(p + "initial." + name + " outside the grid box");
        }
    };
    if (init.kind == "product") {
        pair_ok(init.centres, "centres", false, true);
        pair_ok(init.widths, "widths", true, false);
        pair_ok(init.momenta, "momenta", false, false);
        if (init.trajectory) pair_ok(*init.trajectory, "trajectory", false, true);
    } else if (init.kind == "four_branch") {
        pair_ok(init.branch_centres1, "branch_centres1", false, true);
        pair_ok(init.branch_centres2, "branch_centres2", false, true);
        if (!finite_positive(init.branch_width)) errors.push_back(p + "initial.branch_width must be positive");
    } else {
        errors.push_back(p + "initial.kind must be 'product' or 'four_branch', got '" + init.kind + "'");
    }
}

RunConfig parse_validated(const json& j) {
    std::vector<std::string> errors;
    RunConfig c;
    const RunConfig def;
    Reader r(j, "", errors);
    c.version = r.get("version", def.version);
    c.mode = r.get("mode", def.mode);
    c.preset = r.get("preset", def.preset);
    {
        Reader g = r.child("geometry");
        c.geometry.delta_x_big = g.get("delta_x_big", def.geometry.delta_x_big);
        c.geometry.delta_x_small = g.get("delta_x_small", def.geometry.delta_x_small);
        g.finish();
    }
    c.gammas = r.get("gammas", def.gammas);
    {
        Reader rr = r.child("radius");
        c.radius.log_range = rr.get("log_range", def.radius.log_range);
        c.radius.value = rr.get("value", def.radius.value);
        c.radius.min = rr.get("min", def.radius.min);
        c.radius.max = rr.get("max", def.radius.max);
        c.radius.count = rr.get("count", def.radius.count);
        rr.finish();
    }
    c.gamma_model = r.get("gamma_model", def.gamma_model);
    {
        Reader q = r.child("quadrature");
        c.quadrature.abs_tol = q.get("abs_tol", def.quadrature.abs_tol);
        c.quadrature.rel_tol = q.get("rel_tol", def.quadrature.rel_tol);
        c.quadrature.max_panels = q.get("max_panels", def.quadrature.max_panels);
        q.finish();
    }
    {
        Reader q = r.child("regimes");
        c.regimes.small_r_max = q.get("small_r_max", def.regimes.small_r_max);
        c.regimes.large_r_min = q.get("large_r_min", def.regimes.large_r_min);
        q.finish();
    }
    c.target_phi_delta = r.optional<double>("target_phi_delta");
    read_dynamics(r.child("dynamics"), c.dynamics, errors);
    {
        Reader b = r.child("bound");
        c.bound.horizon = b.get("horizon", def.bound.horizon);
        c.bound.k_sigma = b.get("k_sigma", def.bound.k_sigma);
        c.bound.sample_every = b.get("sample_every", def.bound.sample_every);
        b.finish();
    }
    {
        Reader o = r.child("output");
        c.output.path = o.get("path", def.output.path);
        c.output.format = o.get("format", def.output.format);
        o.finish();
    }
    c.threads = r.get("threads", def.threads);
    r.finish();

    if (c.version != kConfigVersion)
        errors.push_back("unsupported config version " + std::to_string(c.version) + " (expected " +
                         std::to_string(kConfigVersion) + ")");
    if (std::find(kModes.begin(), kModes.end(), c.mode) == kModes.end()) errors.push_back("unknown mode '" + c.mode + "'");
    collect(errors, [&] { c.geometry.validate(); });
    if (c.gammas.empty()) errors.push_back("gammas must not be empty");
    for (double g : c.gammas)
        if (!std::isfinite(g)) errors.push_back("gammas must be finite");
    if (c.radius.log_range) {
        if (!finite_positive(c.radius.min) || !finite_positive(c.radius.max) || c.radius.min > c.radius.max)
            errors.push_back("radius range needs 0 < min <= max");
        if (c.radius.count < 1 || (c.radius.count == 1 && c.radius.min != c.radius.max))
            errors.push_back("radius range count must be >= 2 (or 1 with min == max)");
    } else if (!finite_positive(c.radius.value)) {
        errors.push_back("radius value must be positive");
    }
    if (!one_of(c.gamma_model, {"zero", "point_newtonian", "smoothed_newtonian"}))
        errors.push_back("gamma_model must be zero, point_newtonian or smoothed_newtonian, got '" + c.gamma_model + "'");
    if (!(c.quadrature.abs_tol >= 0.0) || !(c.quadrature.rel_tol > 0.0) || c.quadrature.max_panels < 1)
        errors.push_back("quadrature needs abs_tol >= 0, rel_tol > 0 and max_panels >= 1");
    if (!(c.regimes.small_r_max >= 0.0) || !(c.regimes.large_r_min > c.regimes.small_r_max))
        errors.push_back("regimes need 0 <= small_r_max < large_r_min");
    if (c.target_phi_delta) {
        if (!std::isfinite(*c.target_phi_delta)) errors.push_back("target_phi_delta must be finite");
        if (!(c.geometry.delta_x_small > 0.0)) errors.push_back("target_phi_delta needs delta_x_small > 0");
    }
    if (!finite_positive(c.bound.horizon)) errors.push_back("bound.horizon must be positive");
    if (!finite_positive(c.bound.k_sigma)) errors.push_back("bound.k_sigma must be positive");
    if (c.bound.sample_every < 1) errors.push_back("bound.sample_every must be >= 1");
    if (!one_of(c.output.format, {"csv", "json"})) errors.push_back("output.format must be csv or json");
    if (c.threads < 1) errors.push_back("threads must be >= 1");
    if (!errors.empty()) throw ConfigError(std::move(errors));
    return c;
}

}  // namespace

std::vector<double> RadiusSpec::values() const {
    if (!log_range) return {value};
    if (count == 1) return {min};
    std::vector<double> v(static_cast<std::size_t>(count));
    const double a = std::log(min), b = std::log(max);
    for (int i = 0; i < count; ++i) v[i] = std::exp(a + (b - a) * i / (count - 1));
    v.front() = min;
    v.back() = max;
    return v;
}

dynamics::PotentialModel PotentialSpec::model() const {
    dynamics::PotentialModel m;
    m.kind = dynamics::potential_kind_from_string(kind);
    m.coupling = coupling;
    m.softening = softening;
    m.radius = radius;
    m.gamma = dynamics::trajectory_term_from_string(trajectory_term);
    return m;
}

dynamics::BranchedWave DynamicsSpec::initial_state() const {
    if (initial.kind == "four_branch")
        return dynamics::BranchedWave::four_branch(grid, m1, m2, initial.branch_width, initial.branch_centres1[0],
                                                   initial.branch_centres1[1], initial.branch_centres2[0],
                                                   initial.branch_centres2[1]);
    const auto w = dynamics::TwoParticleWave::product(
        grid, m1, m2, dynamics::gaussian_packet(initial.centres[0], initial.widths[0], initial.momenta[0]),
        dynamics::gaussian_packet(initial.centres[1], initial.widths[1], initial.momenta[1]));
    const auto q = initial.trajectory.value_or(initial.centres);
    return dynamics::BranchedWave::single(w, dynamics::TrajectoryPair{q[0], q[1], {}});
}

GammaModel RunConfig::gamma() const {
    switch (gamma_kind_from_string(gamma_model)) {
        case GammaModel::Kind::PointNewtonian: return GammaModel::point_newtonian();
        case GammaModel::Kind::SmoothedNewtonian: return GammaModel::smoothed_newtonian();
        default: return GammaModel::zero();
    }
}

RunConfig config_from_json(const json& j) {
    if (j.is_object() && j.contains("preset") && j.at("preset").is_string() && !j.at("preset").get<std::string>().empty()) {
        RunConfig base;
        try {
            base = preset(j.at("preset").get<std::string>());
        } catch (const ConfigError&) {
            // report the bad preset along with any other problems
            std::vector<std::string> errors{"unknown preset '" + j.at("preset").get<std::string>() + "'"};
            json rest = j;
            rest.erase("preset");
            try {
                parse_validated(rest);
            } catch (const ConfigError& e) {
                errors.insert(errors.end(), e.violations().begin(), e.violations().end());
            }
            throw ConfigError(std::move(errors));
        }
        json merged = config_to_json(base);
        merged.merge_patch(j);
        return parse_validated(merged);
    }
    return parse_validated(j);
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({"cannot read config file '" + path + "'"});
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError({"config file '" + path + "' is not valid JSON: " + e.what()});
    }
    return config_from_json(j);
}

json config_to_json(const RunConfig& c) {
    const auto& d = c.dynamics;
    json init = {{"kind", d.initial.kind},
                 {"centres", d.initial.centres},
                 {"widths", d.initial.widths},
                 {"momenta", d.initial.momenta},
                 {"branch_centres1", d.initial.branch_centres1},
                 {"branch_centres2", d.initial.branch_centres2},
                 {"branch_width", d.initial.branch_width},
                 {"trajectory", d.initial.trajectory ? json(*d.initial.trajectory) : json(nullptr)}};
    return {{"version", c.version},
            {"mode", c.mode},
            {"preset", c.preset},
            {"geometry", {{"delta_x_big", c.geometry.delta_x_big}, {"delta_x_small", c.geometry.delta_x_small}}},
            {"gammas", c.gammas},
            {"radius",
             {{"log_range", c.radius.log_range},
              {"value", c.radius.value},
              {"min", c.radius.min},
              {"max", c.radius.max},
              {"count", c.radius.count}}},
            {"gamma_model", c.gamma_model},
            {"quadrature",
             {{"abs_tol", c.quadrature.abs_tol},
              {"rel_tol", c.quadrature.rel_tol},
              {"max_panels", c.quadrature.max_panels}}},
            {"regimes", {{"small_r_max", c.regimes.small_r_max}, {"large_r_min", c.regimes.large_r_min}}},
            {"target_phi_delta", c.target_phi_delta ? json(*c.target_phi_delta) : json(nullptr)},
            {"dynamics",
             {{"grid", {{"x_min", d.grid.x_min}, {"x_max", d.grid.x_max}, {"n", d.grid.n}}},
              {"m1", d.m1},
              {"m2", d.m2},
              {"dt", d.dt},
              {"steps", d.steps},
              {"sample_every", d.sample_every},
              {"checkpoint_every", d.checkpoint_every},
              {"potential",
               {{"kind", d.potential.kind},
                {"coupling", d.potential.coupling},
                {"softening", d.potential.softening},
                {"radius", d.potential.radius},
                {"trajectory_term", d.potential.trajectory_term}}},
              {"initial", init}}},
            {"bound", {{"horizon", c.bound.horizon}, {"k_sigma", c.bound.k_sigma}, {"sample_every", c.bound.sample_every}}},
            {"output", {{"path", c.output.path}, {"format", c.output.format}}},
            {"threads", c.threads}};
}

std::string canonical_text(const RunConfig& c) { return config_to_json(c).dump(2) + "\n"; }

std::vector<std::string> preset_names() { return {"fig2a", "fig2b", "fig2c", "fig2d", "fig3", "fig4"}; }

RunConfig preset(const std::string& name) {
    RunConfig c;
    c.preset = name;
    c.mode = "figure";
    c.radius.log_range = true;
    c.radius.min = 0.01;
    c.radius.max = 5.0;
    c.radius.count = 60;
    if (name == "fig2a") c.geometry = {0.25, 0.1};
    else if (name == "fig2b") c.geometry = {2.5, 1.0};
    else if (name == "fig2c") c.geometry = {3.0, 0.5};
    else if (name == "fig2d") c.geometry = {2.0, 1.9};
    else if (name == "fig3" || name == "fig4") {
        c.geometry = {0.25, 0.1};
        c.gammas = {0.5, 1.0, 2.0};
        if (name == "fig4") c.radius.max = 0.5;
    } else {
        throw ConfigError({"unknown preset '" + name + "'"});
    }
    return c;
}

}  // namespace semigrav
