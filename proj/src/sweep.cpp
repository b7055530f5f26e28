#include "semigrav/sweep.hpp"

#include "semigrav/errors.hpp"
#include "semigrav/spin_witness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

namespace semigrav {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

RoutedPhases phases_at(double radius, double gamma, const RunConfig& c) {
    return phases_auto(radius, c.geometry, CouplingConfig{gamma}, c.gamma(), c.regimes, c.quadrature);
}

std::string sanitize(std::string s) {
    for (auto& ch : s)
        if (ch == ',' || ch == '\n' || ch == '\r') ch = ';';
    return s;
}

std::string json_number(double v) { return std::isfinite(v) ? format_number(v) : "null"; }

std::string json_string(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"' || ch == '\\') out += '\\';
        if (ch == '\n') {
            out += "\\n";
            continue;
        }
        out += ch;
    }
    return out + "\"";
}

}  // namespace

SweepRow sweep_row(double radius, double gamma, const RunConfig& config) {
    SweepRow row;
    row.radius = radius;
    row.gamma = gamma;
    try {
        const auto routed = phases_at(radius, gamma, config);
        const auto report = witness_report(routed.phases);
        row.phases = routed.phases;
        row.method = routed.method;
        row.w = report.w;
        row.w3 = report.w3;
        row.w4 = report.w4;
    } catch (const std::exception& e) {
        row.error = e.what();
        row.phases = PhaseSet{kNaN, kNaN, kNaN, kNaN, kNaN};
        row.w = row.w3 = row.w4 = kNaN;
    }
    return row;
}

std::vector<SweepRow> run_sweep(const RunConfig& config) {
    const auto radii = config.radius.values();
    auto gammas = config.gammas;
    std::sort(gammas.begin(), gammas.end());
    std::vector<std::pair<double, double>> points;
    for (double r : radii)
        for (double g : gammas) points.emplace_back(r, g);

    std::vector<SweepRow> rows(points.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < points.size(); i = next++) rows[i] = sweep_row(points[i].first, points[i].second, config);
    };
    const unsigned n = std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(points.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return rows;
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "R,Gamma,phi_plus,phi_minus,phi_sigma,phi_delta,global_phase,W,W3,W4,method,error\n";
    for (const auto& r : rows) {
        const auto& p = r.phases;
        for (double v : {r.radius, r.gamma, p.phi_plus, p.phi_minus, p.phi_sigma, p.phi_delta, p.global_phase, r.w, r.w3,
                         r.w4})
            out << format_number(v) << ',';
        out << (r.ok() ? to_string(r.method) : "") << ',' << sanitize(r.error) << '\n';
    }
}

void write_json(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "[\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const auto& p = r.phases;
        out << "  {\"R\": " << json_number(r.radius) << ", \"Gamma\": " << json_number(r.gamma)
            << ", \"phi_plus\": " << json_number(p.phi_plus) << ", \"phi_minus\": " << json_number(p.phi_minus)
            << ", \"phi_sigma\": " << json_number(p.phi_sigma) << ", \"phi_delta\": " << json_number(p.phi_delta)
            << ", \"global_phase\": " << json_number(p.global_phase) << ", \"W\": " << json_number(r.w)
            << ", \"W3\": " << json_number(r.w3) << ", \"W4\": " << json_number(r.w4)
            << ", \"method\": " << (r.ok() ? json_string(to_string(r.method)) : "null")
            << ", \"error\": " << (r.ok() ? "null" : json_string(r.error)) << "}" << (i + 1 < rows.size() ? "," : "")
            << "\n";
    }
    out << "]\n";
}

void write_rows(std::ostream& out, const std::vector<SweepRow>& rows, const std::string& format) {
    if (format == "json") write_json(out, rows);
    else write_csv(out, rows);
}

double gamma_tuning(double target, double radius, const RunConfig& config) {
    if (!std::isfinite(target)) throw ConfigError({"target phase must be finite"});
    if (!(config.geometry.delta_x_small > 0.0))
        throw UntunableError("phi_delta vanishes identically without spin splitting");
    if (target == 0.0) return 0.0;
    const double unit = phases_at(radius, 1.0, config).phases.phi_delta;
    if (unit == 0.0 || !std::isfinite(unit)) throw UntunableError("phi_delta does not respond to the coupling here");
    // Phases only matter modulo 2 pi: a target of the wrong sign is shifted by whole
    // turns onto the branch reachable with a nonnegative coupling.
    double reached = target;
    if (reached / unit < 0.0) {
        const double turns = std::ceil(std::abs(target) / (2.0 * std::numbers::pi));
        reached = target + std::copysign(2.0 * std::numbers::pi * turns, unit);
    }
    const double gamma = reached / unit;
    const double check = phases_at(radius, gamma, config).phases.phi_delta;
    if (std::abs(check - reached) > 1e-8 * std::max(1.0, std::abs(reached))) {
        std::ostringstream msg;
        msg << "tuned coupling " << gamma << " gives phi_delta " << check << " instead of " << reached;
        throw ConsistencyError(msg.str());
    }
    return gamma;
}

}  // namespace semigrav
