// Acceptance criteria runner: `acceptance [id...]`, all criteria when no id is given.
#include "semigrav/config.hpp"
#include "semigrav/dynamics/analysis.hpp"
#include "semigrav/dynamics/evolver.hpp"
#include "semigrav/phase_engine.hpp"
#include "semigrav/run_modes.hpp"
#include "semigrav/spin_witness.hpp"
#include "semigrav/sweep.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace semigrav;
using namespace semigrav::dynamics;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    std::string id;
    std::string title;
    double time_limit;  // seconds
    std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double a = std::log(x[i]), b = std::log(y[i]);
        sx += a, sy += b, sxx += a * a, sxy += a * b;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ---- 1: point-source limit -------------------------------------------------

Outcome point_source_limit() {
    const PacketGeometry geom{2.0, 1.0};
    const CouplingConfig coupling{1.0};
    const auto zero = phase_set(1e-3, geom, coupling, GammaModel::zero());
    const auto newton = phase_set(1e-3, geom, coupling, GammaModel::point_newtonian());
    const double e = std::max({std::abs(zero.phi_plus + 1.0 / 3), std::abs(zero.phi_minus - 1.0),
                               std::abs(newton.phi_plus + 1.0 / 6), std::abs(newton.phi_minus - 0.5)});
    return {e <= 2e-3, fmt("zero: (%.6f, %.6f), point newtonian: (%.6f, %.6f), max error %.2e", zero.phi_plus,
                           zero.phi_minus, newton.phi_plus, newton.phi_minus, e)};
}

// ---- 2: expansion crossover ------------------------------------------------

Outcome small_r_slope() {
    const PacketGeometry geom{2.0, 1.0};
    const CouplingConfig coupling{1.0};
    const std::vector<double> radii{0.01, 0.02, 0.05, 0.1};
    std::vector<double> rp, rm;
    for (double r : radii) {
        const auto q = phase_set(r, geom, coupling, GammaModel::zero());
        const auto s = small_r_phases(r, geom, coupling, GammaModel::zero());
        rp.push_back(std::abs(q.phi_plus - s.phi_plus));
        rm.push_back(std::abs(q.phi_minus - s.phi_minus));
    }
    const double a = fitted_slope(radii, rp), b = fitted_slope(radii, rm);
    return {std::abs(a - 4) <= 0.3 && std::abs(b - 4) <= 0.3,
            fmt("log-log residual slope phi+ %.3f, phi- %.3f (residual at 0.1: %.2e, %.2e)", a, b, rp.back(), rm.back())};
}

Outcome large_r_sigma() {
    const PacketGeometry geom{0.25, 0.1};
    const CouplingConfig coupling{1.0};
    bool pass = true;
    std::ostringstream d;
    for (double r : {3.0, 4.0, 5.0}) {
        const double exact = phase_set(r, geom, coupling, GammaModel::zero()).phi_sigma;
        const double asym = large_r_phases(r, geom, coupling).phi_sigma;
        const double lead = large_r_sigma_leading(r, geom, coupling);
        const double rel = std::abs(asym - exact) / std::abs(exact);
        pass = pass && rel <= 0.05;
        d << fmt("R=%g quadrature %.4e asymptotic %.4e (rel %.2f) strip leading term %.4e (rel %.4f); ", r, exact, asym,
                 rel, lead, std::abs(lead - exact) / std::abs(exact));
    }
    return {pass, d.str()};
}

// ---- 3: mean-field null ----------------------------------------------------

Outcome mean_field_null() {
    const PacketGeometry geom{0.25, 0.1};
    double worst_sigma = 0, worst_w = 0;
    for (int k = 0; k < 100; ++k) {
        const double gamma = std::pow(10.0, -2.0 + 4.0 * k / 99.0);
        const CouplingConfig coupling{gamma};
        const auto p = phase_set(8.0, geom, coupling, GammaModel::zero());
        const auto routed = phases_auto(8.0, geom, coupling, GammaModel::zero()).phases;
        worst_sigma = std::max({worst_sigma, std::abs(p.phi_sigma) / gamma, std::abs(routed.phi_sigma) / gamma});
        worst_w = std::max({worst_w, witness_w(p), witness_w(routed)});
    }
    return {worst_sigma < 1e-12 && worst_w <= 1.0,
            fmt("Gamma in [1e-2, 1e2], 100 points: max |phi_sigma|/Gamma %.2e, max W %.15f", worst_sigma, worst_w)};
}

// ---- 4: entanglement at finite R -------------------------------------------

Outcome finite_r_entanglement() {
    const auto cfg = preset("fig3");
    std::size_t tested = 0, found = 0;
    double min_best = 1e300;
    for (double r : cfg.radius.values()) {
        if (r > 2.0) continue;
        ++tested;
        double best = 0;
        for (int wind = 0; wind < 4 && best <= 1.0; ++wind)
            for (double sign : {1.0, -1.0}) {
                const double target = sign * (kPi / 2 + 2 * kPi * wind);
                const double gamma = gamma_tuning(target, r, cfg);
                best = std::max(best, sweep_row(r, gamma, cfg).w);
            }
        if (best > 1.0) ++found;
        min_best = std::min(min_best, best);
    }
    const auto f4 = preset("fig4");
    double min_w3 = 1e300, at_radius = 0, at_gamma = 0;
    for (const auto& row : run_sweep(f4))
        if (row.w3 < min_w3) min_w3 = row.w3, at_radius = row.radius, at_gamma = row.gamma;
    return {found == tested && tested > 0 && min_w3 < 0.0,
            fmt("tuned W > 1 at %zu of %zu radii (smallest best W %.6f); min W3 over the fig4 sweep (R <= %g) %.4f "
                "at R=%.3f, Gamma=%g",
                found, tested, min_best, f4.radius.max, min_w3, at_radius, at_gamma)};
}

// ---- 5: witness oracle -----------------------------------------------------

using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;

struct Pauli {
    Mat2 i, x, y, z;
    Pauli() {
        const std::complex<double> j{0, 1};
        i << 1, 0, 0, 1;
        x << 0, 1, 1, 0;
        y << 0, -j, j, 0;
        z << 1, 0, 0, -1;
    }
};

Eigen::Vector4cd spin_state(double plus, double minus) {
    Eigen::Vector4cd v;
    v << 0.5, 0.5 * std::polar(1.0, plus), 0.5 * std::polar(1.0, minus), 0.5;
    return v;
}

double expect(const Eigen::Vector4cd& v, const Mat2& a, const Mat2& b) {
    const Mat4 op = Eigen::kroneckerProduct(a, b);
    return (v.adjoint() * op * v)(0, 0).real();
}

Outcome witness_oracle() {
    const Pauli s;
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> angle(-kPi, kPi), unit(0.0, 1.0);
    double worst = 0;
    for (int k = 0; k < 10000; ++k) {
        const double plus = angle(rng), minus = angle(rng), theta = 2 * kPi * unit(rng);
        const auto v = spin_state(plus, minus);
        const auto phases = PhaseSet::from_plus_minus(0.0, plus, minus);
        const double w_op = std::abs(expect(v, s.x, s.z) + expect(v, s.y, s.y));
        const Eigen::Vector4cd ref = (spin_state(0, 0) + std::polar(1.0, theta) * spin_state(kPi, kPi)) / std::sqrt(2.0);
        const double wg_op = 2.0 - 4.0 * std::norm(ref.dot(v));
        worst = std::max({worst, std::abs(witness_w(phases) - w_op), std::abs(witness_wg(theta, phases) - wg_op)});
    }
    // separability: library sampler plus an independent one
    const auto lib = separability_bound_check(100000);
    double own = 0;
    std::mt19937_64 prng(1234);
    for (int k = 0; k < 100000; ++k) {
        auto bloch = [&] {
            Eigen::Vector2cd a(std::complex<double>(std::normal_distribution<double>()(prng),
                                                    std::normal_distribution<double>()(prng)),
                               std::complex<double>(std::normal_distribution<double>()(prng),
                                                    std::normal_distribution<double>()(prng)));
            return Eigen::Vector2cd(a.normalized());
        };
        const Eigen::Vector4cd v = Eigen::kroneckerProduct(bloch(), bloch());
        own = std::max(own, std::abs(expect(v, s.x, s.z) + expect(v, s.y, s.y)));
    }
    return {worst <= 1e-12 && lib.max_w <= 1 + 1e-9 && own <= 1 + 1e-9,
            fmt("max closed-form vs operator difference %.2e over 1e4 pairs; separable max W %.12f (library), "
                "%.12f (independent)",
                worst, lib.max_w, own)};
}

// ---- 6: dynamics invariants ------------------------------------------------

PotentialModel model(PotentialKind kind, double coupling, double softening = 0.1) {
    PotentialModel p;
    p.kind = kind;
    p.coupling = coupling;
    p.softening = softening;
    p.radius = 2.0;
    return p;
}

Outcome dynamics_invariants() {
    std::ostringstream d;
    bool pass = true;
    // free spreading of unit-width packets: variance (1 + t^2 / m^2) / 2
    {
        const Grid1D g{-16, 16, 256};
        double worst = 0;
        for (double m : {1.0, 2.0}) {
            auto w = TwoParticleWave::product(g, m, m, gaussian_packet(-1, 1), gaussian_packet(1, 1));
            auto state = BranchedWave::single(w, TrajectoryPair{-1, 1, {}});
            Evolver ev(g, m, m, model(PotentialKind::QuantumPair, 0.0), 0.01);
            for (int block = 1; block <= 4; ++block) {
                ev.evolve(state, 100);
                const double t = state.time;
                const double width = std::sqrt(position_moments(state.total()).var1 / 0.5);
                worst = std::max(worst, std::abs(width / std::sqrt(1 + t * t / (m * m)) - 1));
            }
        }
        pass = pass && worst <= 5e-3;
        d << fmt("width law error %.2e; ", worst);
    }
    {
        const Grid1D g{-10, 10, 128};
        double drift = 0;
        for (auto kind : {PotentialKind::QuantumPair, PotentialKind::BohmPoint, PotentialKind::HybridR,
                          PotentialKind::MeanField}) {
            auto w = TwoParticleWave::product(g, 1, 1, gaussian_packet(-2, 1), gaussian_packet(2, 1));
            auto state = BranchedWave::single(w, TrajectoryPair{-2, 2, {}});
            Evolver ev(g, 1, 1, model(kind, 2.0), 0.01);
            ev.evolve(state, 200, [&](const BranchedWave& s, long) {
                drift = std::max(drift, std::abs(s.total().norm() - 1));
            });
        }
        pass = pass && drift <= 1e-8;
        d << fmt("norm drift %.2e; ", drift);
    }
    {
        const Grid1D g{-10, 10, 64};
        const auto pot = model(PotentialKind::QuantumPair, 2.0, 1.0);
        const double T = 1.0;
        auto run = [&](double dt, double& predicted) {
            auto w = TwoParticleWave::product(g, 1, 1, gaussian_packet(-1.5, 1), gaussian_packet(1.5, 1));
            auto state = BranchedWave::single(w, TrajectoryPair{-1.5, 1.5, {}});
            Evolver ev(g, 1, 1, pot, dt);
            const long steps = std::lround(T / dt);
            predicted = position_moments(w).mean1;
            for (long s = 0; s <= steps; ++s) {
                const double wt = (s == 0 || s == steps) ? 0.5 : 1.0;
                predicted += wt * dt * (T - s * dt) * mean_pair_force(state.total(), pot).first;
                if (s < steps) ev.step(state);
            }
            return position_moments(state.total()).mean1;
        };
        double pa, pb, pc;
        const double a = run(0.1, pa), b = run(0.05, pb), c = run(0.025, pc);
        const double ratio = (a - b) / (b - c);
        const double residual = std::max({std::abs(a - pa), std::abs(b - pb), std::abs(c - pc)});
        pass = pass && std::abs(ratio - 4) <= 0.4 && residual < 1e-8;
        d << fmt("<x>(T) step-halving ratio %.3f, Ehrenfest residual %.2e; ", ratio, residual);
    }
    {
        const Grid1D g{-16, 16, 256};
        auto w = TwoParticleWave::product(g, 1, 1, gaussian_packet(-3, 1), gaussian_packet(3, 1));
        std::mt19937_64 rng(2024);
        std::normal_distribution<double> n1(-3, std::sqrt(0.5)), n2(3, std::sqrt(0.5));
        std::vector<TrajectoryPair> ens(500);
        for (auto& t : ens) t = TrajectoryPair{n1(rng), n2(rng), {}};
        auto ks = [&](int particle) {
            std::vector<double> s;
            for (const auto& t : ens) s.push_back(particle == 1 ? t.q1 : t.q2);
            return ks_statistic(s, g, w.marginal(particle));
        };
        const double i1 = ks(1), i2 = ks(2);
        Evolver ev(g, 1, 1, model(PotentialKind::QuantumPair, 0.5, 0.5), 5e-4);
        double time = 0;
        ev.evolve_ensemble(w, ens, time, 10000);
        const double crit = 1.628 / std::sqrt(500.0);
        const double k1 = ks(1), k2 = ks(2);
        pass = pass && k1 < crit && k2 < crit;
        d << fmt("KS after 1e4 steps to t=%.2f: %.4f, %.4f (initial sample %.4f, %.4f; 1%% critical %.4f)", time, k1, k2,
                 i1, i2, crit);
    }
    return {pass, d.str()};
}

// ---- 7: entanglement generation dichotomy ----------------------------------

Outcome entanglement_dichotomy() {
    RunConfig c;
    c.mode = "evolve";
    auto& dyn = c.dynamics;
    dyn.grid = {-8, 8, 128};
    dyn.m1 = dyn.m2 = 10;
    dyn.dt = 0.01;
    dyn.steps = 100;
    dyn.sample_every = 10;
    dyn.potential.coupling = 10;
    dyn.potential.radius = 2;
    dyn.initial.kind = "four_branch";
    dyn.initial.branch_centres1 = {3.5, 1.5};
    dyn.initial.branch_centres2 = {-1.5, -3.5};
    dyn.initial.branch_width = 0.5;
    std::map<std::string, double> peak;
    for (const std::string kind : {"mean_field", "bohm_point", "hybrid_r"}) {
        dyn.potential.kind = kind;
        const auto s = run_evolve(c, "acceptance_dichotomy_" + kind);
        for (const auto& p : s.checkpoints) std::remove(p.c_str());
        peak[kind] = *std::max_element(s.entropy.begin(), s.entropy.end());
    }
    return {peak["mean_field"] <= 1e-6 && peak["bohm_point"] > 1e-2 && peak["hybrid_r"] > 1e-2,
            fmt("peak entropy: mean field %.2e, Bohm point %.4f, windowed R=2 %.4f", peak["mean_field"],
                peak["bohm_point"], peak["hybrid_r"])};
}

// ---- 8: semiclassical bound ------------------------------------------------

Outcome shipped_bounds() {
    bool pass = true;
    std::ostringstream d;
    for (const std::string name : {"bound_weak_pair", "bound_bohm_point", "bound_four_branch"}) {
        std::ifstream in(std::string(SEMIGRAV_CONFIG_DIR) + "/" + name + ".json");
        const auto cfg = config_from_json(nlohmann::json::parse(in));
        for (const auto& r : run_bound_check(cfg)) {
            pass = pass && r.holds(1e-6);
            d << fmt("%s[%s] margin %.1f; ", name.c_str(), r.label.c_str(), r.margin());
        }
    }
    return {pass, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all{
        {"1", "point-source limit", 1, point_source_limit},
        {"2-slope", "small-R residual slope", 10, small_r_slope},
        {"2-large-r", "large-R asymptotic phase average", 10, large_r_sigma},
        {"3", "mean-field null", 5, mean_field_null},
        {"4", "finite-R entanglement", 30, finite_r_entanglement},
        {"5", "witness oracle and separability", 30, witness_oracle},
        {"6", "dynamics invariants", 600, dynamics_invariants},
        {"7", "entanglement generation dichotomy", 600, entanglement_dichotomy},
        {"8", "semiclassical bound", 600, shipped_bounds},
    };
    std::vector<std::string> wanted(argv + 1, argv + argc);
    int failures = 0;
    for (const auto& c : all) {
        if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs <= c.time_limit;
        const bool ok = o.pass && in_time;
        if (!ok) ++failures;
        std::cout << "criterion " << c.id << " (" << c.title << "): " << (ok ? "PASS" : "FAIL") << " ["
                  << fmt("%.2f s of %.0f s", secs, c.time_limit) << (in_time ? "" : ", over time") << "] " << o.detail
                  << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
