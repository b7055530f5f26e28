#include "semigrav/run_modes.hpp"

#include "semigrav/dynamics/analysis.hpp"
#include "semigrav/dynamics/checkpoint.hpp"
#include "semigrav/dynamics/evolver.hpp"
#include "semigrav/errors.hpp"

#include <algorithm>
#include <cmath>

namespace semigrav {

using namespace dynamics;

nlohmann::json EvolveSummary::to_json() const {
    nlohmann::json branches = nlohmann::json::array();
    for (const auto& b : final_branches) {
        nlohmann::json hist = nlohmann::json::array();
        for (const auto& s : b.traj.history) hist.push_back({s.t, s.q1, s.q2});
        branches.push_back({{"label", b.label}, {"trajectory", hist}});
    }
    return {{"norm_drift", norm_drift},
            {"boundary_density", boundary_density},
            {"times", times},
            {"entropy", entropy},
            {"ehrenfest", {{"times", ehrenfest_times}, {"residual1", ehrenfest1}, {"residual2", ehrenfest2}}},
            {"branches", branches},
            {"checkpoints", checkpoints}};
}

namespace {

// <-d V / d x_i> summed over branches, each under the field of its own trajectories.
std::pair<double, double> branch_force(const BranchedWave& state, const PotentialModel& pot) {
    const auto total = state.total();
    std::vector<double> p1, p2;
    if (pot.uses_density()) {
        p1 = total.marginal(1);
        p2 = total.marginal(2);
    }
    double f1 = 0.0, f2 = 0.0;
    for (const auto& b : state.branches) {
        TwoParticleWave w(state.grid, state.m1, state.m2);
        w.psi = b.psi;
        const auto [a, c] = mean_force(w, potential_field(pot, state.grid, p1, p2, b.traj.q1, b.traj.q2));
        f1 += a;
        f2 += c;
    }
    return {f1, f2};
}

}  // namespace

EvolveSummary run_evolve(const RunConfig& config, const std::string& checkpoint_base) {
    const auto& d = config.dynamics;
    const auto pot = d.potential.model();
    Evolver ev(d.grid, d.m1, d.m2, pot, d.dt);
    auto state = d.initial_state();
    const auto echo = config_to_json(config);

    EvolveSummary out;
    std::string last_checkpoint;
    auto checkpoint = [&](const std::string& path) {
        write_checkpoint(path, state, echo);
        out.checkpoints.push_back(path);
        last_checkpoint = path;
    };
    std::vector<double> mean1{position_moments(state.total()).mean1}, mean2{position_moments(state.total()).mean2};
    std::vector<long> force_steps;
    std::vector<std::pair<double, double>> forces;
    auto sample = [&](long step) {
        const auto total = state.total();
        out.times.push_back(state.time);
        out.entropy.push_back(entanglement_entropy(total));
        if (step > 0 && step < d.steps) {
            force_steps.push_back(step);
            forces.push_back(branch_force(state, pot));
        }
    };
    sample(0);
    for (long s = 1; s <= d.steps; ++s) {
        try {
            ev.step(state);
        } catch (const NodeProximityError& e) {
            throw RunError(std::string(e.what()) + " at step " + std::to_string(s), s, last_checkpoint);
        } catch (const OutOfDomainError& e) {
            throw RunError(std::string(e.what()) + " at step " + std::to_string(s), s, last_checkpoint);
        } catch (const DegenerateWindowError& e) {
            throw RunError(std::string(e.what()) + " at step " + std::to_string(s), s, last_checkpoint);
        }
        const auto total = state.total();
        out.norm_drift = std::max(out.norm_drift, std::abs(total.norm() - 1.0));
        out.boundary_density = std::max(out.boundary_density, total.boundary_density());
        const auto m = position_moments(total);
        mean1.push_back(m.mean1);
        mean2.push_back(m.mean2);
        if (s % d.sample_every == 0 || s == d.steps) sample(s);
        if (d.checkpoint_every > 0 && s % d.checkpoint_every == 0 && s < d.steps)
            checkpoint(checkpoint_base + "." + std::to_string(s) + ".ckpt");
    }
    checkpoint(checkpoint_base + ".final.ckpt");

    for (std::size_t i = 0; i < force_steps.size(); ++i) {
        const long s = force_steps[i];
        const double h2 = d.dt * d.dt;
        out.ehrenfest_times.push_back(s * d.dt);
        out.ehrenfest1.push_back((mean1[s + 1] - 2 * mean1[s] + mean1[s - 1]) / h2 - forces[i].first / d.m1);
        out.ehrenfest2.push_back((mean2[s + 1] - 2 * mean2[s] + mean2[s - 1]) / h2 - forces[i].second / d.m2);
    }
    for (auto b : state.branches) {
        b.psi.clear();
        out.final_branches.push_back(std::move(b));
    }
    return out;
}

std::vector<semiclassical::BoundReport> run_bound_check(const RunConfig& config) {
    const auto& d = config.dynamics;
    semiclassical::BoundConfig bc{config.bound.horizon, d.dt, config.bound.sample_every, config.bound.k_sigma};
    return semiclassical::bound_check(d.potential.model(), d.initial_state(), bc);
}

}  // namespace semigrav
