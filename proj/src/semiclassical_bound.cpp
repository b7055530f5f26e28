#include "semigrav/semiclassical_bound.hpp"

#include "semigrav/dynamics/analysis.hpp"
#include "semigrav/dynamics/evolver.hpp"
#include "semigrav/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace semigrav::semiclassical {

using dynamics::cplx;
using dynamics::Grid1D;

double classical_potential(const PotentialModel& pot, const TwoParticleWave& free_wave, double u1, double u2) {
    std::vector<double> p1, p2;
    if (pot.uses_density()) {
        p1 = free_wave.marginal(1);
        p2 = free_wave.marginal(2);
    }
    return dynamics::potential_value(pot, free_wave.grid, p1, p2, u1, u2, u1, u2);
}

std::vector<double> phase_functional(const std::vector<double>& times, const std::vector<double>& potential) {
    if (times.size() != potential.size()) throw std::invalid_argument("times and potential differ in length");
    std::vector<double> s(times.size(), 0.0);
    for (std::size_t i = 1; i < times.size(); ++i)
        s[i] = s[i - 1] - 0.5 * (times[i] - times[i - 1]) * (potential[i] + potential[i - 1]);
    return s;
}

std::vector<double> phase_functional(const std::vector<double>& times, const std::vector<TwoParticleWave>& free_states,
                                     const PotentialModel& pot, const std::vector<std::pair<double, double>>& u) {
    if (free_states.size() != times.size() || u.size() != times.size())
        throw std::invalid_argument("free record, trajectories and times differ in length");
    std::vector<double> v(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) v[i] = classical_potential(pot, free_states[i], u[i].first, u[i].second);
    return phase_functional(times, v);
}

bool BoundReport::holds(double allowance) const {
    for (std::size_t i = 0; i < measured.size(); ++i)
        if (measured[i] > bound[i] + allowance) return false;
    return true;
}

double BoundReport::margin() const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < measured.size(); ++i)
        if (measured[i] > 0.0) m = std::min(m, bound[i] / measured[i]);
    return m;
}

nlohmann::json BoundReport::to_json() const {
    return {{"label", label},         {"T", horizon},           {"eps1", eps1},
            {"eps2", eps2},           {"delta_v_norm", delta_v_norm},
            {"times", times},         {"measured_delta_psi", measured},
            {"bound_series", bound},  {"phase", phase},
            {"holds", holds()}};
}

namespace {

struct BranchTrack {
    TwoParticleWave free;
    double phase = 0.0;
    double last_v = 0.0;
    double run_eps1 = 0.0, run_eps2 = 0.0, run_dv = 0.0;
    BoundReport report;
};

struct Box {
    std::size_t lo1, hi1, lo2, hi2;
};

Box confinement(const TwoParticleWave& free, double k_sigma, double time, const std::string& label) {
    const auto m = dynamics::position_moments(free);
    const Grid1D& g = free.grid;
    const double a1 = m.mean1 - k_sigma * std::sqrt(m.var1), b1 = m.mean1 + k_sigma * std::sqrt(m.var1);
    const double a2 = m.mean2 - k_sigma * std::sqrt(m.var2), b2 = m.mean2 + k_sigma * std::sqrt(m.var2);
    const double top = g.x(g.n - 1);
    if (a1 < g.x_min || b1 > top || a2 < g.x_min || b2 > top) {
        std::ostringstream msg;
        msg << "confinement box of branch '" << label << "' [" << a1 << ", " << b1 << "] x [" << a2 << ", " << b2
            << "] leaves the grid at t = " << time;
        throw ConfigError({msg.str()});
    }
    auto index = [&](double x, bool up) {
        const double s = (x - g.x_min) / g.dx();
        return static_cast<std::size_t>(up ? std::floor(s) : std::ceil(s));
    };
    return {index(a1, false), index(b1, true), index(a2, false), index(b2, true)};
}

TwoParticleWave normalized(const TwoParticleWave& w) {
    TwoParticleWave out = w;
    out.normalize();
    return out;
}

void sample(BranchTrack& tr, const PotentialModel& pot, const dynamics::Branch& br,
            const std::vector<double>& p1, const std::vector<double>& p2, double k_sigma, double time, bool record) {
    const Grid1D& g = tr.free.grid;
    const std::size_t n = g.n;
    const auto box = confinement(normalized(tr.free), k_sigma, time, tr.report.label);
    const auto field = dynamics::potential_field(pot, g, p1, p2, br.traj.q1, br.traj.q2);
    const double h2 = g.dx() * g.dx();
    double eps1 = 0.0, eps2 = 0.0, dv2 = 0.0, dpsi2 = 0.0;
    const cplx dress = std::polar(1.0, tr.phase);
    for (std::size_t i2 = 0; i2 < n; ++i2)
        for (std::size_t i1 = 0; i1 < n; ++i1) {
            const std::size_t i = i1 + n * i2;
            const double dv = field[i] - tr.last_v;
            const bool inside = i1 >= box.lo1 && i1 <= box.hi1 && i2 >= box.lo2 && i2 <= box.hi2;
            if (inside) eps2 = std::max(eps2, std::abs(dv));
            else eps1 = std::max(eps1, std::abs(tr.free.psi[i]));
            dv2 += dv * dv;
            dpsi2 += std::norm(br.psi[i] - dress * tr.free.psi[i]);
        }
    tr.run_eps1 = std::max(tr.run_eps1, eps1);
    tr.run_eps2 = std::max(tr.run_eps2, eps2);
    tr.run_dv = std::max(tr.run_dv, std::sqrt(dv2 * h2));
    if (!record) return;
    tr.report.times.push_back(time);
    tr.report.measured.push_back(std::sqrt(dpsi2 * h2));
    tr.report.bound.push_back(time * (tr.run_eps2 + tr.run_eps1 * tr.run_dv));
    tr.report.phase.push_back(tr.phase);
}

}  // namespace

std::vector<BoundReport> bound_check(const PotentialModel& pot, const BranchedWave& init, const BoundConfig& cfg) {
    if (!(cfg.horizon > 0.0) || !(cfg.dt > 0.0) || cfg.sample_every < 1 || !(cfg.k_sigma > 0.0))
        throw ConfigError({"bound check needs positive horizon, step, sampling interval and box size"});
    const Grid1D& g = init.grid;
    const long steps = static_cast<long>(std::llround(cfg.horizon / cfg.dt));

    dynamics::Evolver full(g, init.m1, init.m2, pot, cfg.dt);
    dynamics::PotentialModel none;
    dynamics::Evolver free_ev(g, init.m1, init.m2, none, cfg.dt);
    BranchedWave state = init;

    std::vector<BranchTrack> tracks;
    for (const auto& b : init.branches) {
        BranchTrack tr;
        tr.free = TwoParticleWave(g, init.m1, init.m2);
        tr.free.psi = b.psi;
        tr.report.label = b.label;
        tr.report.horizon = steps * cfg.dt;
        tracks.push_back(std::move(tr));
    }

    auto classical_values = [&]() {
        TwoParticleWave free_total(g, init.m1, init.m2);
        for (const auto& tr : tracks)
            for (std::size_t i = 0; i < free_total.psi.size(); ++i) free_total.psi[i] += tr.free.psi[i];
        for (auto& tr : tracks) {
            const auto m = dynamics::position_moments(normalized(tr.free));
            tr.last_v = classical_potential(pot, free_total, m.mean1, m.mean2);
        }
    };
    auto sample_all = [&](double time, bool record) {
        const auto total = state.total();
        std::vector<double> p1, p2;
        if (pot.uses_density()) {
            p1 = total.marginal(1);
            p2 = total.marginal(2);
        }
        for (std::size_t b = 0; b < tracks.size(); ++b)
            sample(tracks[b], pot, state.branches[b], p1, p2, cfg.k_sigma, time, record);
    };

    classical_values();
    sample_all(0.0, true);
    std::vector<dynamics::TrajectoryPair> no_trajectories;
    for (long s = 1; s <= steps; ++s) {
        full.step(state);
        std::vector<double> previous;
        for (auto& tr : tracks) {
            double t = 0.0;
            free_ev.evolve_ensemble(tr.free, no_trajectories, t, 1);
            previous.push_back(tr.last_v);
        }
        classical_values();
        for (std::size_t b = 0; b < tracks.size(); ++b)
            tracks[b].phase -= 0.5 * cfg.dt * (previous[b] + tracks[b].last_v);
        sample_all(s * cfg.dt, s % cfg.sample_every == 0 || s == steps);
    }

    std::vector<BoundReport> out;
    for (auto& tr : tracks) {
        tr.report.eps1 = tr.run_eps1;
        tr.report.eps2 = tr.run_eps2;
        tr.report.delta_v_norm = tr.run_dv;
        out.push_back(std::move(tr.report));
    }
    return out;
}

BoundReport bound_check(const PotentialModel& pot, const TwoParticleWave& init, const BoundConfig& cfg) {
    const auto m = dynamics::position_moments(init);
    auto state = BranchedWave::single(init, dynamics::TrajectoryPair{m.mean1, m.mean2, {}});
    return bound_check(pot, state, cfg).front();
}

}  // namespace semigrav::semiclassical
