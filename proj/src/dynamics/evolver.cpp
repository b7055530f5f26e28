#include "semigrav/dynamics/evolver.hpp"

#include "fourier.hpp"
#include "semigrav/errors.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace semigrav::dynamics {

namespace {

struct VelocityGrid {
    std::vector<double> v1, v2, rho;
};

struct Workspace {
    std::vector<cplx> d1, d2, scratch;
};

// Velocity field of the wave whose values and transform are given.
void velocity_grid(const FourierPlan& plan, const std::vector<double>& k, const std::vector<cplx>& values,
                   const std::vector<cplx>& spectrum, double m1, double m2, VelocityGrid& out, Workspace& ws) {
    spectral_derivative(plan, k, spectrum, 1, 1, ws.d1, ws.scratch);
    spectral_derivative(plan, k, spectrum, 2, 1, ws.d2, ws.scratch);
    const std::size_t size = values.size();
    out.v1.resize(size);
    out.v2.resize(size);
    out.rho.resize(size);
    for (std::size_t i = 0; i < size; ++i) {
        const double rho = std::norm(values[i]);
        out.rho[i] = rho;
        out.v1[i] = (std::conj(values[i]) * ws.d1[i]).imag() / (rho * m1);
        out.v2[i] = (std::conj(values[i]) * ws.d2[i]).imag() / (rho * m2);
    }
}

struct Corners {
    std::size_t c1, c2;
    double f1, f2;
    std::size_t idx[4];
    double w[4];
};

Corners corners(const Grid1D& g, double q1, double q2) {
    Corners c{};
    g.locate(q1, c.c1, c.f1);
    g.locate(q2, c.c2, c.f2);
    const std::size_t n = g.n;
    c.idx[0] = c.c1 + n * c.c2;
    c.idx[1] = c.c1 + 1 + n * c.c2;
    c.idx[2] = c.c1 + n * (c.c2 + 1);
    c.idx[3] = c.c1 + 1 + n * (c.c2 + 1);
    c.w[0] = (1 - c.f1) * (1 - c.f2);
    c.w[1] = c.f1 * (1 - c.f2);
    c.w[2] = (1 - c.f1) * c.f2;
    c.w[3] = c.f1 * c.f2;
    return c;
}

std::pair<double, double> sample_velocity(const Grid1D& g, const VelocityGrid& v, double q1, double q2) {
    const auto c = corners(g, q1, q2);
    const double floor = kNodeThreshold * kNodeThreshold;
    double a = 0.0, b = 0.0;
    for (int j = 0; j < 4; ++j) {
        if (!(v.rho[c.idx[j]] >= floor)) {
            std::ostringstream msg;
            msg << "wave function amplitude below " << kNodeThreshold << " next to (" << q1 << ", " << q2 << ")";
            throw NodeProximityError(msg.str(), -1);
        }
        a += c.w[j] * v.v1[c.idx[j]];
        b += c.w[j] * v.v2[c.idx[j]];
    }
    return {a, b};
}

// Bilinear interpolation of central differences of a real grid field.
std::pair<double, double> sample_gradient(const Grid1D& g, const std::vector<double>& f, double q1, double q2) {
    const auto c = corners(g, q1, q2);
    const std::size_t n = g.n;
    const double h = g.dx();
    auto diff = [&](std::size_t i1, std::size_t i2, int axis) {
        auto at = [&](std::size_t a, std::size_t b) { return f[a + n * b]; };
        std::size_t i = axis == 1 ? i1 : i2;
        std::size_t lo = i > 0 ? i - 1 : i, hi = i + 1 < n ? i + 1 : i;
        const double span = static_cast<double>(hi - lo) * h;
        return axis == 1 ? (at(hi, i2) - at(lo, i2)) / span : (at(i1, hi) - at(i1, lo)) / span;
    };
    const std::size_t p1[4] = {c.c1, c.c1 + 1, c.c1, c.c1 + 1};
    const std::size_t p2[4] = {c.c2, c.c2, c.c2 + 1, c.c2 + 1};
    double gx = 0.0, gy = 0.0;
    for (int j = 0; j < 4; ++j) {
        gx += c.w[j] * diff(p1[j], p2[j], 1);
        gy += c.w[j] * diff(p1[j], p2[j], 2);
    }
    return {gx, gy};
}

void kick(std::vector<cplx>& psi, const std::vector<double>& v, double tau) {
    for (std::size_t i = 0; i < psi.size(); ++i) psi[i] *= std::polar(1.0, -v[i] * tau);
}

void marginals_of(const Grid1D& g, const std::vector<cplx>& psi, std::vector<double>& p1, std::vector<double>& p2) {
    const std::size_t n = g.n;
    p1.assign(n, 0.0);
    p2.assign(n, 0.0);
    for (std::size_t i2 = 0; i2 < n; ++i2)
        for (std::size_t i1 = 0; i1 < n; ++i1) {
            const double r = std::norm(psi[i1 + n * i2]);
            p1[i1] += r;
            p2[i2] += r;
        }
    for (std::size_t i = 0; i < n; ++i) {
        p1[i] *= g.dx();
        p2[i] *= g.dx();
    }
}

}  // namespace

struct Evolver::Impl {
    Grid1D grid;
    double m1, m2;
    PotentialModel pot;
    double dt;
    long steps = 0;
    FourierPlan plan;
    std::vector<double> k;
    std::vector<cplx> half_kinetic;  // exp(-i T dt / 2) per mode

    Impl(const Grid1D& g, double a, double b, PotentialModel p, double tau)
        : grid(g), m1(a), m2(b), pot(std::move(p)), dt(tau), plan(g.n, 2), k(g.wavenumbers()) {
        const std::size_t n = g.n;
        half_kinetic.resize(n * n);
        for (std::size_t i2 = 0; i2 < n; ++i2)
            for (std::size_t i1 = 0; i1 < n; ++i1) {
                const double energy = 0.5 * k[i1] * k[i1] / m1 + 0.5 * k[i2] * k[i2] / m2;
                half_kinetic[i1 + n * i2] = std::polar(1.0, -0.5 * energy * dt);
            }
    }

    std::vector<double> field(const std::vector<double>& p1, const std::vector<double>& p2, double q1, double q2) const {
        return potential_field(pot, grid, p1, p2, q1, q2);
    }

    // Stage data of one branch within a step.
    struct Stage {
        std::vector<cplx> kinetic;   // after the kinetic propagator
        VelocityGrid end_velocity;
        double q4_1 = 0, q4_2 = 0;   // position of the last RK stage
        double k_sum_1 = 0, k_sum_2 = 0;  // k1 + 2 k2 + 2 k3
        std::vector<double> start_field;
    };

    Stage first_pass(const std::vector<cplx>& psi, double q1, double q2, const std::vector<double>& p1,
                     const std::vector<double>& p2, Workspace& ws, bool need_field_reuse) const {
        Stage s;
        s.start_field = field(p1, p2, q1, q2);
        std::vector<cplx> kicked = psi;
        kick(kicked, s.start_field, 0.5 * dt);

        std::vector<cplx> spectrum;
        plan.forward(kicked, spectrum);
        VelocityGrid v;
        velocity_grid(plan, k, kicked, spectrum, m1, m2, v, ws);
        auto [a1, a2] = sample_velocity(grid, v, q1, q2);
        const auto [g1, g2] = sample_gradient(grid, s.start_field, q1, q2);
        a1 += 0.5 * dt * g1 / m1;
        a2 += 0.5 * dt * g2 / m2;

        for (std::size_t i = 0; i < spectrum.size(); ++i) spectrum[i] *= half_kinetic[i];
        std::vector<cplx> mid;
        plan.backward(spectrum, mid);
        velocity_grid(plan, k, mid, spectrum, m1, m2, v, ws);
        const auto [b1, b2] = sample_velocity(grid, v, q1 + 0.5 * dt * a1, q2 + 0.5 * dt * a2);
        const auto [c1, c2] = sample_velocity(grid, v, q1 + 0.5 * dt * b1, q2 + 0.5 * dt * b2);

        for (std::size_t i = 0; i < spectrum.size(); ++i) spectrum[i] *= half_kinetic[i];
        plan.backward(spectrum, s.kinetic);
        velocity_grid(plan, k, s.kinetic, spectrum, m1, m2, s.end_velocity, ws);
        s.q4_1 = q1 + dt * c1;
        s.q4_2 = q2 + dt * c2;
        s.k_sum_1 = a1 + 2.0 * b1 + 2.0 * c1;
        s.k_sum_2 = a2 + 2.0 * b2 + 2.0 * c2;
        if (!need_field_reuse) s.start_field.clear();
        return s;
    }

    // Final RK stage and the closing half kick for one branch.
    std::pair<double, double> second_pass(Stage& s, double q1, double q2, const std::vector<double>& p1,
                                          const std::vector<double>& p2, std::vector<double>& end_field) const {
        const bool moving = pot.uses_trajectories() || pot.uses_density();
        const std::vector<double> stage_field = moving ? field(p1, p2, s.q4_1, s.q4_2) : s.start_field;
        auto [d1, d2] = sample_velocity(grid, s.end_velocity, s.q4_1, s.q4_2);
        const auto [g1, g2] = sample_gradient(grid, stage_field, s.q4_1, s.q4_2);
        d1 -= 0.5 * dt * g1 / m1;
        d2 -= 0.5 * dt * g2 / m2;
        const double n1 = q1 + dt / 6.0 * (s.k_sum_1 + d1);
        const double n2 = q2 + dt / 6.0 * (s.k_sum_2 + d2);
        end_field = pot.uses_trajectories() ? field(p1, p2, n1, n2) : stage_field;
        return {n1, n2};
    }
};

Evolver::Evolver(const Grid1D& grid, double m1, double m2, PotentialModel pot, double dt) {
    grid.validate();
    pot.validate();
    if (!(dt > 0.0) || !(m1 > 0.0) || !(m2 > 0.0)) throw std::invalid_argument("time step and masses must be positive");
    impl_ = std::make_unique<Impl>(grid, m1, m2, std::move(pot), dt);
}

Evolver::~Evolver() = default;
Evolver::Evolver(Evolver&&) noexcept = default;
Evolver& Evolver::operator=(Evolver&&) noexcept = default;

double Evolver::dt() const { return impl_->dt; }
const PotentialModel& Evolver::potential() const { return impl_->pot; }
long Evolver::steps_taken() const { return impl_->steps; }

void Evolver::step(BranchedWave& state) {
    auto& im = *impl_;
    const Grid1D& g = im.grid;
    Workspace ws;
    std::vector<double> p1, p2;
    if (im.pot.uses_density()) {
        if (state.branches.size() == 1) marginals_of(g, state.branches[0].psi, p1, p2);
        else marginals_of(g, state.total().psi, p1, p2);
    }

    std::vector<Impl::Stage> stages;
    stages.reserve(state.branches.size());
    for (const auto& b : state.branches)
        stages.push_back(im.first_pass(b.psi, b.traj.q1, b.traj.q2, p1, p2, ws, true));

    // Densities after the kinetic step; the closing kicks only change phases.
    if (im.pot.uses_density()) {
        if (stages.size() == 1) marginals_of(g, stages[0].kinetic, p1, p2);
        else {
            std::vector<cplx> sum(stages[0].kinetic.size(), cplx{0.0, 0.0});
            for (const auto& s : stages)
                for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += s.kinetic[i];
            marginals_of(g, sum, p1, p2);
        }
    }

    std::vector<std::pair<double, double>> positions;
    for (std::size_t b = 0; b < stages.size(); ++b) {
        std::vector<double> end_field;
        positions.push_back(im.second_pass(stages[b], state.branches[b].traj.q1, state.branches[b].traj.q2, p1, p2,
                                           end_field));
        kick(stages[b].kinetic, end_field, 0.5 * im.dt);
    }
    // Commit.
    state.time += im.dt;
    for (std::size_t b = 0; b < stages.size(); ++b) {
        auto& br = state.branches[b];
        br.psi = std::move(stages[b].kinetic);
        br.traj.q1 = positions[b].first;
        br.traj.q2 = positions[b].second;
        br.traj.record(state.time);
    }
    ++im.steps;
}

void Evolver::evolve(BranchedWave& state, long steps, const Observer& observer) {
    for (long s = 0; s < steps; ++s) {
        try {
            step(state);
        } catch (const NodeProximityError& e) {
            throw NodeProximityError(e.what(), s);
        } catch (const OutOfDomainError& e) {
            throw OutOfDomainError(e.what(), s);
        }
        if (observer) observer(state, s);
    }
}

void Evolver::evolve_ensemble(TwoParticleWave& psi, std::vector<TrajectoryPair>& ensemble, double& time, long steps,
                              bool record_history) {
    auto& im = *impl_;
    if (im.pot.uses_trajectories())
        throw std::invalid_argument("ensemble evolution needs a potential that ignores trajectories");
    const Grid1D& g = im.grid;
    const double dt = im.dt;
    Workspace ws;
    std::vector<double> p1, p2;
    for (long s = 0; s < steps; ++s) {
        if (im.pot.uses_density()) marginals_of(g, psi.psi, p1, p2);
        const auto v_start = im.field(p1, p2, 0.0, 0.0);
        std::vector<cplx> kicked = psi.psi;
        kick(kicked, v_start, 0.5 * dt);
        std::vector<cplx> spectrum, mid, kin;

        const bool guided = !ensemble.empty();
        im.plan.forward(kicked, spectrum);
        VelocityGrid v0, vm, ve;
        if (guided) velocity_grid(im.plan, im.k, kicked, spectrum, im.m1, im.m2, v0, ws);
        for (std::size_t i = 0; i < spectrum.size(); ++i) spectrum[i] *= im.half_kinetic[i];
        if (guided) {
            im.plan.backward(spectrum, mid);
            velocity_grid(im.plan, im.k, mid, spectrum, im.m1, im.m2, vm, ws);
        }
        for (std::size_t i = 0; i < spectrum.size(); ++i) spectrum[i] *= im.half_kinetic[i];
        im.plan.backward(spectrum, kin);
        if (guided) velocity_grid(im.plan, im.k, kin, spectrum, im.m1, im.m2, ve, ws);
        if (im.pot.uses_density()) marginals_of(g, kin, p1, p2);
        const auto v_end = im.pot.uses_density() ? im.field(p1, p2, 0.0, 0.0) : v_start;

        std::vector<std::pair<double, double>> next(ensemble.size());
        try {
            for (std::size_t j = 0; j < ensemble.size(); ++j) {
                const double q1 = ensemble[j].q1, q2 = ensemble[j].q2;
                auto [a1, a2] = sample_velocity(g, v0, q1, q2);
                const auto [ga1, ga2] = sample_gradient(g, v_start, q1, q2);
                a1 += 0.5 * dt * ga1 / im.m1;
                a2 += 0.5 * dt * ga2 / im.m2;
                const auto [b1, b2] = sample_velocity(g, vm, q1 + 0.5 * dt * a1, q2 + 0.5 * dt * a2);
                const auto [c1, c2] = sample_velocity(g, vm, q1 + 0.5 * dt * b1, q2 + 0.5 * dt * b2);
                const double r1 = q1 + dt * c1, r2 = q2 + dt * c2;
                auto [d1, d2] = sample_velocity(g, ve, r1, r2);
                const auto [gd1, gd2] = sample_gradient(g, v_end, r1, r2);
                d1 -= 0.5 * dt * gd1 / im.m1;
                d2 -= 0.5 * dt * gd2 / im.m2;
                next[j] = {q1 + dt / 6.0 * (a1 + 2 * b1 + 2 * c1 + d1), q2 + dt / 6.0 * (a2 + 2 * b2 + 2 * c2 + d2)};
            }
        } catch (const NodeProximityError& e) {
            throw NodeProximityError(e.what(), s);
        } catch (const OutOfDomainError& e) {
            throw OutOfDomainError(e.what(), s);
        }
        kick(kin, v_end, 0.5 * dt);
        psi.psi = std::move(kin);
        time += dt;
        for (std::size_t j = 0; j < ensemble.size(); ++j) {
            ensemble[j].q1 = next[j].first;
            ensemble[j].q2 = next[j].second;
            if (record_history) ensemble[j].record(time);
        }
        ++im.steps;
    }
}

void evolve(TwoParticleWave& psi, TrajectoryPair& traj, const PotentialModel& pot, double dt, long steps) {
    Evolver ev(psi.grid, psi.m1, psi.m2, pot, dt);
    auto state = BranchedWave::single(psi, traj);
    ev.evolve(state, steps);
    psi.psi = std::move(state.branches[0].psi);
    traj = std::move(state.branches[0].traj);
}

std::pair<double, double> guiding_velocity(const TwoParticleWave& psi, double q1, double q2) {
    const Grid1D& g = psi.grid;
    FourierPlan plan(g.n, 2);
    const auto k = g.wavenumbers();
    std::vector<cplx> spectrum;
    plan.forward(psi.psi, spectrum);
    VelocityGrid v;
    Workspace ws;
    velocity_grid(plan, k, psi.psi, spectrum, psi.m1, psi.m2, v, ws);
    if (std::abs(psi.interpolate(q1, q2)) < kNodeThreshold)
        throw NodeProximityError("guiding velocity undefined at a node of the wave function", -1);
    return sample_velocity(g, v, q1, q2);
}

}  // namespace semigrav::dynamics
