#pragma once

#include "semigrav/dynamics/grid.hpp"
#include "semigrav/dynamics/potential.hpp"

#include <functional>
#include <memory>
#include <utility>
#include <vector>

namespace semigrav::dynamics {

inline constexpr double kNodeThreshold = 1e-12;

/// Strang-split evolution of the amplitude grid coupled to guiding-equation trajectories.
///
/// Each step applies a half potential kick, the full kinetic propagator in Fourier
/// space and a second half kick; the potential is rebuilt from the current density
/// and trajectories before either kick. Trajectories advance by classical RK4 on the
/// guiding velocity, with the stage fields taken from the same split step. Every
/// branch of a BranchedWave is kicked by the potential of its own trajectory pair,
/// while densities entering the potential come from the sum of all branches.
class Evolver {
public:
    using Observer = std::function<void(const BranchedWave&, long step)>;

    Evolver(const Grid1D& grid, double m1, double m2, PotentialModel pot, double dt);
    ~Evolver();
    Evolver(Evolver&&) noexcept;
    Evolver& operator=(Evolver&&) noexcept;

    /// One step. On error the state is left as it was before the call.
    void step(BranchedWave& state);
    /// `steps` steps, calling `observer` after each. Errors carry the failing step index.
    void evolve(BranchedWave& state, long steps, const Observer& observer = {});
    /// Advances one amplitude grid with many trajectories guided by it. The potential
    /// must not depend on trajectories.
    void evolve_ensemble(TwoParticleWave& psi, std::vector<TrajectoryPair>& ensemble, double& time, long steps,
                         bool record_history = false);

    double dt() const;
    const PotentialModel& potential() const;
    long steps_taken() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Convenience wrapper: evolves a single-branch state in place.
void evolve(TwoParticleWave& psi, TrajectoryPair& traj, const PotentialModel& pot, double dt, long steps);

/// Guiding velocity (Im(d_i Psi / Psi) / m_i) at (q1, q2); gradients spectral, the
/// velocity field interpolated bilinearly. Throws NodeProximityError near nodes.
std::pair<double, double> guiding_velocity(const TwoParticleWave& psi, double q1, double q2);

}  // namespace semigrav::dynamics
