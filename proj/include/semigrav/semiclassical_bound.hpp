#pragma once

#include "semigrav/dynamics/grid.hpp"
#include "semigrav/dynamics/potential.hpp"

#include <json.hpp>

#include <string>
#include <utility>
#include <vector>

namespace semigrav::semiclassical {

using dynamics::BranchedWave;
using dynamics::PotentialModel;
using dynamics::TwoParticleWave;

/// V[free](u, u): the potential with the free wave as density source, evaluated at the
/// classical point u with the trajectories also placed at u.
double classical_potential(const PotentialModel& pot, const TwoParticleWave& free_wave, double u1, double u2);

/// S(t) = -int_0^t V dt' by cumulative trapezoid over the sampled values.
std::vector<double> phase_functional(const std::vector<double>& times, const std::vector<double>& potential);

/// Same, evaluating V along the classical trajectories u(t) for a recorded free evolution.
std::vector<double> phase_functional(const std::vector<double>& times, const std::vector<TwoParticleWave>& free_states,
                                     const PotentialModel& pot, const std::vector<std::pair<double, double>>& u);

struct BoundConfig {
    double horizon = 1.0;
    double dt = 0.01;
    long sample_every = 1;  ///< steps between recorded samples
    double k_sigma = 5.0;   ///< confinement box half-width in packet widths
};

/// Measured distance to the phase-dressed free solution against the Cauchy-Schwarz bound.
/// eps1, eps2 and delta_v_norm are maxima over the whole horizon; bound(t) uses the
/// running maxima up to t.
struct BoundReport {
    std::string label;
    double horizon = 0.0;
    double eps1 = 0.0;
    double eps2 = 0.0;
    double delta_v_norm = 0.0;
    std::vector<double> times;
    std::vector<double> measured;
    std::vector<double> bound;
    std::vector<double> phase;

    /// measured <= bound + allowance at every sample.
    bool holds(double allowance = 1e-6) const;
    /// min bound / measured over samples with measured > 0 (infinite if none).
    double margin() const;
    nlohmann::json to_json() const;
};

/// Co-evolves the full and free solutions; one report per branch. Each branch is dressed
/// with its own phase and compared against its own free component. Throws ConfigError
/// when a confinement box leaves the grid.
std::vector<BoundReport> bound_check(const PotentialModel& pot, const BranchedWave& init, const BoundConfig& cfg);

/// Single-branch form with the trajectory starting at the mean positions.
BoundReport bound_check(const PotentialModel& pot, const TwoParticleWave& init, const BoundConfig& cfg);

}  // namespace semigrav::semiclassical
