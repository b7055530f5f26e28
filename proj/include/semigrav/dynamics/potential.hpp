#pragma once

#include "semigrav/dynamics/grid.hpp"

#include <functional>
#include <string>
#include <vector>

namespace semigrav::dynamics {

enum class PotentialKind { QuantumPair, BohmPoint, HybridR, MeanField };
std::string to_string(PotentialKind k);
PotentialKind potential_kind_from_string(const std::string& name);

/// Trajectory-only energy term added to the trajectory-sourced potentials.
enum class TrajectoryTerm { Zero, PointNewtonian, Custom };
std::string to_string(TrajectoryTerm t);
TrajectoryTerm trajectory_term_from_string(const std::string& name);

struct PotentialModel {
    PotentialKind kind = PotentialKind::QuantumPair;
    double coupling = 0.0;     ///< G m1 m2 in energy x length units
    double softening = 0.1;    ///< kernel 1 / sqrt(s^2 + softening^2)
    double radius = 1.0;       ///< window half-width, HybridR only
    TrajectoryTerm gamma = TrajectoryTerm::Zero;
    std::function<double(double, double)> custom_gamma;

    void validate() const;
    double kernel(double s) const;
    /// d kernel / ds
    double kernel_slope(double s) const;
    double gamma_value(double q1, double q2) const;
    bool uses_trajectories() const { return kind == PotentialKind::BohmPoint || kind == PotentialKind::HybridR; }
    bool uses_density() const { return kind == PotentialKind::HybridR || kind == PotentialKind::MeanField; }
};

/// Potential on the grid. Densities that enter the windowed and mean-field terms come
/// from `source`; (q1, q2) are the trajectory positions.
std::vector<double> potential_field(const PotentialModel& pot, const TwoParticleWave& source, double q1, double q2);

/// Same, from precomputed marginals of the source.
std::vector<double> potential_field(const PotentialModel& pot, const Grid1D& grid, const std::vector<double>& p1,
                                    const std::vector<double>& p2, double q1, double q2);

/// -coupling * int_{window} p(r) K(x - r) dr / int_{window} p(r) dr at every grid x, with p
/// linear between grid points and the window clipped to [x_0, x_{n-1}]. Throws
/// DegenerateWindowError when the window holds less than 1e-12 probability.
std::vector<double> windowed_source(const PotentialModel& pot, const Grid1D& grid, const std::vector<double>& p,
                                    double lo, double hi);

/// V at an arbitrary point for the same inputs (QuantumPair and BohmPoint only need q).
double potential_value(const PotentialModel& pot, const Grid1D& grid, const std::vector<double>& p1,
                       const std::vector<double>& p2, double q1, double q2, double x1, double x2);

}  // namespace semigrav::dynamics
