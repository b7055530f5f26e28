#pragma once

#include "semigrav/dynamics/grid.hpp"
#include "semigrav/dynamics/potential.hpp"

#include <memory>
#include <utility>
#include <vector>

namespace semigrav::dynamics {

/// Slices psi_1(x) = Psi(x, q2) and psi_2(x) = Psi(q1, x), linear across grid lines.
std::pair<std::vector<cplx>, std::vector<cplx>> conditional_wavefunctions(const TwoParticleWave& psi, double q1,
                                                                            double q2);

/// Ratios of transverse derivatives to the conditional waves. Entries where the
/// conditional amplitude is below threshold x (slice maximum) are zero and unflagged in `defined`.
struct EntanglementFields {
    std::vector<cplx> pi1_1, pi1_2;   ///< particle 1: first and second order
    std::vector<cplx> pi2_1, pi2_2;   ///< particle 2
    std::vector<bool> defined1, defined2;
};

EntanglementFields entanglement_fields(const TwoParticleWave& psi, double q1, double q2,
                                       double threshold = 1e-8);

/// Complex effective potential of the conditional wave of `particle` (1 or 2):
/// V(x, q2) + i dq2/dt Pi^(1) - Pi^(2) / (2 m2) for particle 1, symmetrically for 2.
/// `other_velocity` is the other particle's guiding velocity. Masked points carry only
/// the real interaction part.
std::vector<cplx> effective_potential(const TwoParticleWave& psi, double q1, double q2, const PotentialModel& pot,
                                      int particle, double other_velocity, double threshold = 1e-8);

/// Split-step propagator for a single conditional wave under a given complex potential.
class ConditionalEvolver {
public:
    ConditionalEvolver(const Grid1D& grid, double mass, double dt);
    ~ConditionalEvolver();
    ConditionalEvolver(ConditionalEvolver&&) noexcept;
    ConditionalEvolver& operator=(ConditionalEvolver&&) noexcept;
    /// Half kick with v_start, kinetic step, half kick with v_end.
    void step(std::vector<cplx>& psi, const std::vector<cplx>& v_start, const std::vector<cplx>& v_end) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Von Neumann entropy of particle 1's reduced density matrix, normalized to unit trace.
/// Throws NumericalDegeneracyError for eigenvalues below -1e-10.
double entanglement_entropy(const TwoParticleWave& psi);

struct Moments {
    double mean1 = 0, mean2 = 0;
    double var1 = 0, var2 = 0;
};
Moments position_moments(const TwoParticleWave& psi);
/// <p_i> from spectral derivatives.
std::pair<double, double> mean_momenta(const TwoParticleWave& psi);
/// <-d_i V> over |Psi|^2 for a grid potential (central differences).
std::pair<double, double> mean_force(const TwoParticleWave& psi, const std::vector<double>& v);
/// <-d_i V> for the soft pair potential, using the analytic kernel slope.
std::pair<double, double> mean_pair_force(const TwoParticleWave& psi, const PotentialModel& pot);

/// Empirical CDF distance sup |F_n - F| between sample positions and a grid density.
double ks_statistic(std::vector<double> samples, const Grid1D& grid, const std::vector<double>& density);

/// L2 norm of the difference of two 1D grid functions.
double l2_distance(const Grid1D& grid, const std::vector<cplx>& a, const std::vector<cplx>& b);

}  // namespace semigrav::dynamics
