#pragma once

#include "semigrav/phase_engine.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

namespace semigrav {

using cplx = std::complex<double>;

/// Two spin-1/2 amplitudes ordered (up-up, up-down, down-up, down-down).
struct TwoQubitState {
    std::array<cplx, 4> amplitudes{};

    double norm_squared() const;
    /// Throws InvalidStateError unless the squared norm is 1 to 1e-12.
    void validate() const;
};

enum class Axis { I, X, Y, Z };

/// Post-interferometer spin state with the global phase dropped.
TwoQubitState build_state(const PhaseSet& phases);
TwoQubitState build_state(double phi_plus, double phi_minus);
/// Product of two single-spin Bloch states (polar, azimuth angles).
TwoQubitState product_state(double theta1, double phi1, double theta2, double phi2);

/// <psi| A (x) B |psi> for a normalized state.
double pauli_expectation(const TwoQubitState& state, Axis a, Axis b);

/// |<sx (x) sz> + <sy (x) sy>| in closed form from the phase average and half-difference.
double witness_w(const PhaseSet& phases);
/// The same witness from explicit operator expectation values.
double witness_w_operator(const TwoQubitState& state);

/// Closed-form fidelity witness W_G(theta); negative values certify entanglement.
double witness_wg(double theta, const PhaseSet& phases);
/// W_G(theta) assembled from Pauli correlators.
double witness_wg_pauli(double theta, const TwoQubitState& state);
/// W_G(theta) as the expectation of 2 - 4 |theta><theta|.
double witness_wg_projector(double theta, const TwoQubitState& state);

inline constexpr double kThetaW3 = 4.71238898038468985769396507491925;  // 3 pi / 2
inline constexpr double kThetaW4 = 1.57079632679489661923132169163975;  // pi / 2

/// Reporting grid: 64 uniform angles on [0, 2 pi) and then the two distinguished ones.
std::vector<double> witness_theta_grid();

struct WitnessReport {
    double w = 0.0;
    std::vector<std::pair<double, double>> wg_theta;
    double w3 = 0.0;
    double w4 = 0.0;
    bool entangled = false;   ///< w > 1 or some sampled wg < 0
};

WitnessReport witness_report(const PhaseSet& phases);

struct SeparabilityResult {
    double max_w = 0.0;
    std::uint64_t seed = 0;
    std::size_t samples = 0;
};

/// Largest W over uniformly sampled product states; separability requires max_w <= 1.
SeparabilityResult separability_bound_check(std::size_t n_samples, std::uint64_t seed = 20240601);

/// Von Neumann entropy (nats) of either spin's reduced state.
double spin_entanglement_entropy(const TwoQubitState& state);
/// Pure-state concurrence 2 |a00 a11 - a01 a10|.
double concurrence(const TwoQubitState& state);

}  // namespace semigrav
