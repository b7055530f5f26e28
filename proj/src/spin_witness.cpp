#include "semigrav/spin_witness.hpp"

#include "semigrav/errors.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace semigrav {

namespace {

using Mat2 = std::array<std::array<cplx, 2>, 2>;

Mat2 pauli(Axis a) {
    const cplx i{0.0, 1.0};
    switch (a) {
        case Axis::I: return {{{1.0, 0.0}, {0.0, 1.0}}};
        case Axis::X: return {{{0.0, 1.0}, {1.0, 0.0}}};
        case Axis::Y: return {{{0.0, -i}, {i, 0.0}}};
        case Axis::Z: return {{{1.0, 0.0}, {0.0, -1.0}}};
    }
    return {};
}

}  // namespace

double TwoQubitState::norm_squared() const {
    double s = 0.0;
    for (const auto& a : amplitudes) s += std::norm(a);
    return s;
}

void TwoQubitState::validate() const {
    const double n = norm_squared();
    if (!(std::abs(n - 1.0) <= 1e-12)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "two-qubit state is not normalized (squared norm " << n << ")";
        throw InvalidStateError(msg.str());
    }
}

TwoQubitState build_state(double phi_plus, double phi_minus) {
    return {{cplx{0.5, 0.0}, 0.5 * std::polar(1.0, phi_plus), 0.5 * std::polar(1.0, phi_minus), cplx{0.5, 0.0}}};
}

TwoQubitState build_state(const PhaseSet& phases) { return build_state(phases.phi_plus, phases.phi_minus); }

TwoQubitState product_state(double theta1, double phi1, double theta2, double phi2) {
    const std::array<cplx, 2> a = {std::cos(0.5 * theta1), std::polar(std::sin(0.5 * theta1), phi1)};
    const std::array<cplx, 2> b = {std::cos(0.5 * theta2), std::polar(std::sin(0.5 * theta2), phi2)};
    return {{a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]}};
}

double pauli_expectation(const TwoQubitState& state, Axis a, Axis b) {
    state.validate();
    const Mat2 A = pauli(a), B = pauli(b);
    const auto& psi = state.amplitudes;
    cplx acc{0.0, 0.0};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) acc += std::conj(psi[2 * i + j]) * A[i][k] * B[j][l] * psi[2 * k + l];
    if (std::abs(acc.imag()) > 1e-12) {
        std::ostringstream msg;
        msg << "Pauli expectation has imaginary residue " << acc.imag();
        throw ConsistencyError(msg.str());
    }
    return acc.real();
}

double witness_w(const PhaseSet& phases) {
    const double sd = std::sin(phases.phi_delta);
    return std::abs(sd * (sd - std::sin(phases.phi_sigma)));
}

double witness_w_operator(const TwoQubitState& state) {
    return std::abs(pauli_expectation(state, Axis::X, Axis::Z) + pauli_expectation(state, Axis::Y, Axis::Y));
}

double witness_wg(double theta, const PhaseSet& phases) {
    const double s = std::sin(0.5 * theta);
    const double sd = std::sin(phases.phi_delta);
    return 2.0 * s * s * sd * sd + std::sin(theta) * (std::sin(phases.phi_minus) + std::sin(phases.phi_plus));
}

double witness_wg_pauli(double theta, const TwoQubitState& state) {
    auto e = [&](Axis a, Axis b) { return pauli_expectation(state, a, b); };
    return e(Axis::I, Axis::I) - e(Axis::X, Axis::X) + std::cos(theta) * (e(Axis::Y, Axis::Y) - e(Axis::Z, Axis::Z)) +
           std::sin(theta) * (e(Axis::Y, Axis::Z) + e(Axis::Z, Axis::Y));
}

double witness_wg_projector(double theta, const TwoQubitState& state) {
    state.validate();
    const auto plus = build_state(0.0, 0.0).amplitudes;
    const auto minus = build_state(std::numbers::pi, std::numbers::pi).amplitudes;
    const cplx phase = std::polar(1.0, theta);
    cplx overlap{0.0, 0.0};
    for (int k = 0; k < 4; ++k) {
        const cplx ref = (plus[k] + phase * minus[k]) / std::numbers::sqrt2;
        overlap += std::conj(ref) * state.amplitudes[k];
    }
    return 2.0 - 4.0 * std::norm(overlap);
}

std::vector<double> witness_theta_grid() {
    std::vector<double> grid;
    grid.reserve(66);
    for (int k = 0; k < 64; ++k) grid.push_back(2.0 * std::numbers::pi * k / 64.0);
    grid.push_back(kThetaW3);
    grid.push_back(kThetaW4);
    return grid;
}

WitnessReport witness_report(const PhaseSet& phases) {
    WitnessReport r;
    r.w = witness_w(phases);
    r.w3 = witness_wg(kThetaW3, phases);
    r.w4 = witness_wg(kThetaW4, phases);
    r.entangled = r.w > 1.0;
    for (double theta : witness_theta_grid()) {
        const double v = witness_wg(theta, phases);
        r.wg_theta.emplace_back(theta, v);
        if (v < 0.0) r.entangled = true;
    }
    return r;
}

SeparabilityResult separability_bound_check(std::size_t n_samples, std::uint64_t seed) {
    if (n_samples == 0) throw std::invalid_argument("separability check needs at least one sample");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto bloch = [&](double& theta, double& phi) {
        theta = std::acos(1.0 - 2.0 * unit(rng));
        phi = 2.0 * std::numbers::pi * unit(rng);
    };
    SeparabilityResult out{0.0, seed, n_samples};
    for (std::size_t k = 0; k < n_samples; ++k) {
        double t1, p1, t2, p2;
        bloch(t1, p1);
        bloch(t2, p2);
        out.max_w = std::max(out.max_w, witness_w_operator(product_state(t1, p1, t2, p2)));
    }
    return out;
}

double spin_entanglement_entropy(const TwoQubitState& state) {
    state.validate();
    const auto& a = state.amplitudes;
    // Reduced state of the first spin: [[p, c], [conj c, 1 - p]].
    const double p = std::norm(a[0]) + std::norm(a[1]);
    const cplx c = a[0] * std::conj(a[2]) + a[1] * std::conj(a[3]);
    const double half_gap = std::sqrt(0.25 * (2.0 * p - 1.0) * (2.0 * p - 1.0) + std::norm(c));
    double s = 0.0;
    for (double lam : {0.5 + half_gap, 0.5 - half_gap})
        if (lam > 0.0) s -= lam * std::log(lam);
    return s;
}

double concurrence(const TwoQubitState& state) {
    const auto& a = state.amplitudes;
    return 2.0 * std::abs(a[0] * a[3] - a[1] * a[2]);
}

}  // namespace semigrav
