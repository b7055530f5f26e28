#include "semigrav/errors.hpp"
#include "semigrav/spin_witness.hpp"

#include <Eigen/Dense>
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace semigrav;

namespace {

constexpr double pi = std::numbers::pi;

PhaseSet pm(double plus, double minus) { return PhaseSet::from_plus_minus(0.0, plus, minus); }

// Entropy of the first spin from an Eigen eigen-decomposition of the partial trace.
double entropy_oracle(const TwoQubitState& s) {
    Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k)
            for (int j = 0; j < 2; ++j) rho(i, k) += s.amplitudes[2 * i + j] * std::conj(s.amplitudes[2 * k + j]);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(rho);
    double out = 0.0;
    for (int n = 0; n < 2; ++n) {
        const double lam = es.eigenvalues()(n);
        if (lam > 1e-300) out -= lam * std::log(lam);
    }
    return out;
}

}  // namespace

TEST_CASE("state construction") {
    const auto a = build_state(0.0, 0.0);
    for (const auto& amp : a.amplitudes) CHECK(std::abs(amp - cplx{0.5, 0.0}) < 1e-15);
    const auto b = build_state(pi, pi);
    CHECK(std::abs(b.amplitudes[1] + 0.5) < 1e-15);
    CHECK(std::abs(b.amplitudes[2] + 0.5) < 1e-15);
    CHECK(spin_entanglement_entropy(a) < 1e-12);
    CHECK(spin_entanglement_entropy(b) < 1e-12);
    const auto c = build_state(pi, 0.0);
    CHECK(entropy_oracle(c) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(spin_entanglement_entropy(c) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(concurrence(c) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("Pauli expectations") {
    const auto plus_plus = build_state(0.0, 0.0);
    CHECK(std::abs(pauli_expectation(plus_plus, Axis::X, Axis::Z)) < 1e-15);
    CHECK(pauli_expectation(plus_plus, Axis::X, Axis::X) == doctest::Approx(1.0));
    CHECK(pauli_expectation(build_state(0.3, -1.1), Axis::I, Axis::I) == doctest::Approx(1.0).epsilon(1e-15));
    // <yy> = (cos(phi- - phi+) - 1) / 2
    CHECK(pauli_expectation(build_state(pi / 2, -pi / 2), Axis::Y, Axis::Y) == doctest::Approx(-1.0).epsilon(1e-14));
    TwoQubitState bad{{cplx{1.0, 0.0}, cplx{1.0, 0.0}, cplx{0.0, 0.0}, cplx{0.0, 0.0}}};
    CHECK_THROWS_AS(pauli_expectation(bad, Axis::X, Axis::X), InvalidStateError);
}

TEST_CASE("closed-form witness values") {
    CHECK(witness_w(pm(0.0, 0.0)) == 0.0);
    CHECK(witness_w(pm(pi / 2, -pi / 2)) == doctest::Approx(1.0).epsilon(1e-15));
    for (double d = -3.0; d <= 3.0; d += 0.1) {
        const double w = witness_w(pm(d, -d));
        CHECK(w >= 0.0);
        CHECK(w <= 1.0 + 1e-15);
    }
    CHECK(witness_wg(0.0, pm(0.4, 2.2)) == 0.0);
    CHECK(witness_wg(kThetaW4, pm(pi / 2, -pi / 2)) == doctest::Approx(1.0).epsilon(1e-15));
    const double eps = 1e-4;
    const double w3 = witness_wg(kThetaW3, pm(eps, eps));
    CHECK(w3 < 0.0);
    CHECK(w3 == doctest::Approx(-2.0 * eps).epsilon(1e-6));
}

TEST_CASE("closed forms agree with operator expectations on random phases") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> angle(-2.0 * pi, 2.0 * pi);
    for (int k = 0; k < 10000; ++k) {
        const auto phases = pm(angle(rng), angle(rng));
        const auto state = build_state(phases);
        REQUIRE(std::abs(witness_w(phases) - witness_w_operator(state)) <= 1e-12);
        if (k % 50 == 0)
            for (int t = 0; t < 16; ++t) {
                const double theta = 2.0 * pi * t / 16.0;
                REQUIRE(std::abs(witness_wg(theta, phases) - witness_wg_pauli(theta, state)) <= 1e-12);
                REQUIRE(std::abs(witness_wg(theta, phases) - witness_wg_projector(theta, state)) <= 1e-12);
            }
    }
}

TEST_CASE("witness symmetries") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> angle(-pi, pi);
    for (int k = 0; k < 200; ++k) {
        const double a = angle(rng), b = angle(rng), th = angle(rng);
        CHECK(witness_w(pm(a, b)) == doctest::Approx(witness_w(pm(-a, -b))).epsilon(1e-13));
        CHECK(std::abs(witness_wg(th, pm(a, b)) - witness_wg(th + 2.0 * pi, pm(a, b))) < 1e-12);
    }
}

TEST_CASE("report grid and distinguished angles") {
    const auto grid = witness_theta_grid();
    CHECK(grid.size() == 66);
    CHECK(grid.front() == 0.0);
    const auto phases = pm(0.3, 0.2);
    const auto r = witness_report(phases);
    CHECK(r.w3 == doctest::Approx(witness_wg(1.5 * pi, phases)).epsilon(1e-12));
    CHECK(r.w4 == doctest::Approx(witness_wg(0.5 * pi, phases)).epsilon(1e-12));
    CHECK(r.wg_theta.size() == 66);
    CHECK(r.entangled);
    CHECK_FALSE(witness_report(pm(0.0, 0.0)).entangled);
}

TEST_CASE("product states never exceed the separability bound") {
    CHECK(witness_w_operator(build_state(0.0, 0.0)) == doctest::Approx(0.0));
    const auto r = separability_bound_check(20000, 99);
    CHECK(r.max_w <= 1.0 + 1e-9);
    CHECK(r.max_w > 0.9);
    CHECK(separability_bound_check(500, 5).max_w == separability_bound_check(500, 5).max_w);
}

TEST_CASE("bound is reached by a z-eigenstate product") {
    // Coarse scan of four Bloch angles, then coordinate refinement.
    std::array<double, 4> best{0, 0, 0, 0};
    double best_w = -1.0;
    for (int a = 0; a <= 8; ++a)
        for (int b = 0; b < 8; ++b)
            for (int c = 0; c <= 8; ++c)
                for (int d = 0; d < 8; ++d) {
                    std::array<double, 4> x{pi * a / 8, 2 * pi * b / 8, pi * c / 8, 2 * pi * d / 8};
                    const double w = witness_w_operator(product_state(x[0], x[1], x[2], x[3]));
                    if (w > best_w) best_w = w, best = x;
                }
    for (double step = 0.2; step > 1e-5; step *= 0.5)
        for (int i = 0; i < 4; ++i)
            for (double s : {step, -step}) {
                auto x = best;
                x[i] += s;
                const double w = witness_w_operator(product_state(x[0], x[1], x[2], x[3]));
                if (w > best_w) best_w = w, best = x;
            }
    CHECK(best_w == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(best_w <= 1.0 + 1e-12);
    // Spin 1 along x and spin 2 up along z saturates it exactly.
    CHECK(witness_w_operator(product_state(pi / 2, 0.0, 0.0, 0.0)) == doctest::Approx(1.0).epsilon(1e-15));
}
