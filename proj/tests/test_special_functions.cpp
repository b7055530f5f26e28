#include "oracles.hpp"

#include "semigrav/errors.hpp"
#include "semigrav/quadrature.hpp"
#include "semigrav/special_functions.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace semigrav;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

PacketGeometry geom(double big, double small) { return {big, small}; }

}  // namespace

TEST_CASE("erfcx at the origin and against a 50-digit reference") {
    CHECK(erfcx(0.0) == 1.0);
    CHECK(rel(erfcx(1.0), oracle::erfcx_d(1.0)) < 1e-15);
    for (double x = 0.0; x <= 30.0; x += 0.173) CHECK(rel(erfcx(x), oracle::erfcx_d(x)) < 1e-12);
    for (double x : {-0.5, -1.0, -3.0, -5.0}) CHECK(rel(erfcx(x), oracle::erfcx_d(x)) < 1e-12);
}

TEST_CASE("erfcx matches its asymptotic series at x = 20") {
    const double x = 20.0;
    double term = 1.0, sum = 1.0;
    for (int n = 1; n < 12; ++n) {
        term *= -(2.0 * n - 1.0) / (2.0 * x * x);
        sum += term;
    }
    const double series = sum / (std::sqrt(std::numbers::pi) * x);
    CHECK(rel(erfcx(x), series) < 1e-10);
    CHECK(std::isfinite(erfcx(1e5)));
    CHECK(rel(erfcx(1e5), 1.0 / (std::sqrt(std::numbers::pi) * 1e5)) < 1e-9);
}

TEST_CASE("j_r special values") {
    CHECK(j_r(1.0, 0.0) == doctest::Approx(std::erf(1.0)).epsilon(1e-14));
    CHECK(j_r(0.0, 0.7) == 0.0);
    CHECK(j_r(0.0, -3.0) == 0.0);
    CHECK(rel(j_r(30.0, 2.0), erfcx(2.0)) < 1e-14);
}

TEST_CASE("j_r agrees with the direct form evaluated in high precision") {
    for (double R : {0.01, 0.1, 0.5, 0.99, 1.0, 2.0, 5.0, 8.0})
        for (double xi = -5.0; xi <= 5.0; xi += 0.37) CHECK(std::abs(j_r(R, xi) - oracle::naive_j(R, xi)) <= 1e-12);
}

TEST_CASE("j_r is even, in (0, 1] and increasing in R") {
    const std::vector<double> radii = {0.05, 0.3, 0.9, 1.5, 3.0, 6.0};
    for (double xi : {0.0, 0.2, 1.0, 2.5, 7.0, 30.0}) {
        double prev = 0.0;
        for (double R : radii) {
            const double v = j_r(R, xi);
            CHECK(v == j_r(R, -xi));
            CHECK(v > prev);
            CHECK(v <= 1.0);
            prev = v;
        }
    }
}

TEST_CASE("q_func values and symmetries") {
    CHECK(q_func(0.0, 0.0, geom(1.0, 0.0)) == doctest::Approx(2.0).epsilon(1e-15));
    const auto g = geom(0.25, 0.1);
    CHECK(rel(q_func(0.3, 0.4, g), oracle::shape_q(0.3, 0.4, 0.1)) < 1e-14);
    for (double p = -3.0; p <= 3.0; p += 0.41)
        for (double q = -2.0; q <= 2.0; q += 0.53) {
            CHECK(q_func(p, q, g) == q_func(q, p, g));
            CHECK(q_func(p, q, g) == q_func(-p, -q, g));
            CHECK(q_func(p, q, g) > 0.0);
        }
}

TEST_CASE("n_norm limits and closed forms") {
    const auto g1 = geom(2.0, 1.0);
    CHECK(n_norm(0.0, g1) == 0.0);
    CHECK(n_norm(40.0, g1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(n_norm(40.0, geom(3.0, 2.5)) == doctest::Approx(1.0).epsilon(1e-15));
    for (double R : {0.1, 0.7, 2.0}) {
        const double expect = (1.0 - std::exp(-R * R)) * std::erf(R);
        CHECK(rel(n_norm(R, geom(1.0, 0.0)), expect) < 1e-14);
    }
    double prev = 0.0;
    for (double R = 0.01; R < 8.0; R *= 1.3) {
        const double v = n_norm(R, g1);
        CHECK(v >= prev);
        CHECK(v <= 1.0);
        prev = v;
    }
}

TEST_CASE("n_norm follows its small-R expansion to relative O(R^4)") {
    const double dx = 1.0, e2 = std::exp(0.5 * dx * dx);
    for (double R : {0.02, 0.05, 0.1}) {
        const double expansion = R * R * R * std::exp(-dx * dx) / (std::sqrt(std::numbers::pi) * (1.0 + std::exp(-0.25 * dx * dx))) *
                                 ((1.0 + e2) * (1.0 + e2) * (1.0 - 5.0 * R * R / 6.0) + R * R * dx * dx / 3.0 * (2.0 + e2));
        CHECK(rel(n_norm(R, geom(2.0, 1.0)), expansion) < std::pow(R, 4));
    }
}

TEST_CASE("n_norm equals the probability inside the truncation cylinder") {
    // Marginal density of one particle, in cylinder coordinates about an arm centre.
    for (auto [R, dx] : std::vector<std::pair<double, double>>{{0.3, 0.1}, {1.0, 1.0}, {2.0, 0.5}, {3.5, 1.9}}) {
        const auto g = geom(dx + 1.0, dx);
        const double pref = 1.0 / (2.0 * std::pow(std::numbers::pi, 1.5));
        auto slice = [&](double x) {
            auto radial = [&](double r) { return 2.0 * std::numbers::pi * r * pref * std::exp(-r * r); };
            const double radial_mass = integrate(radial, 0.0, R).value;
            return radial_mass * q_func(x, x + dx, g);
        };
        const double mass = integrate(slice, -R, R).value;
        CHECK(std::abs(mass - n_norm(R, g)) < 1e-6);
    }
}

TEST_CASE("geometry validation") {
    CHECK_NOTHROW(geom(2.0, 1.0).validate());
    CHECK_NOTHROW(geom(1.0, 0.0).validate());
    CHECK_THROWS_AS(geom(1.0, 1.0).validate(), ConfigError);
    CHECK_THROWS_AS(geom(1.0, -0.1).validate(), ConfigError);
    CHECK_THROWS_AS(geom(NAN, 0.1).validate(), ConfigError);
}
