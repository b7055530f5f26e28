#include "semigrav/errors.hpp"
#include "semigrav/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace semigrav;

TEST_CASE("Gauss-Kronrod integrates smooth functions to tolerance") {
    CHECK(integrate([](double x) { return x * x * x - 2.0 * x; }, 0.0, 2.0).value == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(integrate([](double x) { return std::exp(x); }, 0.0, 1.0).value ==
          doctest::Approx(std::numbers::e - 1.0).epsilon(1e-14));
    const auto r = integrate([](double x) { return std::exp(-x * x); }, -10.0, 10.0);
    CHECK(std::abs(r.value - std::sqrt(std::numbers::pi)) < 1e-13);
    CHECK(r.error < 1e-12);
}

TEST_CASE("reversed limits flip the sign") {
    auto f = [](double x) { return std::cos(x); };
    CHECK(integrate(f, 1.0, 0.0).value == doctest::Approx(-std::sin(1.0)).epsilon(1e-14));
    CHECK(integrate(f, 0.5, 0.5).value == 0.0);
}

TEST_CASE("breakpoints at a kink cut the panel count") {
    auto f = [](double x) { return std::abs(x - 0.3137); };
    const double exact = 0.5 * (0.3137 + 1.0) * (0.3137 + 1.0) + 0.5 * (1.0 - 0.3137) * (1.0 - 0.3137);
    const std::vector<double> kink = {0.3137};
    const auto with = integrate(f, -1.0, 1.0, kink);
    const auto without = integrate(f, -1.0, 1.0);
    CHECK(std::abs(with.value - exact) < 1e-14);
    CHECK(std::abs(without.value - exact) < 1e-11);
    CHECK(with.panels < without.panels);
}

TEST_CASE("non-convergence raises with the achieved estimate") {
    QuadratureOptions tight;
    tight.max_panels = 8;
    tight.abs_tol = 1e-15;
    tight.rel_tol = 1e-15;
    auto f = [](double x) { return std::sin(1.0 / x); };
    try {
        integrate(f, 1e-4, 1.0, {}, tight);
        FAIL("expected QuadratureError");
    } catch (const QuadratureError& e) {
        CHECK(e.achieved_error() > 0.0);
    }
}

TEST_CASE("fixed 20-point rule is exact for degree 39") {
    auto f = [](double x) { return std::pow(x, 39) + 1.0; };
    CHECK(gauss_legendre_20(f, 0.0, 1.0) == doctest::Approx(1.0 + 1.0 / 40.0).epsilon(1e-14));
}
