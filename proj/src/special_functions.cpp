#include "semigrav/special_functions.hpp"

#include "semigrav/errors.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace semigrav {

namespace {

constexpr double kInvSqrtPi = std::numbers::inv_sqrtpi;

// Beyond this point e^{x^2} overflows; the continued fraction takes over.
constexpr double kContinuedFractionStart = 26.0;

// e^{x^2} with the rounding error of x*x carried into a first-order correction.
double exp_square(double x) {
    const double hi = x * x;
    const double lo = std::fma(x, x, -hi);
    return std::exp(hi) * (1.0 + lo);
}

// Laplace continued fraction e^{x^2} erfc(x) = (1/sqrt(pi)) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))),
// evaluated by the modified Lentz method. Converges in a handful of terms for x >= 26.
double erfcx_continued_fraction(double x) {
    constexpr double tiny = 1e-300;
    double f = x;
    double c = x;
    double d = 0.0;
    for (int k = 1; k < 200; ++k) {
        const double a = 0.5 * k;
        d = x + a * d;
        if (d == 0.0) d = tiny;
        c = x + a / c;
        if (c == 0.0) c = tiny;
        d = 1.0 / d;
        const double delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-17) break;
    }
    return kInvSqrtPi / f;
}

// 16-point Gauss-Legendre nodes/weights on [-1, 1] (positive half).
constexpr std::array<double, 8> kGl16Nodes = {
    0.0950125098376374401853193, 0.2816035507792589132304605, 0.4580167776572273863424194,
    0.6178762444026437484466718, 0.7554044083550030338951012, 0.8656312023878317438804679,
    0.9445750230732325760779884, 0.9894009349916499325961542};
constexpr std::array<double, 8> kGl16Weights = {
    0.1894506104550684962853967, 0.1826034150449235888667637, 0.1691565193950025381893121,
    0.1495959888165767320815017, 0.1246289712555338720524763, 0.0951585116824927848099251,
    0.0622535239386478928628438, 0.0271524594117540948517806};

}  // namespace

void PacketGeometry::validate() const {
    std::vector<std::string> v;
    if (!std::isfinite(delta_x_big) || !std::isfinite(delta_x_small))
        v.push_back("geometry values must be finite");
    if (delta_x_small < 0.0) v.push_back("delta_x_small must be >= 0");
    if (!(delta_x_big - delta_x_small > 0.0))
        v.push_back("delta_x_big must exceed delta_x_small (R -> 0 phases diverge otherwise)");
    if (!v.empty()) throw ConfigError(std::move(v));
}

double erfcx(double x) {
    if (x < 0.0) return 2.0 * exp_square(x) - erfcx(-x);
    if (x < kContinuedFractionStart) return exp_square(x) * std::erfc(x);
    return erfcx_continued_fraction(x);
}

double j_r(double R, double xi) {
    if (R <= 0.0) return 0.0;
    const double a = std::abs(xi);
    const double s = std::hypot(R, a);
    if (R < 1.0) {
        // J = (2/sqrt(pi)) int_0^L exp(-v (2a + v)) dv over the short interval
        // |xi| <= u <= s, written so that no difference of nearby values appears.
        const double L = R * R / (s + a);
        const double half = 0.5 * L;
        double sum = 0.0;
        for (std::size_t i = 0; i < kGl16Nodes.size(); ++i) {
            for (double sign : {-1.0, 1.0}) {
                const double v = half * (1.0 + sign * kGl16Nodes[i]);
                sum += kGl16Weights[i] * std::exp(-v * (2.0 * a + v));
            }
        }
        return 2.0 * kInvSqrtPi * half * sum;
    }
    return erfcx(a) - std::exp(-R * R) * erfcx(s);
}

double q_func(double p, double q, const PacketGeometry& geom) {
    const double a = 0.25 * geom.delta_x_small * geom.delta_x_small;
    const double mid = 0.5 * (p + q);
    return (std::exp(-p * p) + std::exp(-q * q)) / (1.0 + std::exp(-a)) +
           2.0 * std::exp(-mid * mid) / (1.0 + std::exp(a));
}

double n_norm(double R, const PacketGeometry& geom) {
    if (R <= 0.0) return 0.0;
    const double dx = geom.delta_x_small;
    const double a = 0.25 * dx * dx;
    const double cross = (std::erf(R + 0.5 * dx) + std::erf(R - 0.5 * dx)) / (2.0 * (1.0 + std::exp(a)));
    const double direct =
        (std::erf(R + dx) + std::erf(R - dx) + 2.0 * std::erf(R)) / (4.0 * (1.0 + std::exp(-a)));
    return -std::expm1(-R * R) * (cross + direct);
}

}  // namespace semigrav
