#pragma once
// High-precision reference evaluations used only by the tests.

#include <boost/math/special_functions/erf.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>

namespace oracle {

using mp = boost::multiprecision::cpp_bin_float_50;

inline mp erfcx(const mp& x) { return exp(x * x) * boost::math::erfc(x); }

inline double erfcx_d(double x) { return static_cast<double>(erfcx(mp(x))); }

// e^{xi^2} [erf(sqrt(R^2 + xi^2)) - erf(|xi|)] evaluated directly in 50 digits.
inline double naive_j(double R, double xi) {
    const mp r(R), x(xi);
    const mp s = sqrt(r * r + x * x);
    return static_cast<double>(exp(x * x) * (boost::math::erf(s) - boost::math::erf(abs(x))));
}

inline double shape_q(double p, double q, double dx) {
    const mp P(p), Q(q), a = mp(dx) * mp(dx) / 4;
    const mp h = (P + Q) / 2;
    return static_cast<double>((exp(-P * P) + exp(-Q * Q)) / (1 + exp(-a)) + 2 * exp(-h * h) / (1 + exp(a)));
}

}  // namespace oracle
