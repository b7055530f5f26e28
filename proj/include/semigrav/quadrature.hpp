#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace semigrav {

struct QuadratureOptions {
    double abs_tol = 1e-14;
    double rel_tol = 1e-13;
    std::size_t max_panels = std::size_t{1} << 15;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;    ///< estimated absolute error
    std::size_t panels = 0;
};

/// Adaptive 7/15-point Gauss-Kronrod integration of f over [a, b].
///
/// Points in `breakpoints` that fall strictly inside (a, b) become initial panel
/// edges; put kinks and other derivative discontinuities there. The worst panel is
/// bisected until the summed error estimate meets max(abs_tol, rel_tol*|I|).
/// Throws QuadratureError when max_panels is reached first.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           std::span<const double> breakpoints = {},
                           const QuadratureOptions& options = {});

/// Fixed 20-point Gauss-Legendre rule on [a, b]; used where the integrand is known
/// to be a low-degree polynomial times a smooth kernel on a short cell.
double gauss_legendre_20(const std::function<double(double)>& f, double a, double b);

}  // namespace semigrav
