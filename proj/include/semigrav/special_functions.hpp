#pragma once

// Building blocks of the Gaussian-packet phase integrals. All lengths are in
// units of the packet width (sigma = 1).

namespace semigrav {

/// Interferometer geometry: arm-centre separation and spin splitting.
struct PacketGeometry {
    double delta_x_big = 0.0;    ///< Delta x, distance between the two particles' arm centres
    double delta_x_small = 0.0;  ///< delta x, spin-dependent splitting of each particle

    /// Throws ConfigError unless delta_x_small >= 0 and delta_x_big > delta_x_small.
    void validate() const;
};

/// Scaled complementary error function e^{x^2} erfc(x).
///
/// Relative error below 1e-13 for x >= 0; finite up to x ~ 1e154. For x < -26.6
/// the result overflows to +inf.
double erfcx(double x);

/// J_R(xi) = (2/sqrt(pi)) int_0^R r e^{-r^2} / sqrt(r^2 + xi^2) dr
///         = e^{xi^2} [erf(sqrt(R^2 + xi^2)) - erf(|xi|)].
/// Even in xi, increasing in R, J_0 = 0 and J_inf = erfcx(|xi|).
double j_r(double R, double xi);

/// Marginal shape function Q(p, q) of a two-branch Gaussian packet pair split by
/// geom.delta_x_small. Symmetric: Q(p,q) = Q(q,p) = Q(-p,-q).
double q_func(double p, double q, const PacketGeometry& geom);

/// Probability that a two-branch particle lies inside the truncation cylinder
/// (|x| <= R, r <= R) centred on one of its branch trajectories. Lies in [0, 1],
/// nondecreasing, N(0) = 0, N(inf) = 1.
double n_norm(double R, const PacketGeometry& geom);

}  // namespace semigrav
