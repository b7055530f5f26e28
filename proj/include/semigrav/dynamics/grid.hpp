#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace semigrav::dynamics {

using cplx = std::complex<double>;

/// Periodic grid of n points on [x_min, x_max); the same grid serves both particles.
struct Grid1D {
    double x_min = -16.0;
    double x_max = 16.0;
    std::size_t n = 256;

    double dx() const { return (x_max - x_min) / static_cast<double>(n); }
    double x(std::size_t i) const { return x_min + static_cast<double>(i) * dx(); }
    /// Angular wavenumbers in FFT order.
    std::vector<double> wavenumbers() const;
    /// Throws ConfigError unless n >= 64 is a power of two and the box is nonempty.
    void validate() const;
    /// Fractional cell position of x; throws OutOfDomainError outside [x_0, x_{n-1}].
    void locate(double x, std::size_t& cell, double& frac) const;
};

struct TrajectorySample {
    double t = 0.0;
    double q1 = 0.0;
    double q2 = 0.0;
};

struct TrajectoryPair {
    double q1 = 0.0;
    double q2 = 0.0;
    std::vector<TrajectorySample> history;

    void record(double t) { history.push_back({t, q1, q2}); }
};

/// Amplitude grid psi[i1 + n * i2] = Psi(x_{i1}, x_{i2}).
struct TwoParticleWave {
    Grid1D grid;
    double m1 = 1.0;
    double m2 = 1.0;
    std::vector<cplx> psi;

    TwoParticleWave() = default;
    TwoParticleWave(const Grid1D& g, double mass1, double mass2);

    static TwoParticleWave product(const Grid1D& g, double mass1, double mass2,
                                   const std::function<cplx(double)>& alpha, const std::function<cplx(double)>& beta);

    cplx& at(std::size_t i1, std::size_t i2) { return psi[i1 + grid.n * i2]; }
    const cplx& at(std::size_t i1, std::size_t i2) const { return psi[i1 + grid.n * i2]; }

    double norm() const;
    void normalize();
    /// Marginal density of particle 1 or 2 on the grid.
    std::vector<double> marginal(int particle) const;
    /// Largest |Psi|^2 on the outermost grid rows and columns.
    double boundary_density() const;
    /// Amplitude at (q1, q2) by bilinear interpolation.
    cplx interpolate(double q1, double q2) const;
};

/// Gaussian amplitude exp(-(x - c)^2 / (2 w^2) + i k x), unnormalized.
std::function<cplx(double)> gaussian_packet(double centre, double width, double momentum = 0.0);

/// Component of a spin-resolved state carrying its own trajectory pair.
struct Branch {
    std::string label;
    std::vector<cplx> psi;
    TrajectoryPair traj;
};

/// Sum of branch components; densities that source potentials come from the sum.
struct BranchedWave {
    Grid1D grid;
    double m1 = 1.0;
    double m2 = 1.0;
    double time = 0.0;
    std::vector<Branch> branches;

    TwoParticleWave total() const;
    /// Single-branch state around one trajectory pair; records t = 0 if the pair has no history.
    static BranchedWave single(const TwoParticleWave& wave, const TrajectoryPair& traj);
    /// Four branches alpha(x1 - a_s) beta(x2 - b_s) with trajectories at the centres,
    /// jointly normalized; labels "++", "+-", "-+", "--".
    static BranchedWave four_branch(const Grid1D& g, double mass1, double mass2, double width,
                                    double a_plus, double a_minus, double b_plus, double b_minus);
};

}  // namespace semigrav::dynamics
