#include "semigrav/dynamics/grid.hpp"

#include "semigrav/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace semigrav::dynamics {

std::vector<double> Grid1D::wavenumbers() const {
    std::vector<double> k(n);
    const double base = 2.0 * std::numbers::pi / (x_max - x_min);
    for (std::size_t i = 0; i < n; ++i) {
        const long j = i < n / 2 ? static_cast<long>(i) : static_cast<long>(i) - static_cast<long>(n);
        k[i] = base * static_cast<double>(j);
    }
    return k;
}

void Grid1D::validate() const {
    std::vector<std::string> problems;
    if (n < 64 || (n & (n - 1)) != 0) problems.push_back("grid size must be a power of two >= 64, got " + std::to_string(n));
    if (!(x_max > x_min) || !std::isfinite(x_min) || !std::isfinite(x_max)) problems.push_back("grid box must satisfy x_min < x_max");
    if (!problems.empty()) throw ConfigError(problems);
}

void Grid1D::locate(double x, std::size_t& cell, double& frac) const {
    const double s = (x - x_min) / dx();
    if (!(s >= 0.0) || !(s <= static_cast<double>(n - 1))) {
        std::ostringstream msg;
        msg << "position " << x << " outside the grid interior [" << x_min << ", " << this->x(n - 1) << "]";
        throw OutOfDomainError(msg.str(), -1);
    }
    cell = std::min<std::size_t>(static_cast<std::size_t>(s), n - 2);
    frac = s - static_cast<double>(cell);
}

TwoParticleWave::TwoParticleWave(const Grid1D& g, double mass1, double mass2)
    : grid(g), m1(mass1), m2(mass2), psi(g.n * g.n, cplx{0.0, 0.0}) {}

TwoParticleWave TwoParticleWave::product(const Grid1D& g, double mass1, double mass2,
                                         const std::function<cplx(double)>& alpha,
                                         const std::function<cplx(double)>& beta) {
    TwoParticleWave w(g, mass1, mass2);
    std::vector<cplx> a(g.n), b(g.n);
    for (std::size_t i = 0; i < g.n; ++i) {
        a[i] = alpha(g.x(i));
        b[i] = beta(g.x(i));
    }
    for (std::size_t i2 = 0; i2 < g.n; ++i2)
        for (std::size_t i1 = 0; i1 < g.n; ++i1) w.at(i1, i2) = a[i1] * b[i2];
    w.normalize();
    return w;
}

double TwoParticleWave::norm() const {
    double s = 0.0;
    for (const auto& v : psi) s += std::norm(v);
    return std::sqrt(s * grid.dx() * grid.dx());
}

void TwoParticleWave::normalize() {
    const double nrm = norm();
    if (!(nrm > 0.0)) throw InvalidStateError("cannot normalize a vanishing wave function");
    for (auto& v : psi) v /= nrm;
}

std::vector<double> TwoParticleWave::marginal(int particle) const {
    const std::size_t n = grid.n;
    std::vector<double> p(n, 0.0);
    for (std::size_t i2 = 0; i2 < n; ++i2)
        for (std::size_t i1 = 0; i1 < n; ++i1) p[particle == 1 ? i1 : i2] += std::norm(at(i1, i2));
    for (auto& v : p) v *= grid.dx();
    return p;
}

double TwoParticleWave::boundary_density() const {
    const std::size_t n = grid.n;
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        m = std::max({m, std::norm(at(0, i)), std::norm(at(n - 1, i)), std::norm(at(i, 0)), std::norm(at(i, n - 1))});
    return m;
}

cplx TwoParticleWave::interpolate(double q1, double q2) const {
    std::size_t c1, c2;
    double f1, f2;
    grid.locate(q1, c1, f1);
    grid.locate(q2, c2, f2);
    return (1 - f1) * (1 - f2) * at(c1, c2) + f1 * (1 - f2) * at(c1 + 1, c2) + (1 - f1) * f2 * at(c1, c2 + 1) +
           f1 * f2 * at(c1 + 1, c2 + 1);
}

std::function<cplx(double)> gaussian_packet(double centre, double width, double momentum) {
    return [=](double x) {
        const double s = (x - centre) / width;
        return std::polar(std::exp(-0.5 * s * s), momentum * x);
    };
}

TwoParticleWave BranchedWave::total() const {
    TwoParticleWave w(grid, m1, m2);
    for (const auto& b : branches)
        for (std::size_t k = 0; k < w.psi.size(); ++k) w.psi[k] += b.psi[k];
    return w;
}

BranchedWave BranchedWave::single(const TwoParticleWave& wave, const TrajectoryPair& traj) {
    BranchedWave bw;
    bw.grid = wave.grid;
    bw.m1 = wave.m1;
    bw.m2 = wave.m2;
    bw.branches.push_back({"single", wave.psi, traj});
    if (traj.history.empty()) bw.branches[0].traj.record(0.0);
    return bw;
}

BranchedWave BranchedWave::four_branch(const Grid1D& g, double mass1, double mass2, double width, double a_plus,
                                       double a_minus, double b_plus, double b_minus) {
    BranchedWave bw;
    bw.grid = g;
    bw.m1 = mass1;
    bw.m2 = mass2;
    const double a_pos[2] = {a_plus, a_minus};
    const double b_pos[2] = {b_plus, b_minus};
    const char* sign[2] = {"+", "-"};
    for (int s1 = 0; s1 < 2; ++s1)
        for (int s2 = 0; s2 < 2; ++s2) {
            auto w = TwoParticleWave::product(g, mass1, mass2, gaussian_packet(a_pos[s1], width),
                                              gaussian_packet(b_pos[s2], width));
            TrajectoryPair t{a_pos[s1], b_pos[s2], {}};
            t.record(0.0);
            bw.branches.push_back({std::string(sign[s1]) + sign[s2], std::move(w.psi), std::move(t)});
        }
    const double nrm = bw.total().norm();
    for (auto& b : bw.branches)
        for (auto& v : b.psi) v /= nrm;
    return bw;
}

}  // namespace semigrav::dynamics
