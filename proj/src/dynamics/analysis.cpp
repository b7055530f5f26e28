#include "semigrav/dynamics/analysis.hpp"

#include "fourier.hpp"
#include "semigrav/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace semigrav::dynamics {

namespace {

// Values of a 2D grid field along x with the other coordinate fixed at q (axis 2 fixed
// for particle 1's slice, axis 1 for particle 2's).
std::vector<cplx> slice(const Grid1D& g, const std::vector<cplx>& f, int fixed_axis, double q) {
    std::size_t c;
    double w;
    g.locate(q, c, w);
    const std::size_t n = g.n;
    std::vector<cplx> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = fixed_axis == 2 ? (1 - w) * f[i + n * c] + w * f[i + n * (c + 1)]
                                 : (1 - w) * f[c + n * i] + w * f[c + 1 + n * i];
    }
    return out;
}

std::vector<double> slice_real(const Grid1D& g, const std::vector<double>& f, int fixed_axis, double q) {
    std::vector<cplx> tmp(f.begin(), f.end());
    const auto s = slice(g, tmp, fixed_axis, q);
    std::vector<double> out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[i].real();
    return out;
}

void ratio(const std::vector<cplx>& num, const std::vector<cplx>& den, double floor, std::vector<cplx>& out,
           std::vector<bool>& defined) {
    out.assign(num.size(), cplx{0.0, 0.0});
    defined.assign(num.size(), false);
    for (std::size_t i = 0; i < num.size(); ++i)
        if (std::abs(den[i]) >= floor) {
            out[i] = num[i] / den[i];
            defined[i] = true;
        }
}

double max_abs(const std::vector<cplx>& v) {
    double m = 0.0;
    for (const auto& z : v) m = std::max(m, std::abs(z));
    return m;
}

}  // namespace

std::pair<std::vector<cplx>, std::vector<cplx>> conditional_wavefunctions(const TwoParticleWave& psi, double q1,
                                                                            double q2) {
    return {slice(psi.grid, psi.psi, 2, q2), slice(psi.grid, psi.psi, 1, q1)};
}

EntanglementFields entanglement_fields(const TwoParticleWave& psi, double q1, double q2, double threshold) {
    const Grid1D& g = psi.grid;
    FourierPlan plan(g.n, 2);
    const auto k = g.wavenumbers();
    std::vector<cplx> spectrum, d, scratch;
    plan.forward(psi.psi, spectrum);
    const auto [psi1, psi2] = conditional_wavefunctions(psi, q1, q2);
    const double floor1 = threshold * max_abs(psi1), floor2 = threshold * max_abs(psi2);

    EntanglementFields f;
    std::vector<bool> unused;
    spectral_derivative(plan, k, spectrum, 2, 1, d, scratch);
    ratio(slice(g, d, 2, q2), psi1, floor1, f.pi1_1, f.defined1);
    spectral_derivative(plan, k, spectrum, 2, 2, d, scratch);
    ratio(slice(g, d, 2, q2), psi1, floor1, f.pi1_2, unused);
    spectral_derivative(plan, k, spectrum, 1, 1, d, scratch);
    ratio(slice(g, d, 1, q1), psi2, floor2, f.pi2_1, f.defined2);
    spectral_derivative(plan, k, spectrum, 1, 2, d, scratch);
    ratio(slice(g, d, 1, q1), psi2, floor2, f.pi2_2, unused);
    return f;
}

std::vector<cplx> effective_potential(const TwoParticleWave& psi, double q1, double q2, const PotentialModel& pot,
                                      int particle, double other_velocity, double threshold) {
    if (particle != 1 && particle != 2) throw std::invalid_argument("particle must be 1 or 2");
    const Grid1D& g = psi.grid;
    const auto fields = entanglement_fields(psi, q1, q2, threshold);
    const auto v = potential_field(pot, psi, q1, q2);
    const auto base = particle == 1 ? slice_real(g, v, 2, q2) : slice_real(g, v, 1, q1);
    const auto& first = particle == 1 ? fields.pi1_1 : fields.pi2_1;
    const auto& second = particle == 1 ? fields.pi1_2 : fields.pi2_2;
    const auto& defined = particle == 1 ? fields.defined1 : fields.defined2;
    const double other_mass = particle == 1 ? psi.m2 : psi.m1;
    std::vector<cplx> out(g.n);
    for (std::size_t i = 0; i < g.n; ++i) {
        out[i] = base[i];
        if (defined[i]) out[i] += cplx{0.0, other_velocity} * first[i] - second[i] / (2.0 * other_mass);
    }
    return out;
}

struct ConditionalEvolver::Impl {
    FourierPlan plan;
    std::vector<cplx> kinetic;
    double dt;
    Impl(const Grid1D& g, double m, double tau) : plan(g.n, 1), dt(tau) {
        const auto k = g.wavenumbers();
        kinetic.resize(g.n);
        for (std::size_t i = 0; i < g.n; ++i) kinetic[i] = std::polar(1.0, -0.5 * k[i] * k[i] / m * dt);
    }
};

ConditionalEvolver::ConditionalEvolver(const Grid1D& grid, double mass, double dt)
    : impl_(std::make_unique<Impl>(grid, mass, dt)) {}
ConditionalEvolver::~ConditionalEvolver() = default;
ConditionalEvolver::ConditionalEvolver(ConditionalEvolver&&) noexcept = default;
ConditionalEvolver& ConditionalEvolver::operator=(ConditionalEvolver&&) noexcept = default;

void ConditionalEvolver::step(std::vector<cplx>& psi, const std::vector<cplx>& v_start,
                              const std::vector<cplx>& v_end) const {
    const double half = 0.5 * impl_->dt;
    for (std::size_t i = 0; i < psi.size(); ++i) psi[i] *= std::exp(cplx{0.0, -half} * v_start[i]);
    std::vector<cplx> spec;
    impl_->plan.forward(psi, spec);
    for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= impl_->kinetic[i];
    impl_->plan.backward(spec, psi);
    for (std::size_t i = 0; i < psi.size(); ++i) psi[i] *= std::exp(cplx{0.0, -half} * v_end[i]);
}

double entanglement_entropy(const TwoParticleWave& psi) {
    const std::size_t n = psi.grid.n;
    const double dx = psi.grid.dx();
    // Column-major map: M(i1, i2) = Psi(x_{i1}, x_{i2}).
    Eigen::Map<const Eigen::MatrixXcd> m(psi.psi.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    Eigen::MatrixXcd rho = (dx * dx) * (m * m.adjoint());
    // overlapping branches do not conserve the norm of their sum
    const double trace = rho.trace().real();
    if (!(trace > 0.0)) throw NumericalDegeneracyError("reduced density matrix has zero trace");
    rho /= trace;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double lam = es.eigenvalues()(i);
        if (lam < -1e-10) {
            std::ostringstream msg;
            msg << "reduced density matrix has eigenvalue " << lam;
            throw NumericalDegeneracyError(msg.str());
        }
        if (lam > 0.0) s -= lam * std::log(lam);
    }
    return s;
}

Moments position_moments(const TwoParticleWave& psi) {
    const auto p1 = psi.marginal(1), p2 = psi.marginal(2);
    const Grid1D& g = psi.grid;
    Moments m;
    double z1 = 0, z2 = 0;
    for (std::size_t i = 0; i < g.n; ++i) {
        z1 += p1[i];
        z2 += p2[i];
        m.mean1 += g.x(i) * p1[i];
        m.mean2 += g.x(i) * p2[i];
    }
    m.mean1 /= z1;
    m.mean2 /= z2;
    for (std::size_t i = 0; i < g.n; ++i) {
        m.var1 += (g.x(i) - m.mean1) * (g.x(i) - m.mean1) * p1[i];
        m.var2 += (g.x(i) - m.mean2) * (g.x(i) - m.mean2) * p2[i];
    }
    m.var1 /= z1;
    m.var2 /= z2;
    return m;
}

std::pair<double, double> mean_momenta(const TwoParticleWave& psi) {
    const Grid1D& g = psi.grid;
    FourierPlan plan(g.n, 2);
    const auto k = g.wavenumbers();
    std::vector<cplx> spectrum, d, scratch;
    plan.forward(psi.psi, spectrum);
    double out[2] = {0.0, 0.0};
    for (int axis = 1; axis <= 2; ++axis) {
        spectral_derivative(plan, k, spectrum, axis, 1, d, scratch);
        cplx acc{0.0, 0.0};
        for (std::size_t i = 0; i < d.size(); ++i) acc += std::conj(psi.psi[i]) * cplx{0.0, -1.0} * d[i];
        out[axis - 1] = acc.real() * g.dx() * g.dx();
    }
    return {out[0], out[1]};
}

std::pair<double, double> mean_force(const TwoParticleWave& psi, const std::vector<double>& v) {
    const Grid1D& g = psi.grid;
    const std::size_t n = g.n;
    const double h = g.dx();
    double f1 = 0.0, f2 = 0.0;
    for (std::size_t i2 = 1; i2 + 1 < n; ++i2)
        for (std::size_t i1 = 1; i1 + 1 < n; ++i1) {
            const double rho = std::norm(psi.at(i1, i2));
            f1 -= rho * (v[i1 + 1 + n * i2] - v[i1 - 1 + n * i2]) / (2 * h);
            f2 -= rho * (v[i1 + n * (i2 + 1)] - v[i1 + n * (i2 - 1)]) / (2 * h);
        }
    return {f1 * h * h, f2 * h * h};
}

std::pair<double, double> mean_pair_force(const TwoParticleWave& psi, const PotentialModel& pot) {
    if (pot.kind != PotentialKind::QuantumPair) throw std::invalid_argument("mean_pair_force needs the pair potential");
    const Grid1D& g = psi.grid;
    double f1 = 0.0;
    for (std::size_t i2 = 0; i2 < g.n; ++i2)
        for (std::size_t i1 = 0; i1 < g.n; ++i1)
            f1 += std::norm(psi.at(i1, i2)) * pot.coupling * pot.kernel_slope(g.x(i1) - g.x(i2));
    f1 *= g.dx() * g.dx();
    return {f1, -f1};
}

double ks_statistic(std::vector<double> samples, const Grid1D& grid, const std::vector<double>& density) {
    const std::size_t n = grid.n;
    std::vector<double> cdf(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) cdf[i] = cdf[i - 1] + 0.5 * (density[i] + density[i - 1]) * grid.dx();
    const double total = cdf.back();
    for (auto& c : cdf) c /= total;
    auto F = [&](double x) {
        if (x <= grid.x(0)) return 0.0;
        if (x >= grid.x(n - 1)) return 1.0;
        std::size_t c;
        double w;
        grid.locate(x, c, w);
        return (1 - w) * cdf[c] + w * cdf[c + 1];
    };
    std::sort(samples.begin(), samples.end());
    const double m = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = F(samples[i]);
        d = std::max({d, (static_cast<double>(i) + 1.0) / m - f, f - static_cast<double>(i) / m});
    }
    return d;
}

double l2_distance(const Grid1D& grid, const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
    return std::sqrt(s * grid.dx());
}

}  // namespace semigrav::dynamics
