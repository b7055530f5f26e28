#include "semigrav/phase_engine.hpp"

#include "semigrav/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace semigrav {

namespace {

constexpr double kSqrtPi = 1.772453850905516027298167483341145;

void require_positive_radius(double R, const char* where) {
    if (!(R > 0.0) || !std::isfinite(R)) {
        std::ostringstream msg;
        msg << where << ": window radius must be positive and finite, got " << R;
        throw std::invalid_argument(msg.str());
    }
}

// q(x) = Q(x, x + dx)
double q_shape(double x, const PacketGeometry& geom) { return q_func(x, x + geom.delta_x_small, geom); }

// erf(b) - erf(a) without cancellation in either tail.
double erf_diff(double a, double b) {
    if (a > 0.0) return std::erfc(a) - std::erfc(b);
    if (b < 0.0) return std::erfc(-b) - std::erfc(-a);
    return std::erf(b) - std::erf(a);
}

double erfcx_derivative(double y) { return 2.0 * y * erfcx(y) - 2.0 / kSqrtPi; }

double integrate_phase(const std::function<double(double)>& f, double a, double b,
                       std::initializer_list<double> breaks, const QuadratureOptions& quad) {
    std::vector<double> pts(breaks);
    return integrate(f, a, b, pts, quad).value;
}

// Gamma-free interaction part of the average phase, via the exact strip reduction
// of the window integral (no cancellation between branches).
double sigma_interaction(double R, const PacketGeometry& geom, const QuadratureOptions& quad) {
    const double dX = geom.delta_x_big;
    const double dx = geom.delta_x_small;
    if (dx == 0.0) return 0.0;
    const double scale = 0.5 / n_norm(R, geom);
    auto pair_sum = [&](double z) { return j_r(R, z - dX) + j_r(R, z + dX); };
    auto f = [&](double z) { return scale * q_shape(z, geom) * (pair_sum(z + dx) - pair_sum(z)); };
    QuadratureOptions strip = quad;
    strip.abs_tol = 0.0;  // the strip value can sit far below any absolute floor
    return integrate_phase(f, R - dx, R, {dX, -dX, dX - dx, -dX - dx}, strip);
}

double delta_interaction(double R, const PacketGeometry& geom, const QuadratureOptions& quad) {
    const double dX = geom.delta_x_big;
    const double dx = geom.delta_x_small;
    const double scale = 0.5 / n_norm(R, geom);
    auto f = [&](double x) { return scale * q_shape(x, geom) * (j_r(R, x + dX + dx) - j_r(R, x - dX + dx)); };
    return integrate_phase(f, -R, R, {-dX - dx, dX - dx}, quad);
}

double global_interaction(double R, const PacketGeometry& geom, const QuadratureOptions& quad) {
    const double dX = geom.delta_x_big;
    const double scale = 0.5 / n_norm(R, geom);
    auto f = [&](double x) { return scale * q_shape(x, geom) * (j_r(R, x + dX) + j_r(R, x - dX)); };
    return integrate_phase(f, -R, R, {-dX, dX}, quad);
}

double gamma_level(const GammaModel& gamma, double xi, double R, const PacketGeometry& geom,
                   const CouplingConfig& coupling, bool use_expansion) {
    if (use_expansion && gamma.kind() == GammaModel::Kind::SmoothedNewtonian)
        return i_r_small(R, xi, geom, coupling);
    return gamma.g(xi, R, geom, coupling);
}

std::pair<double, double> offsets_impl(double R, const PacketGeometry& geom, const CouplingConfig& coupling,
                                       const GammaModel& gamma, bool use_expansion) {
    if (gamma.kind() == GammaModel::Kind::Zero) return {0.0, 0.0};
    const double dX = geom.delta_x_big;
    const double dx = geom.delta_x_small;
    const double centre = gamma_level(gamma, dX, R, geom, coupling, use_expansion);
    return {centre - gamma_level(gamma, dX + dx, R, geom, coupling, use_expansion),
            centre - gamma_level(gamma, dX - dx, R, geom, coupling, use_expansion)};
}

}  // namespace

// ---------------------------------------------------------------------------

void CouplingConfig::validate() const {
    if (!std::isfinite(gamma_big) || gamma_big < 0.0) {
        std::ostringstream msg;
        msg << "coupling must be finite and nonnegative, got " << gamma_big;
        throw ConfigError({msg.str()});
    }
}

GammaModel::GammaModel(Kind k) : kind_(k), label_(to_string(k)) {}

GammaModel GammaModel::custom(std::function<double(double)> g, std::string label) {
    if (!g) throw std::invalid_argument("custom gamma model needs a callable");
    GammaModel m(Kind::Custom);
    m.custom_ = std::move(g);
    m.label_ = std::move(label);
    return m;
}

double GammaModel::g(double xi, double R, const PacketGeometry& geom, const CouplingConfig& coupling) const {
    switch (kind_) {
        case Kind::Zero: return 0.0;
        case Kind::PointNewtonian: return coupling.gamma_big / std::abs(xi);
        case Kind::SmoothedNewtonian:
            return R > 0.0 ? i_r(R, xi, geom, coupling) : coupling.gamma_big / std::abs(xi);
        case Kind::Custom: return custom_(xi);
    }
    return 0.0;
}

std::string to_string(GammaModel::Kind kind) {
    switch (kind) {
        case GammaModel::Kind::Zero: return "zero";
        case GammaModel::Kind::PointNewtonian: return "point_newtonian";
        case GammaModel::Kind::SmoothedNewtonian: return "smoothed_newtonian";
        case GammaModel::Kind::Custom: return "custom";
    }
    return "unknown";
}

GammaModel::Kind gamma_kind_from_string(const std::string& name) {
    for (auto k : {GammaModel::Kind::Zero, GammaModel::Kind::PointNewtonian, GammaModel::Kind::SmoothedNewtonian,
                   GammaModel::Kind::Custom})
        if (to_string(k) == name) return k;
    throw std::invalid_argument("unknown gamma model '" + name + "'");
}

std::string to_string(PhaseMethod m) {
    switch (m) {
        case PhaseMethod::Quadrature: return "quad";
        case PhaseMethod::SmallR: return "small_r";
        case PhaseMethod::LargeR: return "large_r";
    }
    return "unknown";
}

PhaseSet PhaseSet::from_plus_minus(double global, double plus, double minus) {
    return {global, plus, minus, 0.5 * (plus + minus), 0.5 * (plus - minus)};
}

PhaseSet PhaseSet::from_sigma_delta(double global, double sigma, double delta) {
    return {global, sigma + delta, sigma - delta, sigma, delta};
}

QuadratureOptions default_phase_quadrature() {
    QuadratureOptions q;
    q.abs_tol = 1e-11;
    q.rel_tol = 1e-12;
    return q;
}

double branch_phase(int s1, int s2, double R, const PacketGeometry& geom, const CouplingConfig& coupling,
                    const GammaModel& gamma, const QuadratureOptions& quad) {
    if ((s1 != 1 && s1 != -1) || (s2 != 1 && s2 != -1)) throw std::invalid_argument("spin labels must be +1 or -1");
    require_positive_radius(R, "branch_phase");
    const double dx = geom.delta_x_small;
    const double shift = geom.delta_x_big + 0.5 * (s1 - s2) * dx;
    const double scale = 0.5 / n_norm(R, geom);
    auto f = [&](double x) {
        return scale * (q_shape(s1 * x, geom) + q_shape(-s2 * x, geom)) * j_r(R, x + shift);
    };
    const double interaction = integrate_phase(f, -R, R, {-shift}, quad);
    return coupling.gamma_big * interaction - gamma.g(std::abs(shift), R, geom, coupling);
}

PhaseSet phase_set(double R, const PacketGeometry& geom, const CouplingConfig& coupling, const GammaModel& gamma,
                   const QuadratureOptions& quad) {
    require_positive_radius(R, "phase_set");
    const double G = coupling.gamma_big;
    const double tol = 1e-8 * std::max(1.0, G);

    const double pp = branch_phase(+1, +1, R, geom, coupling, gamma, quad);
    const double mm = branch_phase(-1, -1, R, geom, coupling, gamma, quad);
    if (std::abs(pp - mm) > tol) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "branch phases (++) = " << pp << " and (--) = " << mm << " differ at R = " << R;
        throw ConsistencyError(msg.str());
    }
    const double pm = branch_phase(+1, -1, R, geom, coupling, gamma, quad);
    const double mp = branch_phase(-1, +1, R, geom, coupling, gamma, quad);

    const auto [gamma_plus, gamma_minus] = offsets_impl(R, geom, coupling, gamma, false);
    const double sigma = G * sigma_interaction(R, geom, quad) + 0.5 * (gamma_plus + gamma_minus);
    const double delta = G * delta_interaction(R, geom, quad) + 0.5 * (gamma_plus - gamma_minus);
    const double global = G * global_interaction(R, geom, quad) - gamma.g(geom.delta_x_big, R, geom, coupling);

    PhaseSet out = PhaseSet::from_sigma_delta(global, sigma, delta);
    const double branch_plus = pm - 0.5 * (pp + mm);
    const double branch_minus = mp - 0.5 * (pp + mm);
    if (std::abs(branch_plus - out.phi_plus) > tol || std::abs(branch_minus - out.phi_minus) > tol ||
        std::abs(0.5 * (pp + mm) - global) > tol) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "branch differences (" << branch_plus << ", " << branch_minus << ") disagree with the reduced form ("
            << out.phi_plus << ", " << out.phi_minus << ") at R = " << R;
        throw ConsistencyError(msg.str());
    }
    return out;
}

double i_r(double R, double xi, const PacketGeometry& geom, const CouplingConfig& coupling,
           const QuadratureOptions& quad) {
    require_positive_radius(R, "i_r");
    const double scale = 0.5 / n_norm(R, geom);
    auto f = [&](double x) { return scale * q_shape(x, geom) * j_r(R, x + xi); };
    return coupling.gamma_big * integrate_phase(f, -R, R, {-xi}, quad);
}

double i_r_small(double R, double xi, const PacketGeometry& geom, const CouplingConfig& coupling) {
    const double dx = geom.delta_x_small;
    const double a = std::abs(xi);
    const double correction = R * R / (12.0 * xi * xi) * (1.0 + 8.0 * xi * dx / (1.0 + std::exp(0.5 * dx * dx)));
    return coupling.gamma_big / a * (1.0 + correction);
}

PhaseSet small_r_phases(double R, const PacketGeometry& geom, const CouplingConfig& coupling,
                        const GammaModel& gamma) {
    const double dX = geom.delta_x_big;
    const double dx = geom.delta_x_small;
    const double own = i_r_small(R, dX, geom, coupling) + i_r_small(R, -dX, geom, coupling);
    const auto [gamma_plus, gamma_minus] = offsets_impl(R, geom, coupling, gamma, true);
    const double plus = 2.0 * i_r_small(R, dx + dX, geom, coupling) - own + gamma_plus;
    const double minus = 2.0 * i_r_small(R, dx - dX, geom, coupling) - own + gamma_minus;
    const double global = 0.5 * own - gamma_level(gamma, dX, R, geom, coupling, true);
    return PhaseSet::from_plus_minus(global, plus, minus);
}

namespace {

struct MeanFieldPhases {
    double plus, minus, global;
};

MeanFieldPhases mean_field(const PacketGeometry& geom, const CouplingConfig& coupling, const QuadratureOptions& quad) {
    const double G = coupling.gamma_big;
    if (G == 0.0) return {0.0, 0.0, 0.0};
    const double dX = geom.delta_x_big;
    const double dx = geom.delta_x_small;
    const double span = 40.0 + dX + dx;
    auto kernel = [](double xi) { return erfcx(std::abs(xi)); };
    auto own = [&](double x) { return 0.5 * (kernel(x + dX) + kernel(x - dX)); };
    auto h_plus = [&](double x) { return q_shape(x, geom) * (kernel(x + dX + dx) - own(x)); };
    auto h_minus = [&](double x) { return q_shape(x, geom) * (kernel(x - dX + dx) - own(x)); };
    auto h_global = [&](double x) { return q_shape(x, geom) * own(x); };
    const std::initializer_list<double> breaks = {-dX - dx, dX - dx, -dX, dX};
    return {G * integrate_phase(h_plus, -span, span, breaks, quad),
            G * integrate_phase(h_minus, -span, span, breaks, quad),
            G * integrate_phase(h_global, -span, span, breaks, quad)};
}

}  // namespace

std::pair<double, double> phi_infinity(const PacketGeometry& geom, const CouplingConfig& coupling,
                                       const QuadratureOptions& quad) {
    const auto mf = mean_field(geom, coupling, quad);
    return {mf.plus, mf.minus};
}

PhaseSet large_r_phases(double R, const PacketGeometry& geom, const CouplingConfig& coupling,
                        const QuadratureOptions& quad) {
    require_positive_radius(R, "large_r_phases");
    const double G = coupling.gamma_big;
    const double dX = geom.delta_x_big;
    const double dx = geom.delta_x_small;
    const double damp = std::exp(-R * R);
    const double e4 = std::exp(0.25 * dx * dx);
    const double c_r = damp * R * dx * dx * (1.0 + 2.0 * e4) / (2.0 * kSqrtPi * (1.0 + e4));
    const double inv_left = 1.0 / (1.0 + 1.0 / e4);  // 1 / (1 + e^{-dx^2/4})
    const double amp = G * damp / (kSqrtPi * R * R * R);

    const auto mf = mean_field(geom, coupling, quad);
    const double mf_delta = 0.5 * (mf.plus - mf.minus);
    const double sigma = amp * dx * inv_left;
    const double delta = (1.0 + c_r) * mf_delta + amp * dX * (inv_left + kSqrtPi * dx);
    return PhaseSet::from_sigma_delta((1.0 + c_r) * mf.global, sigma, delta);
}

double large_r_sigma_leading(double R, const PacketGeometry& geom, const CouplingConfig& coupling) {
    require_positive_radius(R, "large_r_sigma_leading");
    const double dX = geom.delta_x_big;
    const double dx = geom.delta_x_small;
    const double a = 0.25 * dx * dx;
    const double strip_mass =
        0.5 * kSqrtPi *
        (erf_diff(R - dx, R + dx) / (1.0 + std::exp(-a)) + 2.0 * erf_diff(R - 0.5 * dx, R + 0.5 * dx) / (1.0 + std::exp(a)));
    const double slope = erfcx_derivative(R - dX) + erfcx_derivative(R + dX);
    return 0.5 * coupling.gamma_big * dx * slope * strip_mass / n_norm(R, geom);
}

std::pair<double, double> gamma_offsets(double R, const PacketGeometry& geom, const CouplingConfig& coupling,
                                        const GammaModel& gamma) {
    return offsets_impl(R, geom, coupling, gamma, false);
}

RoutedPhases phases_auto(double R, const PacketGeometry& geom, const CouplingConfig& coupling,
                         const GammaModel& gamma, const RegimeThresholds& regimes, const QuadratureOptions& quad) {
    if (R < regimes.small_r_max) return {small_r_phases(R, geom, coupling, gamma), PhaseMethod::SmallR};
    if (R > regimes.large_r_min) {
        PhaseSet base = large_r_phases(R, geom, coupling, quad);
        const auto [gp, gm] = gamma_offsets(R, geom, coupling, gamma);
        const double global = base.global_phase - gamma.g(geom.delta_x_big, R, geom, coupling);
        return {PhaseSet::from_sigma_delta(global, base.phi_sigma + 0.5 * (gp + gm), base.phi_delta + 0.5 * (gp - gm)),
                PhaseMethod::LargeR};
    }
    return {phase_set(R, geom, coupling, gamma, quad), PhaseMethod::Quadrature};
}

}  // namespace semigrav
