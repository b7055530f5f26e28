#include "semigrav/dynamics/potential.hpp"

#include "semigrav/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace semigrav::dynamics {

std::string to_string(PotentialKind k) {
    switch (k) {
        case PotentialKind::QuantumPair: return "quantum_pair";
        case PotentialKind::BohmPoint: return "bohm_point";
        case PotentialKind::HybridR: return "hybrid_r";
        case PotentialKind::MeanField: return "mean_field";
    }
    return "unknown";
}

PotentialKind potential_kind_from_string(const std::string& name) {
    for (auto k : {PotentialKind::QuantumPair, PotentialKind::BohmPoint, PotentialKind::HybridR, PotentialKind::MeanField})
        if (to_string(k) == name) return k;
    throw std::invalid_argument("unknown potential '" + name + "'");
}

std::string to_string(TrajectoryTerm t) {
    switch (t) {
        case TrajectoryTerm::Zero: return "zero";
        case TrajectoryTerm::PointNewtonian: return "point_newtonian";
        case TrajectoryTerm::Custom: return "custom";
    }
    return "unknown";
}

TrajectoryTerm trajectory_term_from_string(const std::string& name) {
    for (auto t : {TrajectoryTerm::Zero, TrajectoryTerm::PointNewtonian, TrajectoryTerm::Custom})
        if (to_string(t) == name) return t;
    if (name == "smoothed_newtonian")
        throw std::invalid_argument("the smoothed trajectory term has no dynamical counterpart; use zero, point_newtonian or custom");
    throw std::invalid_argument("unknown trajectory term '" + name + "'");
}

void PotentialModel::validate() const {
    std::vector<std::string> problems;
    if (!(softening > 0.0) || !std::isfinite(softening)) problems.push_back("softening must be positive");
    if (!std::isfinite(coupling)) problems.push_back("coupling must be finite");
    if (kind == PotentialKind::HybridR && !(radius > 0.0)) problems.push_back("window radius must be positive");
    if (gamma == TrajectoryTerm::Custom && !custom_gamma) problems.push_back("custom trajectory term needs a function");
    if (!problems.empty()) throw ConfigError(problems);
}

double PotentialModel::kernel(double s) const { return 1.0 / std::sqrt(s * s + softening * softening); }

double PotentialModel::kernel_slope(double s) const {
    const double r2 = s * s + softening * softening;
    return -s / (r2 * std::sqrt(r2));
}

double PotentialModel::gamma_value(double q1, double q2) const {
    switch (gamma) {
        case TrajectoryTerm::Zero: return 0.0;
        case TrajectoryTerm::PointNewtonian: return coupling * kernel(q1 - q2);
        case TrajectoryTerm::Custom: return custom_gamma(q1, q2);
    }
    return 0.0;
}

namespace {

// Antiderivative in r of (a + b r) / sqrt((r - x)^2 + eps^2).
double linear_kernel_primitive(double a, double b, double x, double eps, double r) {
    const double s = r - x;
    return (a + b * x) * std::asinh(s / eps) + b * std::sqrt(s * s + eps * eps);
}

}  // namespace

std::vector<double> windowed_source(const PotentialModel& pot, const Grid1D& grid, const std::vector<double>& p,
                                    double lo, double hi) {
    const std::size_t n = grid.n;
    const double dx = grid.dx();
    lo = std::max(lo, grid.x(0));
    hi = std::min(hi, grid.x(n - 1));

    struct Piece {
        double r0, r1, a, b;  // p(r) = a + b r on [r0, r1]
    };
    std::vector<Piece> pieces;
    double mass = 0.0;
    if (hi > lo) {
        const auto first = static_cast<std::size_t>(std::floor((lo - grid.x_min) / dx));
        for (std::size_t c = std::min(first, n - 2); c + 1 < n; ++c) {
            const double xa = grid.x(c), xb = grid.x(c + 1);
            if (xa >= hi) break;
            const double r0 = std::max(xa, lo), r1 = std::min(xb, hi);
            if (r1 <= r0) continue;
            const double b = (p[c + 1] - p[c]) / dx;
            const double a = p[c] - b * xa;
            pieces.push_back({r0, r1, a, b});
            mass += a * (r1 - r0) + 0.5 * b * (r1 * r1 - r0 * r0);
        }
    }
    if (!(mass >= 1e-12)) {
        std::ostringstream msg;
        msg << "window [" << lo << ", " << hi << "] holds probability " << mass;
        throw DegenerateWindowError(msg.str());
    }
    std::vector<double> out(n);
    const double eps = pot.softening;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = grid.x(i);
        double acc = 0.0;
        for (const auto& pc : pieces)
            acc += linear_kernel_primitive(pc.a, pc.b, x, eps, pc.r1) - linear_kernel_primitive(pc.a, pc.b, x, eps, pc.r0);
        out[i] = -pot.coupling * acc / mass;
    }
    return out;
}

namespace {

struct SeparableParts {
    std::vector<double> on_x1, on_x2;
    double constant = 0.0;
};

SeparableParts separable_parts(const PotentialModel& pot, const Grid1D& grid, const std::vector<double>& p1,
                               const std::vector<double>& p2, double q1, double q2) {
    const std::size_t n = grid.n;
    SeparableParts s;
    s.constant = pot.gamma_value(q1, q2);
    switch (pot.kind) {
        case PotentialKind::BohmPoint:
            s.on_x1.resize(n);
            s.on_x2.resize(n);
            for (std::size_t i = 0; i < n; ++i) {
                s.on_x1[i] = -pot.coupling * pot.kernel(grid.x(i) - q2);
                s.on_x2[i] = -pot.coupling * pot.kernel(q1 - grid.x(i));
            }
            break;
        case PotentialKind::HybridR:
            s.on_x1 = windowed_source(pot, grid, p2, q2 - pot.radius, q2 + pot.radius);
            s.on_x2 = windowed_source(pot, grid, p1, q1 - pot.radius, q1 + pot.radius);
            break;
        case PotentialKind::MeanField: {
            const double inf = std::numeric_limits<double>::infinity();
            s.on_x1 = windowed_source(pot, grid, p2, -inf, inf);
            s.on_x2 = windowed_source(pot, grid, p1, -inf, inf);
            s.constant = 0.0;
            break;
        }
        case PotentialKind::QuantumPair: break;
    }
    return s;
}

}  // namespace

std::vector<double> potential_field(const PotentialModel& pot, const Grid1D& grid, const std::vector<double>& p1,
                                    const std::vector<double>& p2, double q1, double q2) {
    const std::size_t n = grid.n;
    std::vector<double> v(n * n);
    if (pot.kind == PotentialKind::QuantumPair) {
        for (std::size_t i2 = 0; i2 < n; ++i2)
            for (std::size_t i1 = 0; i1 < n; ++i1) v[i1 + n * i2] = -pot.coupling * pot.kernel(grid.x(i1) - grid.x(i2));
        return v;
    }
    if (pot.coupling == 0.0 && pot.gamma != TrajectoryTerm::Custom) return v;
    const auto s = separable_parts(pot, grid, p1, p2, q1, q2);
    for (std::size_t i2 = 0; i2 < n; ++i2)
        for (std::size_t i1 = 0; i1 < n; ++i1) v[i1 + n * i2] = s.on_x1[i1] + s.on_x2[i2] + s.constant;
    return v;
}

std::vector<double> potential_field(const PotentialModel& pot, const TwoParticleWave& source, double q1, double q2) {
    if (!pot.uses_density()) return potential_field(pot, source.grid, {}, {}, q1, q2);
    return potential_field(pot, source.grid, source.marginal(1), source.marginal(2), q1, q2);
}

double potential_value(const PotentialModel& pot, const Grid1D& grid, const std::vector<double>& p1,
                       const std::vector<double>& p2, double q1, double q2, double x1, double x2) {
    switch (pot.kind) {
        case PotentialKind::QuantumPair: return -pot.coupling * pot.kernel(x1 - x2);
        case PotentialKind::BohmPoint:
            return -pot.coupling * (pot.kernel(x1 - q2) + pot.kernel(q1 - x2)) + pot.gamma_value(q1, q2);
        case PotentialKind::HybridR:
        case PotentialKind::MeanField: {
            const auto s = separable_parts(pot, grid, p1, p2, q1, q2);
            auto lerp = [&](const std::vector<double>& f, double x) {
                std::size_t c;
                double w;
                grid.locate(x, c, w);
                return (1 - w) * f[c] + w * f[c + 1];
            };
            return lerp(s.on_x1, x1) + lerp(s.on_x2, x2) + s.constant;
        }
    }
    return 0.0;
}

}  // namespace semigrav::dynamics
