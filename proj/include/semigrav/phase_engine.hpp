#pragma once

#include "semigrav/quadrature.hpp"
#include "semigrav/special_functions.hpp"

#include <functional>
#include <string>
#include <utility>

namespace semigrav {

/// Dimensionless coupling G m^2 tau / hbar, a length in packet-width units.
struct CouplingConfig {
    double gamma_big = 0.0;
    void validate() const;
};

/// Trajectory-only phase correction. Each variant supplies g(xi) so that the
/// correction to the +/- phases is g(dX) - g(dX +/- dx).
class GammaModel {
public:
    enum class Kind { Zero, PointNewtonian, SmoothedNewtonian, Custom };

    GammaModel() = default;
    static GammaModel zero() { return GammaModel(Kind::Zero); }
    static GammaModel point_newtonian() { return GammaModel(Kind::PointNewtonian); }
    static GammaModel smoothed_newtonian() { return GammaModel(Kind::SmoothedNewtonian); }
    /// `g` returns a phase in radians for a separation xi > 0; it is used as given.
    static GammaModel custom(std::function<double(double)> g, std::string label = "custom");

    Kind kind() const { return kind_; }
    const std::string& label() const { return label_; }
    /// Phase-level function at separation xi for window radius R.
    double g(double xi, double R, const PacketGeometry& geom, const CouplingConfig& coupling) const;

private:
    explicit GammaModel(Kind k);
    Kind kind_ = Kind::Zero;
    std::string label_ = "zero";
    std::function<double(double)> custom_;
};

std::string to_string(GammaModel::Kind kind);
GammaModel::Kind gamma_kind_from_string(const std::string& name);

struct PhaseSet {
    double global_phase = 0.0;
    double phi_plus = 0.0;
    double phi_minus = 0.0;
    double phi_sigma = 0.0;   ///< (phi_plus + phi_minus) / 2
    double phi_delta = 0.0;   ///< (phi_plus - phi_minus) / 2

    /// Builds the set from the +/- phases.
    static PhaseSet from_plus_minus(double global, double plus, double minus);
    /// Builds the set from average and half-difference; keeps a tiny average exact
    /// where (plus + minus) / 2 would lose it to rounding.
    static PhaseSet from_sigma_delta(double global, double sigma, double delta);
};

enum class PhaseMethod { Quadrature, SmallR, LargeR };
std::string to_string(PhaseMethod m);

struct RegimeThresholds {
    double small_r_max = 0.005;  ///< below: small-R expansion
    double large_r_min = 6.0;    ///< above: large-R asymptotics
};

/// Quadrature tolerances for the phase integrals; the absolute tolerance applies
/// per unit coupling.
QuadratureOptions default_phase_quadrature();

/// Phase of spin branch (s1, s2) in {+1, -1}^2 by quadrature over the window.
double branch_phase(int s1, int s2, double R, const PacketGeometry& geom, const CouplingConfig& coupling,
                    const GammaModel& gamma, const QuadratureOptions& quad = default_phase_quadrature());

/// All five phases by quadrature. The four branch phases are computed and the
/// (++)/(--) equality and the branch differences are cross-checked.
PhaseSet phase_set(double R, const PacketGeometry& geom, const CouplingConfig& coupling, const GammaModel& gamma,
                   const QuadratureOptions& quad = default_phase_quadrature());

/// Windowed single-source integral (Gamma/2) * int q(x) J_R(x + xi) / N(R) dx.
double i_r(double R, double xi, const PacketGeometry& geom, const CouplingConfig& coupling,
           const QuadratureOptions& quad = default_phase_quadrature());

/// Second-order small-R expansion of i_r; exact point-source value at R = 0.
double i_r_small(double R, double xi, const PacketGeometry& geom, const CouplingConfig& coupling);

/// Phases from the small-R expansion; at R = 0 the point-source limit.
PhaseSet small_r_phases(double R, const PacketGeometry& geom, const CouplingConfig& coupling,
                        const GammaModel& gamma);

/// Mean-field (+/-) phases from whole-line quadrature with the untruncated kernel.
std::pair<double, double> phi_infinity(const PacketGeometry& geom, const CouplingConfig& coupling,
                                       const QuadratureOptions& quad = default_phase_quadrature());

/// Published large-R asymptotic phases, trajectory correction omitted.
PhaseSet large_r_phases(double R, const PacketGeometry& geom, const CouplingConfig& coupling,
                        const QuadratureOptions& quad = default_phase_quadrature());

/// Leading large-R term of the phase average obtained by expanding the exact
/// strip form of the average; tracks quadrature where the published form does not.
double large_r_sigma_leading(double R, const PacketGeometry& geom, const CouplingConfig& coupling);

/// Trajectory-correction contributions (to phi_plus, phi_minus) at window radius R.
std::pair<double, double> gamma_offsets(double R, const PacketGeometry& geom, const CouplingConfig& coupling,
                                        const GammaModel& gamma);

struct RoutedPhases {
    PhaseSet phases;
    PhaseMethod method = PhaseMethod::Quadrature;
};

/// Picks expansion or quadrature by R. The large-R branch adds the trajectory
/// correction back so routing never changes the model.
RoutedPhases phases_auto(double R, const PacketGeometry& geom, const CouplingConfig& coupling,
                         const GammaModel& gamma, const RegimeThresholds& regimes = {},
                         const QuadratureOptions& quad = default_phase_quadrature());

}  // namespace semigrav
