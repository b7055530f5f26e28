#pragma once

#include "semigrav/dynamics/grid.hpp"
#include "semigrav/dynamics/potential.hpp"
#include "semigrav/phase_engine.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace semigrav {

inline constexpr int kConfigVersion = 1;

/// Window radii: one value, or `count` log-spaced values from `min` to `max`.
struct RadiusSpec {
    bool log_range = false;
    double value = 1.0;
    double min = 0.01;
    double max = 5.0;
    int count = 50;

    std::vector<double> values() const;
};

struct InitialStateSpec {
    std::string kind = "product";             ///< "product" or "four_branch"
    std::vector<double> centres{-2.0, 2.0};   ///< product: packet centres of particles 1, 2
    std::vector<double> widths{1.0, 1.0};     ///< product: amplitude widths
    std::vector<double> momenta{0.0, 0.0};    ///< product: mean wavenumbers
    std::vector<double> branch_centres1{2.5, 1.5};    ///< four_branch: particle 1, spin up / down
    std::vector<double> branch_centres2{-1.5, -2.5};  ///< four_branch: particle 2, spin up / down
    double branch_width = 0.5;
    std::optional<std::vector<double>> trajectory;    ///< product: (q1, q2), default the means
};

struct PotentialSpec {
    std::string kind = "bohm_point";
    double coupling = 1.0;
    double softening = 0.1;
    double radius = 1.0;
    std::string trajectory_term = "zero";

    dynamics::PotentialModel model() const;
};

struct DynamicsSpec {
    dynamics::Grid1D grid{-16.0, 16.0, 256};
    double m1 = 1.0;
    double m2 = 1.0;
    double dt = 0.01;
    long steps = 1000;
    long sample_every = 10;
    long checkpoint_every = 0;  ///< 0: final checkpoint only
    PotentialSpec potential;
    InitialStateSpec initial;

    dynamics::BranchedWave initial_state() const;
};

struct BoundSpec {
    double horizon = 1.0;
    double k_sigma = 5.0;
    long sample_every = 1;
};

struct OutputSpec {
    std::string path;            ///< empty: standard output
    std::string format = "csv";  ///< "csv" or "json"
};

struct RunConfig {
    int version = kConfigVersion;
    std::string mode = "sweep";
    std::string preset;
    PacketGeometry geometry{0.25, 0.1};
    std::vector<double> gammas{1.0};
    RadiusSpec radius;
    std::string gamma_model = "zero";
    QuadratureOptions quadrature = default_phase_quadrature();
    RegimeThresholds regimes;
    std::optional<double> target_phi_delta;
    DynamicsSpec dynamics;
    BoundSpec bound;
    OutputSpec output;
    unsigned threads = 1;

    GammaModel gamma() const;
};

/// Parses and validates; every violation is collected into one ConfigError. A
/// "preset" key starts from that preset and applies the remaining keys on top.
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::string& path);
/// Canonical form: every field explicit, keys sorted.
nlohmann::json config_to_json(const RunConfig& c);
std::string canonical_text(const RunConfig& c);

/// Named parameter sets: fig2a-fig2d, fig3, fig4.
RunConfig preset(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace semigrav
