#pragma once

#include "semigrav/config.hpp"
#include "semigrav/dynamics/grid.hpp"
#include "semigrav/semiclassical_bound.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace semigrav {

struct EvolveSummary {
    double norm_drift = 0.0;         ///< max |norm - 1| over all steps
    double boundary_density = 0.0;   ///< max |Psi|^2 on the box edge over all steps
    std::vector<double> times;       ///< sample times
    std::vector<double> entropy;     ///< entanglement entropy at the sample times
    /// d^2<x_i>/dt^2 - F_i / m_i at interior sample times, F summed over branches
    std::vector<double> ehrenfest_times;
    std::vector<double> ehrenfest1, ehrenfest2;
    std::vector<dynamics::Branch> final_branches;  ///< labels and trajectory histories (amplitudes dropped)
    std::vector<std::string> checkpoints;

    nlohmann::json to_json() const;
};

/// Runs config.dynamics, writing checkpoints `<base>.<step>.ckpt` every
/// checkpoint_every steps and `<base>.final.ckpt` at the end. Dynamics errors are
/// rethrown as RunError with the step and the last checkpoint path.
EvolveSummary run_evolve(const RunConfig& config, const std::string& checkpoint_base);

/// Bound check for the configured potential and initial state, one report per branch.
std::vector<semiclassical::BoundReport> run_bound_check(const RunConfig& config);

}  // namespace semigrav
