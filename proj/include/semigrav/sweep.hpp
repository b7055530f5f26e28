#pragma once

#include "semigrav/config.hpp"
#include "semigrav/phase_engine.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace semigrav {

struct SweepRow {
    double radius = 0.0;
    double gamma = 0.0;
    PhaseSet phases;
    double w = 0.0;
    double w3 = 0.0;
    double w4 = 0.0;
    PhaseMethod method = PhaseMethod::Quadrature;
    std::string error;  ///< empty on success; numeric fields are NaN otherwise

    bool ok() const { return error.empty(); }
};

/// One row per (R, Gamma), R outer and Gamma inner, both ascending. Rows are
/// computed on `config.threads` workers and assembled by index; a failing row
/// carries its error instead of aborting the sweep.
std::vector<SweepRow> run_sweep(const RunConfig& config);

/// Single row at the given point.
SweepRow sweep_row(double radius, double gamma, const RunConfig& config);

/// %.17g formatting; NaN prints as "nan".
std::string format_number(double v);

/// Header plus one LF-terminated line per row.
void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);
/// Array of row objects; NaN becomes null.
void write_json(std::ostream& out, const std::vector<SweepRow>& rows);
void write_rows(std::ostream& out, const std::vector<SweepRow>& rows, const std::string& format);

/// Coupling that makes phi_delta equal `target` at window radius R, using the exact
/// linearity of all phases in Gamma. Couplings are nonnegative, so a target whose sign
/// the geometry cannot reach is matched modulo 2 pi instead. Throws UntunableError for
/// zero splitting or no response, ConsistencyError if the recomputed phase misses by
/// more than 1e-8.
double gamma_tuning(double target, double radius, const RunConfig& config);

}  // namespace semigrav
