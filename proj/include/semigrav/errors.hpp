#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace semigrav {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Adaptive quadrature hit its refinement cap before reaching tolerance.
class QuadratureError : public Error {
public:
    QuadratureError(const std::string& what, double achieved_error)
        : Error(what), achieved_error_(achieved_error) {}
    double achieved_error() const noexcept { return achieved_error_; }

private:
    double achieved_error_;
};

/// Two routes that must agree analytically disagreed numerically.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

class InvalidStateError : public Error {
public:
    using Error::Error;
};

/// A Bohmian trajectory left the simulation box.
class OutOfDomainError : public Error {
public:
    OutOfDomainError(const std::string& what, long step) : Error(what), step_(step) {}
    long step() const noexcept { return step_; }

private:
    long step_;
};

/// |Psi| at the trajectory fell below the node threshold; the guiding velocity is undefined.
class NodeProximityError : public Error {
public:
    NodeProximityError(const std::string& what, long step) : Error(what), step_(step) {}
    long step() const noexcept { return step_; }

private:
    long step_;
};

/// The window normalization N_j(R) vanished (trajectory in a density void).
class DegenerateWindowError : public Error {
public:
    using Error::Error;
};

class NumericalDegeneracyError : public Error {
public:
    using Error::Error;
};

/// A dynamics run stopped; carries the failing step and the last checkpoint written.
class RunError : public Error {
public:
    RunError(const std::string& what, long step, std::string checkpoint)
        : Error(what), step_(step), checkpoint_(std::move(checkpoint)) {}
    long step() const noexcept { return step_; }
    const std::string& checkpoint() const noexcept { return checkpoint_; }

private:
    long step_;
    std::string checkpoint_;
};

/// No coupling reproduces the requested phase (zero splitting, zero or opposite-sign response).
class UntunableError : public Error {
public:
    using Error::Error;
};

/// Aggregated configuration diagnostics: every violation is listed, not just the first.
class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<std::string> violations)
        : Error(join(violations)), violations_(std::move(violations)) {}
    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out = "invalid configuration:";
        for (const auto& s : v) out += "\n  - " + s;
        return out;
    }
    std::vector<std::string> violations_;
};

}  // namespace semigrav
