#pragma once

#include <stdexcept>
#include <string>

namespace conjlab {

/// Adaptive ODE stepping could not continue (step underflow or step budget
/// exhausted). Carries the time at which integration stopped.
class IntegrationFailure : public std::runtime_error {
public:
    IntegrationFailure(const std::string& what, double t)
        : std::runtime_error(what + " (t=" + std::to_string(t) + ")"), time(t) {}
    double time;
};

/// State became non-finite during integration.
class NumericOverflow : public std::runtime_error {
public:
    NumericOverflow(const std::string& what, double t)
        : std::runtime_error(what + " (t=" + std::to_string(t) + ")"), time(t) {}
    double time;
};

/// Adaptive quadrature failed to reach the requested tolerance.
class QuadratureFailure : public std::runtime_error {
public:
    QuadratureFailure(const std::string& what, double achieved)
        : std::runtime_error(what), error_estimate(achieved) {}
    double error_estimate;
};

/// An operation whose contract requires a smallness hypothesis (Ktheta < 1,
/// Ktheta_tilde < 1, ...) was invoked outside that hypothesis.
class HypothesisViolated : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Picard iteration hit the iteration cap before the requested tolerance.
class ConvergenceFailure : public std::runtime_error {
public:
    ConvergenceFailure(const std::string& what, double change)
        : std::runtime_error(what), last_change(change) {}
    double last_change;
};

/// theta1 >= 1: the dichotomic-inequality operator is not a contraction.
class ContractionViolated : public std::runtime_error {
public:
    ContractionViolated(const std::string& what, double theta)
        : std::runtime_error(what), theta1(theta) {}
    double theta1;
};

/// No candidate decay rate admits finite dichotomy constants on the grid.
class EstimationFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using InvalidArgument = std::invalid_argument;

}  // namespace conjlab
