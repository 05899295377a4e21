#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "conjlab/linalg.hpp"

namespace conjlab {

/// Piecewise-linear table, clamped to the end values outside the sample range.
class PiecewiseLinear {
public:
    PiecewiseLinear() = default;
    PiecewiseLinear(std::vector<double> times, std::vector<double> values);

    double at(double t) const;
    /// Exact integral of the interpolant (with clamping) over [a, b].
    double integral(double a, double b) const;
    const std::vector<double>& times() const { return times_; }
    const std::vector<double>& values() const { return values_; }

private:
    double antiderivative(double t) const;  // from times_.front()
    std::vector<double> times_;
    std::vector<double> values_;
    std::vector<double> cum_;  // cumulative integrals at the sample times
};

/// Nonnegative scalar modulus of a perturbation: a bound mu(t) or a Lipschitz
/// modulus r(t). The quantity C = sup_t int_t^{t+1} b is taken over a declared
/// window by grid scan (step recorded) with local refinement of the best offset.
class ScalarModulus {
public:
    ScalarModulus() : ScalarModulus(constant(0.0)) {}

    static ScalarModulus constant(double value);
    static ScalarModulus tabulated(std::vector<double> times, std::vector<double> values);
    /// Catalog entry addressed by name + scalar parameters. Names: "sawtooth" {c}.
    static ScalarModulus builtin(const std::string& name,
                                 const std::vector<double>& params);
    static ScalarModulus sawtooth(double c);
    /// Derived modulus backed by an arbitrary evaluator (library-internal;
    /// not addressable from configs).
    static ScalarModulus from_function(std::string kind, std::function<double(double)> f);

    /// b(t) scaled by a nonnegative factor.
    ScalarModulus scaled(double factor) const;
    /// b(t) * exp(-eps |t|).
    ScalarModulus exp_weighted(double eps) const;

    double at(double t) const;
    /// Integral over [a, b]; exact on piecewise-linear kinds, adaptive otherwise.
    double integral(double a, double b) const;
    /// Kink locations inside (a, b), used to pre-split quadratures. May be empty.
    std::vector<double> breakpoints(double a, double b) const;

    struct WindowSup {
        double value = 0.0;
        double grid_step = 0.0;
        double argmax_t = 0.0;
    };
    /// C over the window: max of int_t^{t+1} b for window.lo <= t <= window.hi - 1.
    WindowSup window_sup(Interval window, double grid_step = 1e-2) const;

    const std::string& kind() const;

private:
    struct Impl;
    explicit ScalarModulus(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

}  // namespace conjlab
