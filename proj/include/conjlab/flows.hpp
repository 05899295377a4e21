#pragma once

#include <memory>
#include <mutex>
#include <unordered_map>

#include "conjlab/fields.hpp"
#include "conjlab/ode.hpp"

namespace conjlab {

/// Evolution-operator engine for x' = A(t)x with fast paths: closed-form for
/// constant A (matrix exponential) and for diagonal kinds with an exact
/// antiderivative; ODE column integration with a memo table otherwise.
/// Immutable field, read-safe memoization.
class LinearFlow {
public:
    explicit LinearFlow(MatrixField a, OdeTol tol = {1e-12, 1e-12});

    Mat U(double t, double s) const;
    Vec apply(double t, double s, const Vec& v) const { return U(t, s) * v; }
    const MatrixField& field() const { return a_; }
    int dim() const { return a_.dim(); }

private:
    Mat generic_U(double t, double s) const;
    MatrixField a_;
    OdeTol tol_;
    mutable std::mutex mutex_;
    mutable std::unordered_map<unsigned long long, Mat> const_cache_;  // keyed on dt bits
    mutable std::unordered_map<unsigned long long, std::shared_ptr<const Mat>> generic_cache_;
};

/// Solve y' = A(t)y + f(t,y) from (t0, x0) over the whole span (t0 must lie
/// inside). Backward and forward pieces are merged into one trajectory.
Trajectory integrate(const MatrixField& a, const NonlinearField& f, double t0,
                     const Vec& x0, Interval span, const OdeOptions& opt = {});

/// U(t, s) for the linear system. One-shot convenience over LinearFlow.
Mat evolution_operator(const MatrixField& a, double t, double s, OdeTol tol = {1e-12, 1e-12});

}  // namespace conjlab
