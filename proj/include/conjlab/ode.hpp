#pragma once

#include <functional>
#include <vector>

#include "conjlab/linalg.hpp"

namespace conjlab {

struct OdeTol {
    double abs = 1e-9;
    double rel = 1e-9;
};

struct OdeOptions {
    OdeTol tol{};
    double max_step = 0.2;
    double initial_step = 0.0;  // 0 = automatic
    bool fixed_step = false;    // step exactly max_step, no error control
    long max_steps = 4'000'000;
};

/// Accepted integration nodes with the state derivative stored at each node.
/// Dense output is cubic Hermite on the containing step, so evaluation at a
/// node reproduces the stored state exactly.
class Trajectory {
public:
    Trajectory() = default;
    Trajectory(std::vector<double> times, std::vector<Vec> states,
               std::vector<Vec> derivatives, OdeTol tol);

    Vec at(double t) const;
    /// Derivative of the Hermite interpolant.
    Vec derivative_at(double t) const;

    double t_min() const { return times_.front(); }
    double t_max() const { return times_.back(); }
    const std::vector<double>& times() const { return times_; }
    const std::vector<Vec>& states() const { return states_; }
    OdeTol tolerance() const { return tol_; }
    int dim() const { return states_.empty() ? 0 : static_cast<int>(states_[0].size()); }

    /// Joins a backward-integrated piece to a forward one at a common anchor.
    static Trajectory merge(const Trajectory& backward, const Trajectory& forward);

private:
    size_t segment(double t) const;
    std::vector<double> times_;
    std::vector<Vec> states_;
    std::vector<Vec> derivs_;
    OdeTol tol_{};
};

using OdeRhs = std::function<Vec(double, const Vec&)>;

/// Dormand-Prince 5(4) with standard step control. t_end may be on either
/// side of t0; node times are stored in increasing order either way.
Trajectory integrate_ode(const OdeRhs& rhs, double t0, const Vec& x0, double t_end,
                         const OdeOptions& opt = {});

}  // namespace conjlab
