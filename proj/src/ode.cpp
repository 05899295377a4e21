#include "conjlab/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "conjlab/errors.hpp"

namespace conjlab {

Trajectory::Trajectory(std::vector<double> times, std::vector<Vec> states,
                       std::vector<Vec> derivatives, OdeTol tol)
    : times_(std::move(times)), states_(std::move(states)),
      derivs_(std::move(derivatives)), tol_(tol) {
    if (times_.size() < 1 || times_.size() != states_.size() ||
        times_.size() != derivs_.size())
        throw InvalidArgument("trajectory needs matching nonempty node arrays");
    for (size_t i = 1; i < times_.size(); ++i)
        if (times_[i] <= times_[i - 1])
            throw InvalidArgument("trajectory times must be strictly increasing");
}

size_t Trajectory::segment(double t) const {
    if (t < times_.front() - 1e-9 || t > times_.back() + 1e-9)
        throw InvalidArgument("trajectory evaluated outside its span");
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    size_t i = static_cast<size_t>(it - times_.begin());
    if (i == 0) i = 1;
    if (i >= times_.size()) i = times_.size() - 1;
    return i;
}

Vec Trajectory::at(double t) const {
    if (times_.size() == 1) return states_[0];
    const size_t i = segment(t);
    const double h = times_[i] - times_[i - 1];
    const double s = (t - times_[i - 1]) / h;
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
    return h00 * states_[i - 1] + h * h10 * derivs_[i - 1] + h01 * states_[i] +
           h * h11 * derivs_[i];
}

Vec Trajectory::derivative_at(double t) const {
    if (times_.size() == 1) return derivs_[0];
    const size_t i = segment(t);
    const double h = times_[i] - times_[i - 1];
    const double s = (t - times_[i - 1]) / h;
    const double s2 = s * s;
    const double d00 = (6 * s2 - 6 * s) / h, d10 = 3 * s2 - 4 * s + 1;
    const double d01 = (-6 * s2 + 6 * s) / h, d11 = 3 * s2 - 2 * s;
    return d00 * states_[i - 1] + d10 * derivs_[i - 1] + d01 * states_[i] +
           d11 * derivs_[i];
}

Trajectory Trajectory::merge(const Trajectory& backward, const Trajectory& forward) {
    std::vector<double> t = backward.times_;
    std::vector<Vec> x = backward.states_;
    std::vector<Vec> d = backward.derivs_;
    size_t start = 0;
    if (!t.empty() && !forward.times_.empty() &&
        std::abs(t.back() - forward.times_.front()) < 1e-12)
        start = 1;  // shared anchor node
    for (size_t i = start; i < forward.times_.size(); ++i) {
        t.push_back(forward.times_[i]);
        x.push_back(forward.states_[i]);
        d.push_back(forward.derivs_[i]);
    }
    return Trajectory(std::move(t), std::move(x), std::move(d), forward.tol_);
}

namespace {

// Dormand-Prince coefficients
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// difference between the 5th and embedded 4th order weights
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

Trajectory integrate_ode(const OdeRhs& rhs, double t0, const Vec& x0, double t_end,
                         const OdeOptions& opt) {
    if (!(opt.tol.abs > 0.0) || !(opt.tol.rel > 0.0))
        throw InvalidArgument("tolerances must be positive");
    const double dir = t_end >= t0 ? 1.0 : -1.0;
    const double span = std::abs(t_end - t0);

    std::vector<double> ts{t0};
    std::vector<Vec> xs{x0};
    Vec k1 = rhs(t0, x0);
    std::vector<Vec> ds{k1};

    if (span == 0.0) {
        Trajectory tr(ts, xs, ds, opt.tol);
        return tr;
    }

    auto scaled_err = [&](const Vec& e, const Vec& xa, const Vec& xb) {
        double sum = 0.0;
        for (int i = 0; i < e.size(); ++i) {
            const double sc =
                opt.tol.abs + opt.tol.rel * std::max(std::abs(xa[i]), std::abs(xb[i]));
            const double q = e[i] / sc;
            sum += q * q;
        }
        return std::sqrt(sum / static_cast<double>(e.size()));
    };

    double h = opt.initial_step;
    if (h <= 0.0) {
        const double f0 = k1.norm();
        h = 0.01 * (1.0 + x0.norm()) / (1.0 + f0);
    }
    h = std::min(h, opt.max_step);
    h = std::min(h, span);
    if (opt.fixed_step) h = std::min(opt.max_step, span);

    double t = t0;
    Vec x = x0;
    long steps = 0;
    while (dir * (t_end - t) > 0.0) {
        if (++steps > opt.max_steps)
            throw IntegrationFailure("step budget exhausted", t);
        h = std::min(h, std::abs(t_end - t));
        const double hmin = 16.0 * std::numeric_limits<double>::epsilon() *
                            std::max(1.0, std::abs(t));
        if (h < hmin) throw IntegrationFailure("step size underflow", t);
        const double hd = dir * h;

        const Vec k2 = rhs(t + c2 * hd, x + hd * (a21 * k1));
        const Vec k3 = rhs(t + c3 * hd, x + hd * (a31 * k1 + a32 * k2));
        const Vec k4 = rhs(t + c4 * hd, x + hd * (a41 * k1 + a42 * k2 + a43 * k3));
        const Vec k5 =
            rhs(t + c5 * hd, x + hd * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const Vec k6 =
            rhs(t + hd, x + hd * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const Vec x_new = x + hd * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const Vec k7 = rhs(t + hd, x_new);

        if (!x_new.allFinite())
            throw NumericOverflow("state became non-finite", t + hd);

        double err = 0.0;
        if (!opt.fixed_step) {
            const Vec e =
                hd * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
            err = scaled_err(e, x, x_new);
        }
        if (err <= 1.0) {
            t += hd;
            x = x_new;
            k1 = k7;  // FSAL
            ts.push_back(t);
            xs.push_back(x);
            ds.push_back(k1);
            if (!opt.fixed_step) {
                const double fac =
                    err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
                h = std::min(h * fac, opt.max_step);
            }
        } else {
            h *= std::clamp(0.9 * std::pow(err, -0.2), 0.2, 0.9);
        }
    }

    if (dir < 0.0) {
        std::reverse(ts.begin(), ts.end());
        std::reverse(xs.begin(), xs.end());
        std::reverse(ds.begin(), ds.end());
    }
    return Trajectory(std::move(ts), std::move(xs), std::move(ds), opt.tol);
}

}  // namespace conjlab
