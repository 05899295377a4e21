#include "conjlab/modulus.hpp"

#include <algorithm>
#include <cmath>

#include "conjlab/errors.hpp"
#include "conjlab/quadrature.hpp"

namespace conjlab {

PiecewiseLinear::PiecewiseLinear(std::vector<double> times, std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
    if (times_.size() != values_.size() || times_.size() < 2)
        throw InvalidArgument("tabulated data needs >= 2 samples of equal length");
    if (!std::is_sorted(times_.begin(), times_.end()))
        throw InvalidArgument("table times must be increasing");
    cum_.assign(times_.size(), 0.0);
    for (size_t i = 1; i < times_.size(); ++i) {
        const double h = times_[i] - times_[i - 1];
        cum_[i] = cum_[i - 1] + 0.5 * (values_[i] + values_[i - 1]) * h;
    }
}

double PiecewiseLinear::at(double t) const {
    if (t <= times_.front()) return values_.front();
    if (t >= times_.back()) return values_.back();
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const size_t i = static_cast<size_t>(it - times_.begin());
    const double w = (t - times_[i - 1]) / (times_[i] - times_[i - 1]);
    return values_[i - 1] + w * (values_[i] - values_[i - 1]);
}

double PiecewiseLinear::antiderivative(double t) const {
    if (t <= times_.front()) return (t - times_.front()) * values_.front();
    if (t >= times_.back()) return cum_.back() + (t - times_.back()) * values_.back();
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const size_t i = static_cast<size_t>(it - times_.begin());
    const double dt = t - times_[i - 1];
    return cum_[i - 1] + values_[i - 1] * dt +
           0.5 * (values_[i] - values_[i - 1]) / (times_[i] - times_[i - 1]) * dt * dt;
}

double PiecewiseLinear::integral(double a, double b) const {
    return antiderivative(b) - antiderivative(a);
}

struct ScalarModulus::Impl {
    std::string kind;
    std::function<double(double)> eval;
    // exact integral when available, empty otherwise
    std::function<double(double, double)> exact_integral;
    std::function<std::vector<double>(double, double)> kinks;
};

namespace {

double sawtooth_value(double c, double t) {
    const double u = std::abs(t);
    if (u < 1.0) return 0.0;
    const double m = std::floor(u);
    if (u < m + 0.5 / m) return c * m * m * u - c * m * m * m;
    if (u < m + 1.0 / m) return -c * m * m * u + c * m * m * m + c * m;
    return 0.0;
}

std::vector<double> sawtooth_kinks(double a, double b) {
    std::vector<double> pts;
    auto add_side = [&](double sign) {
        const double hi = std::max(std::abs(a), std::abs(b));
        for (double m = 1.0; m <= hi + 1.0; m += 1.0) {
            for (double p : {m, m + 0.5 / m, m + 1.0 / m}) {
                const double t = sign * p;
                if (t > a && t < b) pts.push_back(t);
            }
        }
    };
    add_side(1.0);
    add_side(-1.0);
    if (0.0 > a && 0.0 < b) pts.push_back(0.0);
    std::sort(pts.begin(), pts.end());
    return pts;
}

// exact integral of a function that is linear between consecutive kinks
double piecewise_exact_integral(const std::function<double(double)>& f,
                                const std::vector<double>& kinks, double a, double b) {
    if (a == b) return 0.0;
    const double sign = b > a ? 1.0 : -1.0;
    const double lo = std::min(a, b), hi = std::max(a, b);
    std::vector<double> pts;
    pts.push_back(lo);
    for (double p : kinks)
        if (p > lo && p < hi) pts.push_back(p);
    pts.push_back(hi);
    double total = 0.0;
    for (size_t i = 0; i + 1 < pts.size(); ++i)
        total += 0.5 * (f(pts[i]) + f(pts[i + 1])) * (pts[i + 1] - pts[i]);
    return sign * total;
}

}  // namespace

ScalarModulus ScalarModulus::constant(double value) {
    if (value < 0.0) throw InvalidArgument("modulus must be nonnegative");
    auto impl = std::make_shared<Impl>();
    impl->kind = "constant";
    impl->eval = [value](double) { return value; };
    impl->exact_integral = [value](double a, double b) { return value * (b - a); };
    impl->kinks = [](double, double) { return std::vector<double>{}; };
    return ScalarModulus(impl);
}

ScalarModulus ScalarModulus::tabulated(std::vector<double> times,
                                       std::vector<double> values) {
    for (double v : values)
        if (v < 0.0) throw InvalidArgument("modulus must be nonnegative");
    auto table = std::make_shared<PiecewiseLinear>(std::move(times), std::move(values));
    auto impl = std::make_shared<Impl>();
    impl->kind = "tabulated";
    impl->eval = [table](double t) { return table->at(t); };
    impl->exact_integral = [table](double a, double b) { return table->integral(a, b); };
    impl->kinks = [table](double a, double b) {
        std::vector<double> pts;
        for (double t : table->times())
            if (t > a && t < b) pts.push_back(t);
        return pts;
    };
    return ScalarModulus(impl);
}

ScalarModulus ScalarModulus::sawtooth(double c) {
    if (c <= 0.0) throw InvalidArgument("sawtooth needs c > 0");
    auto impl = std::make_shared<Impl>();
    impl->kind = "sawtooth";
    impl->eval = [c](double t) { return sawtooth_value(c, t); };
    impl->exact_integral = [c](double a, double b) {
        auto f = [c](double t) { return sawtooth_value(c, t); };
        return piecewise_exact_integral(f, sawtooth_kinks(std::min(a, b), std::max(a, b)),
                                        a, b);
    };
    impl->kinks = sawtooth_kinks;
    return ScalarModulus(impl);
}

ScalarModulus ScalarModulus::builtin(const std::string& name,
                                     const std::vector<double>& params) {
    if (name == "sawtooth") {
        if (params.size() != 1) throw InvalidArgument("sawtooth takes one parameter");
        return sawtooth(params[0]);
    }
    throw InvalidArgument("unknown modulus builtin: " + name);
}

ScalarModulus ScalarModulus::from_function(std::string kind,
                                           std::function<double(double)> f) {
    auto impl = std::make_shared<Impl>();
    impl->kind = std::move(kind);
    impl->eval = std::move(f);
    impl->kinks = [](double, double) { return std::vector<double>{}; };
    return ScalarModulus(impl);
}

ScalarModulus ScalarModulus::scaled(double factor) const {
    if (factor < 0.0) throw InvalidArgument("scale factor must be nonnegative");
    auto base = impl_;
    auto impl = std::make_shared<Impl>();
    impl->kind = base->kind + "*" + std::to_string(factor);
    impl->eval = [base, factor](double t) { return factor * base->eval(t); };
    if (base->exact_integral)
        impl->exact_integral = [base, factor](double a, double b) {
            return factor * base->exact_integral(a, b);
        };
    impl->kinks = base->kinks;
    return ScalarModulus(impl);
}

ScalarModulus ScalarModulus::exp_weighted(double eps) const {
    if (eps < 0.0) throw InvalidArgument("decay rate must be nonnegative");
    auto base = impl_;
    auto impl = std::make_shared<Impl>();
    impl->kind = base->kind + "*exp(-" + std::to_string(eps) + "|t|)";
    impl->eval = [base, eps](double t) { return base->eval(t) * std::exp(-eps * std::abs(t)); };
    impl->kinks = [base](double a, double b) {
        auto pts = base->kinks(a, b);
        if (0.0 > a && 0.0 < b) {
            pts.push_back(0.0);
            std::sort(pts.begin(), pts.end());
        }
        return pts;
    };
    return ScalarModulus(impl);
}

double ScalarModulus::at(double t) const { return impl_->eval(t); }

double ScalarModulus::integral(double a, double b) const {
    if (impl_->exact_integral) return impl_->exact_integral(a, b);
    auto f = impl_->eval;
    return quad_adaptive_split([f](double t) { return f(t); }, a, b,
                               impl_->kinks ? impl_->kinks(std::min(a, b), std::max(a, b))
                                            : std::vector<double>{},
                               1e-12, 1e-12)
        .value;
}

std::vector<double> ScalarModulus::breakpoints(double a, double b) const {
    return impl_->kinks ? impl_->kinks(a, b) : std::vector<double>{};
}

ScalarModulus::WindowSup ScalarModulus::window_sup(Interval window, double grid_step) const {
    if (grid_step <= 0.0) throw InvalidArgument("grid step must be positive");
    WindowSup out;
    out.grid_step = grid_step;
    const double lo = window.lo;
    const double hi = std::max(window.lo, window.hi - 1.0);
    double best_t = lo, best = integral(lo, lo + 1.0);
    for (double t = lo + grid_step; t <= hi + 0.5 * grid_step; t += grid_step) {
        const double v = integral(t, t + 1.0);
        if (v > best) { best = v; best_t = t; }
    }
    // local refinement around the best grid offset
    double a = std::max(lo, best_t - grid_step), b = std::min(hi, best_t + grid_step);
    for (int it = 0; it < 60 && b - a > 1e-12; ++it) {
        const double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
        const double f1 = integral(m1, m1 + 1.0), f2 = integral(m2, m2 + 1.0);
        if (f1 < f2) a = m1; else b = m2;
        const double fm = std::max(f1, f2);
        if (fm > best) { best = fm; best_t = f1 < f2 ? m2 : m1; }
    }
    out.value = best;
    out.argmax_t = best_t;
    return out;
}

const std::string& ScalarModulus::kind() const { return impl_->kind; }

}  // namespace conjlab
