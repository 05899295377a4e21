#include "conjlab/flows.hpp"

#include <bit>
#include <cmath>

#include "conjlab/errors.hpp"

namespace conjlab {

namespace {

unsigned long long key1(double x) { return std::bit_cast<unsigned long long>(x); }

unsigned long long key2(double t, double s) {
    // mix the two time stamps into one cache key
    unsigned long long a = key1(t), b = key1(s);
    a ^= b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2);
    return a;
}

}  // namespace

LinearFlow::LinearFlow(MatrixField a, OdeTol tol) : a_(std::move(a)), tol_(tol) {}

Mat LinearFlow::U(double t, double s) const {
    const int n = a_.dim();
    if (t == s) return Mat::Identity(n, n);
    if (a_.is_diagonal()) {
        if (a_.is_constant()) {
            const Mat a0 = a_.at(0.0);
            Mat u = Mat::Zero(n, n);
            for (int i = 0; i < n; ++i) u(i, i) = std::exp(a0(i, i) * (t - s));
            return u;
        }
        if (auto i0 = a_.diagonal_integral(0, s, t)) {
            Mat u = Mat::Zero(n, n);
            u(0, 0) = std::exp(*i0);
            for (int i = 1; i < n; ++i) u(i, i) = std::exp(*a_.diagonal_integral(i, s, t));
            return u;
        }
    }
    if (a_.is_constant()) {
        const unsigned long long k = key1(t - s);
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto it = const_cache_.find(k);
            if (it != const_cache_.end()) return it->second;
        }
        Mat u = expm((t - s) * a_.at(0.0));
        std::lock_guard<std::mutex> lock(mutex_);
        if (const_cache_.size() < 65536) const_cache_.emplace(k, u);
        return u;
    }
    return generic_U(t, s);
}

Mat LinearFlow::generic_U(double t, double s) const {
    const unsigned long long k = key2(t, s);
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = generic_cache_.find(k);
        if (it != generic_cache_.end()) return *it->second;
    }
    const int n = a_.dim();
    auto rhs = [this, n](double tau, const Vec& w) {
        const Mat a = a_.at(tau);
        Eigen::Map<const Mat> wm(w.data(), n, n);
        Mat dw = a * wm;
        return Vec(Eigen::Map<Vec>(dw.data(), n * n));
    };
    Vec w0 = Eigen::Map<const Vec>(Mat::Identity(n, n).eval().data(), n * n);
    OdeOptions opt;
    opt.tol = tol_;
    opt.max_step = 0.5;
    Trajectory tr = integrate_ode(rhs, s, w0, t, opt);
    Vec wt = tr.at(t);
    Mat u = Eigen::Map<const Mat>(wt.data(), n, n);
    auto stored = std::make_shared<const Mat>(u);
    std::lock_guard<std::mutex> lock(mutex_);
    if (generic_cache_.size() < 65536) generic_cache_.emplace(k, stored);
    return u;
}

Trajectory integrate(const MatrixField& a, const NonlinearField& f, double t0,
                     const Vec& x0, Interval span, const OdeOptions& opt) {
    if (!span.contains(t0)) throw InvalidArgument("span must contain t0");
    if (a.dim() != static_cast<int>(x0.size()) || f.dim() != a.dim())
        throw InvalidArgument("dimension mismatch");
    OdeRhs rhs;
    if (f.is_zero()) {
        rhs = [&a](double t, const Vec& x) { return Vec(a.at(t) * x); };
    } else {
        rhs = [&a, &f](double t, const Vec& x) { return Vec(a.at(t) * x + f.at(t, x)); };
    }
    if (span.lo == t0) return integrate_ode(rhs, t0, x0, span.hi, opt);
    if (span.hi == t0) return integrate_ode(rhs, t0, x0, span.lo, opt);
    Trajectory back = integrate_ode(rhs, t0, x0, span.lo, opt);
    Trajectory fwd = integrate_ode(rhs, t0, x0, span.hi, opt);
    return Trajectory::merge(back, fwd);
}

Mat evolution_operator(const MatrixField& a, double t, double s, OdeTol tol) {
    return LinearFlow(a, tol).U(t, s);
}

}  // namespace conjlab
