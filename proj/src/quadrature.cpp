#include "conjlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "conjlab/errors.hpp"

namespace conjlab {

namespace {

// 15-point Kronrod abscissae/weights with the embedded 7-point Gauss rule
// (QUADPACK values). Gauss points are the odd-indexed Kronrod abscissae.
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

template <typename Value, typename Norm>
struct Segment {
    double a, b;
    Value integral;
    double error;
};

template <typename Value, typename Eval, typename Norm, typename Zero>
void gk15(const Eval& f, double a, double b, const Norm& norm, const Zero& zero,
          Value& integral, double& error, long& evals) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    Value fc = f(mid);
    ++evals;
    Value res_k = kWgk[7] * fc;
    Value res_g = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        Value f1 = f(mid - dx);
        Value f2 = f(mid + dx);
        evals += 2;
        res_k = res_k + kWgk[j] * (f1 + f2);
        if (j % 2 == 1) res_g = res_g + kWg[j / 2] * (f1 + f2);
    }
    integral = half * res_k;
    error = norm(half * (res_k - res_g));
    (void)zero;
}

template <typename Value, typename Eval, typename Norm, typename Zero>
std::pair<Value, double> adapt(const Eval& f, double a, double b,
                               const std::vector<double>& splits, double abs_tol,
                               double rel_tol, int max_intervals, const Norm& norm,
                               const Zero& zero, long& evals) {
    struct Seg {
        double a, b, error;
        Value integral;
        bool operator<(const Seg& o) const { return error < o.error; }
    };
    std::priority_queue<Seg> heap;
    Value total = zero();
    double total_err = 0.0;

    auto push = [&](double lo, double hi) {
        Seg s{lo, hi, 0.0, zero()};
        gk15<Value>(f, lo, hi, norm, zero, s.integral, s.error, evals);
        total = total + s.integral;
        total_err += s.error;
        heap.push(std::move(s));
    };

    std::vector<double> pts;
    pts.push_back(a);
    for (double p : splits)
        if (p > a && p < b) pts.push_back(p);
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    for (size_t i = 0; i + 1 < pts.size(); ++i)
        if (pts[i + 1] > pts[i]) push(pts[i], pts[i + 1]);

    auto tolerance = [&] { return std::max(abs_tol, rel_tol * norm(total)); };
    int used = static_cast<int>(heap.size());
    while (total_err > tolerance()) {
        if (used >= max_intervals || heap.empty()) {
            throw QuadratureFailure("adaptive quadrature did not converge", total_err);
        }
        Seg worst = heap.top();
        heap.pop();
        total = total - worst.integral;
        total_err -= worst.error;
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // interval at roundoff width; keep its estimate and stop splitting it
            total = total + worst.integral;
            total_err += worst.error * 1e-3;
            continue;
        }
        push(worst.a, mid);
        push(mid, worst.b);
        ++used;
    }
    return {total, total_err};
}

}  // namespace

QuadResult quad_adaptive(const std::function<double(double)>& f, double a, double b,
                         double abs_tol, double rel_tol, int max_intervals) {
    return quad_adaptive_split(f, a, b, {}, abs_tol, rel_tol, max_intervals);
}

QuadResult quad_adaptive_split(const std::function<double(double)>& f, double a, double b,
                               const std::vector<double>& split_points, double abs_tol,
                               double rel_tol, int max_intervals) {
    QuadResult r;
    if (b == a) return r;
    const double sign = b > a ? 1.0 : -1.0;
    const double lo = std::min(a, b), hi = std::max(a, b);
    long evals = 0;
    auto norm = [](double x) { return std::abs(x); };
    auto zero = [] { return 0.0; };
    auto [value, err] =
        adapt<double>(f, lo, hi, split_points, abs_tol, rel_tol, max_intervals, norm, zero, evals);
    r.value = sign * value;
    r.error_estimate = err;
    r.evaluations = evals;
    return r;
}

QuadResultVec quad_adaptive_vec(const std::function<Vec(double)>& f, int dim, double a,
                                double b, double abs_tol, double rel_tol,
                                int max_intervals) {
    QuadResultVec r;
    r.value = Vec::Zero(dim);
    if (b == a) return r;
    const double sign = b > a ? 1.0 : -1.0;
    const double lo = std::min(a, b), hi = std::max(a, b);
    long evals = 0;
    auto norm = [](const Vec& v) { return v.cwiseAbs().maxCoeff(); };
    auto zero = [dim] { return Vec(Vec::Zero(dim)); };
    auto [value, err] =
        adapt<Vec>(f, lo, hi, {}, abs_tol, rel_tol, max_intervals, norm, zero, evals);
    r.value = sign * value;
    r.error_estimate = err;
    r.evaluations = evals;
    return r;
}

}  // namespace conjlab
