#include "conjlab/examples.hpp"

#include <cmath>

#include "conjlab/errors.hpp"

namespace conjlab {

namespace {

Mat diag2(double a, double b) {
    Mat m = Mat::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

}  // namespace

UnitBallExample unit_ball_example(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw InvalidArgument("epsilon must lie in (0,1)");
    const double e = epsilon;
    const double om = 1.0 - e;

    ClosedFormConjugacy cf;
    cf.epsilon = e;
    cf.g_domain = {-om, om};
    auto h_scalar = [e, om](double x) {
        if (x == 0.0) return 0.0;
        if (x > 0.0) return om * std::pow(x, 1.0 / om);
        return -std::pow(om, 1.5) / std::sqrt(1.0 / (x * x) - e);
    };
    // inverse of the branch formulas; on the negative side (-y)^{-2} carries
    // the cube of 1 - eps
    auto g_scalar = [e, om](double y) {
        if (y == 0.0) return 0.0;
        if (y > 0.0) return std::pow(y / om, om);
        return -1.0 / std::sqrt(om * om * om / (y * y) + e);
    };
    cf.H1 = h_scalar;
    cf.H2 = h_scalar;
    cf.G1 = g_scalar;
    cf.G2 = g_scalar;

    UnitBallExample out{
        MatrixField::constant(diag2(-1.0, 1.0)),
        radial_extend(NonlinearField::builtin("unit_ball_local", {{"epsilon", e}}), 1.0),
        DichotomyData{0.0, diag2(1.0, 0.0), 1.0, 1.0, 0.5},
        cf};
    return out;
}

TrajectoryOracles trajectory_oracles(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw InvalidArgument("epsilon must lie in (0,1)");
    const double e = epsilon;
    TrajectoryOracles out;
    out.x1_pos = [e](double t) { return std::exp((-1.0 + e) * t); };
    out.x1_neg = [e](double t) {
        return -1.0 / std::sqrt((1.0 - e) * std::exp(2.0 * t) + e);
    };
    out.y1_pos = [e](double t) { return (1.0 - e) * std::exp(-t); };
    out.y1_neg = [e](double t) { return (e - 1.0) * std::exp(-t); };
    return out;
}

ScalarTimeExample scalar_time_example(double epsilon, double delta) {
    if (!(0.0 < epsilon && epsilon < delta))
        throw InvalidArgument("need 0 < epsilon < delta");
    ScalarTimeExample out;
    out.epsilon = epsilon;
    out.delta = delta;
    out.A = MatrixField::constant(-Mat::Identity(1, 1));
    out.f = NonlinearField::builtin("scalar_time",
                                    {{"epsilon", epsilon}, {"delta", delta}});
    out.H = [](double t, double x) { return 1.0 / x - 0.5 * std::exp(t); };
    out.G = [](double t, double y) { return 2.0 / (std::exp(t) + 2.0 * y); };
    out.x_ref = [](double t) { return 2.0 / (std::exp(t) + std::exp(-t)); };
    out.x_ref_dot = [](double t) {
        const double c = std::exp(t) + std::exp(-t);
        return -2.0 * (std::exp(t) - std::exp(-t)) / (c * c);
    };
    out.pushed_curve = [H = out.H, x = out.x_ref](double t) { return H(t, x(t)); };
    out.pushed_curve_derivative = [x = out.x_ref, xd = out.x_ref_dot](double t) {
        // d/dt [1/x(t) - e^t/2]
        const double xv = x(t);
        return -xd(t) / (xv * xv) - 0.5 * std::exp(t);
    };
    return out;
}

ScalarModulus sawtooth_modulus(double c) { return ScalarModulus::sawtooth(c); }

NonlinearField sawtooth_sine_field(double c) {
    return NonlinearField::builtin("sawtooth_sine", {{"c", c}});
}

PlanarExample planar_example(double sigma) {
    if (!(sigma > 0.0)) throw InvalidArgument("sigma must be positive");
    if (!(sigma < 0.5))
        throw HypothesisViolated("sigma >= 1/2 gives theta = 2 sigma >= 1");
    PlanarExample out;
    out.sigma = sigma;
    out.theta = 2.0 * sigma;
    out.A = MatrixField::constant(diag2(-1.0, 1.0));
    out.f = NonlinearField::builtin("planar_sine", {{"sigma", sigma}});
    out.D = DichotomyData{0.0, diag2(1.0, 0.0), 1.0, 1.0, 0.5};
    return out;
}

}  // namespace conjlab
