#pragma once

#include <functional>

#include "conjlab/dichotomy.hpp"
#include "conjlab/fields.hpp"

namespace conjlab {

/// Componentwise closed-form conjugacy between the hyperbolic planar system
/// on the unit square and its linear part. H is Lipschitz (constant 1) but
/// not C^1 at 0; G is Hoelder with exponent 1 - epsilon at 0.
struct ClosedFormConjugacy {
    std::function<double(double)> H1, H2;  // valid on [-1, 1]
    std::function<double(double)> G1, G2;  // valid on [-(1-eps), 1-eps]
    Interval h_domain{-1.0, 1.0};
    Interval g_domain{0.0, 0.0};
    double epsilon = 0.0;
};

struct UnitBallExample {
    MatrixField A;
    NonlinearField f;  // radially extended for global use
    DichotomyData D;
    ClosedFormConjugacy closed_form;
};

/// The diag(-1, 1) system with the piecewise +-eps x / +-eps x^3 perturbation.
UnitBallExample unit_ball_example(double epsilon);

/// Closed-form solutions of the scalar stable subsystem and their bounded
/// linear counterparts: x1(0) = 1 and x1(0) = -1 branches.
struct TrajectoryOracles {
    std::function<double(double)> x1_pos;  // e^{(-1+eps)t}
    std::function<double(double)> x1_neg;  // -[(1-eps)e^{2t}+eps]^{-1/2}
    std::function<double(double)> y1_pos;  // (1-eps)e^{-t}
    std::function<double(double)> y1_neg;  // (eps-1)e^{-t}
};

TrajectoryOracles trajectory_oracles(double epsilon);

/// x' = -x + f(t,x): zero inside the eps-ball, (2 e^{-t}/(e^t+e^{-t})) x
/// beyond delta, cubic Hermite blend between. The closed forms are partial:
/// H is valid on |x| >= delta, G on |y| <= 1/delta.
struct ScalarTimeExample {
    MatrixField A = MatrixField::constant(-Mat::Identity(1, 1));
    NonlinearField f = NonlinearField::zero(1);
    std::function<double(double, double)> H;  // H(t, x) = 1/x - e^t/2
    std::function<double(double, double)> G;  // G(t, y) = 2/(e^t + 2y)
    std::function<double(double)> x_ref;      // bounded solution 2/(e^t+e^{-t})
    std::function<double(double)> x_ref_dot;
    /// d/dt of H(t, x_ref(t)) via the chain rule, for the pushed-curve residual.
    std::function<double(double)> pushed_curve_derivative;
    std::function<double(double)> pushed_curve;  // H(t, x_ref(t))
    double epsilon = 0.0, delta = 0.0;
};

ScalarTimeExample scalar_time_example(double epsilon, double delta);

/// Even triangular-bump modulus: zero on [0,1), a bump of width 1/m and
/// height c m/2 at each integer m. Unit-window integrals stay <= c while the
/// peaks grow without bound.
ScalarModulus sawtooth_modulus(double c);

/// Its paired scalar perturbation f(t, x) = mu(t) sin(x).
NonlinearField sawtooth_sine_field(double c);

struct PlanarExample {
    MatrixField A = MatrixField::constant(-Mat::Identity(2, 2));  // diag(-1, 1)
    NonlinearField f = NonlinearField::zero(2);
    DichotomyData D;  // K = 1, alpha = 1, P0 = diag(1, 0)
    double sigma = 0.0;
    double theta = 0.0;  // 2 sigma
};

/// f(x) = sigma (sin x2, sin x1): mu = sigma sqrt(2), r = sigma. Requires
/// sigma < 1/2 so K theta < 1; throws HypothesisViolated otherwise.
PlanarExample planar_example(double sigma);

}  // namespace conjlab
