#pragma once

#include <vector>

#include "conjlab/modulus.hpp"

namespace conjlab {

/// One instance of a dichotomic integral inequality on [t0, s]:
///   u(t) <= c e^{-alpha (t-t0)}   (first form;  second form decays toward s)
///           + c1 int_{t0}^t e^{-alpha (t-tau)} b(tau) u(tau) dtau
///           + c2 int_t^s   e^{-alpha (tau-t)} b(tau) u(tau) dtau.
/// s = +infinity is realized as a finite horizon with the boundedness flag;
/// tail mass beyond the horizon is folded into the checking slack.
struct IneqInstance {
    double t0 = 0.0;
    double s = 1.0;
    bool s_infinite = false;
    double c = 1.0, c1 = 1.0, c2 = 1.0;
    double alpha = 1.0;
    double alpha1 = 0.5;
    ScalarModulus b;
    PiecewiseLinear u;      // tabulated nonnegative function on [t0, s]
    int grid_points = 400;  // checking/iteration grid per window

    double alpha2() const { return alpha - alpha1; }
    void validate(bool need_u = true) const;
};

/// The windowed kernel operator at rate alpha1 applied to b at time t,
/// with the c1/c2 weights. t must lie in (t0, s).
double l_alpha1_windowed(const IneqInstance& inst, double t, double quad_tol = 1e-10);

struct Theta1 {
    double value = 0.0;
    double argmax_t = 0.0;
    bool contraction = false;  // value < 1
};

/// sup over the grid of the windowed operator applied to b.
Theta1 theta1(const IneqInstance& inst);

enum class CertificateVerdict { Pass, BoundViolated, HypothesisNotSatisfied };

struct Certificate {
    bool hypothesis_ok = false;
    double theta1 = 0.0;
    double bound_margin = 0.0;  // min over samples of (bound*(1+slack) - u)/bound
    double worst_t = 0.0;
    double alpha2 = 0.0;
    double slack = 0.0;
    CertificateVerdict verdict = CertificateVerdict::HypothesisNotSatisfied;
};

/// First dichotomic inequality: verifies the hypothesis on the grid, then the
/// conclusion u(t) <= c/(1-theta1) e^{-alpha2 (t-t0)}. A conclusion failure
/// under a failed hypothesis reports HypothesisNotSatisfied (vacuous), not
/// BoundViolated. Throws ContractionViolated when theta1 >= 1.
Certificate check_first_inequality(const IneqInstance& inst, double slack);

/// Mirror with decay toward s: hypothesis c e^{-alpha (s-t)}, conclusion
/// u(t) <= c/(1-theta1) e^{-alpha2 (s-t)}.
Certificate check_second_inequality(const IneqInstance& inst, double slack);

struct WorstCaseU {
    PiecewiseLinear u;
    int iterations = 0;
    double final_change = 0.0;
    std::vector<double> changes;
};

/// Maximal solution of the inequality taken with equality, by Picard
/// iteration of the right-hand side (monotone and contractive for theta1 < 1).
/// The template's u field is ignored. second = true builds the mirrored form.
WorstCaseU worst_case_u(const IneqInstance& tmpl, double tol, bool second = false,
                        int max_iterations = 20000);

}  // namespace conjlab
