#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "conjlab/flows.hpp"
#include "conjlab/modulus.hpp"

namespace conjlab {

/// Exponential-dichotomy data: anchor projection P(t0), constants K > 0,
/// alpha > 0, and the rate split alpha = alpha1 + alpha2 (alpha2 derived).
struct DichotomyData {
    double t0 = 0.0;
    Mat P0;
    double K = 1.0;
    double alpha = 1.0;
    double alpha1 = 0.5;

    double alpha2() const { return alpha - alpha1; }
    /// Checks idempotency of P0 (1e-12), rank split, K > 0, 0 < alpha1 < alpha.
    void validate() const;
};

/// P(s) propagated from the anchor by invariance, P(s) = U(s,t0) P0 U(t0,s).
/// Diagonal systems with a diagonal anchor short-circuit to P0.
Mat project(const DichotomyData& d, const LinearFlow& flow, double s);
Mat project(const DichotomyData& d, const MatrixField& a, double s);

struct DichotomyViolation {
    double t = 0.0, s = 0.0;
    double ratio = 0.0;  // measured norm / allowed bound
    bool stable = true;  // which of the two dichotomy bounds failed
};

struct DichotomyReport {
    double worst_ratio = 0.0;
    std::optional<DichotomyViolation> worst;
    long violations = 0;
    long pairs_checked = 0;
    double slack = 0.0;
    bool passed() const { return violations == 0; }
};

/// Checks ||U(t,s)P(s)|| <= K e^{-alpha(t-s)} for t >= s and the mirrored
/// unstable bound for t <= s on every grid pair, with multiplicative slack.
/// Violations are data, not errors.
DichotomyReport verify_dichotomy(const DichotomyData& d, const MatrixField& a,
                                 const std::vector<std::pair<double, double>>& grid,
                                 double slack = 0.0);

struct EstimatedConstants {
    double K_hat = 0.0;
    double alpha_hat = 0.0;
};

std::vector<double> default_alpha_candidates();

/// Smallest K over the candidate rates such that the dichotomy bounds hold on
/// the grid with zero slack; ties go to the larger rate. Diagnostic only.
EstimatedConstants estimate_dichotomy_constants(
    const MatrixField& a, const Mat& P0, double t0,
    const std::vector<std::pair<double, double>>& grid,
    const std::vector<double>& alpha_candidates = default_alpha_candidates());

struct KernelTransform {
    double value = 0.0;
    double quad_error = 0.0;
    double tail_bound = 0.0;
    double total_error() const { return quad_error + tail_bound; }
};

/// L_alpha(b)(t) = int e^{-alpha|t-s|} b(s) ds truncated to [t-T, t+T], with
/// the unit-window tail bound 2 C_b e^{-alpha T} / (1 - e^{-alpha}) reported.
KernelTransform l_alpha(const ScalarModulus& b, double alpha, double t, double T,
                        double quad_tol = 1e-10);

/// Same transform with the e^{+eps|s|} weight under the integral; used to
/// check the nonuniform-reduction identity.
KernelTransform weighted_l_alpha(const ScalarModulus& b, double alpha, double eps,
                                 double t, double T, double quad_tol = 1e-10);

struct SupTransform {
    double theta = 0.0;
    double argmax_t = 0.0;
    std::vector<double> grid;
    double quad_error = 0.0;
    double tail_bound = 0.0;
};

SupTransform sup_l_alpha(const ScalarModulus& b, double alpha,
                         const std::vector<double>& time_grid, double T,
                         double quad_tol = 1e-10);

/// 2 (1 - e^{-alpha})^{-1} C_b, the unit-window bound on L_alpha(b).
double coppel_bound(const ScalarModulus& b, double alpha, Interval window,
                    double grid_step = 1e-2);

/// b(t) e^{-eps|t|}.
ScalarModulus nonuniform_reduce(const ScalarModulus& b, double eps);

/// Green kernel k(t,s) of the dichotomy: U(t,s)P(s) for t >= s (the tie at
/// t = s goes to this branch) and -U(t,s)(I-P(s)) for t < s.
class GreenKernel {
public:
    GreenKernel(DichotomyData d, MatrixField a, double truncation_T,
                OdeTol flow_tol = {1e-12, 1e-12});

    Mat k(double t, double s) const;
    Mat stable_part(double t, double s) const;    // U(t,s)P(s)
    Mat unstable_part(double t, double s) const;  // U(t,s)(I-P(s))
    Mat projection(double s) const;

    const DichotomyData& data() const { return d_; }
    const LinearFlow& flow() const { return flow_; }
    double truncation_T() const { return T_; }
    int dim() const { return flow_.dim(); }

private:
    DichotomyData d_;
    LinearFlow flow_;
    double T_;
};

struct GreenApply {
    Vec value;
    double quad_error = 0.0;
    double tail_bound = 0.0;
};

/// K(phi)(t) truncated to [t-T, t+T]: the stable integral over [t-T, t] minus
/// the unstable integral over [t, t+T]. phi_sup feeds the tail bound
/// K sup||phi|| e^{-alpha T} / alpha.
GreenApply green_apply(const GreenKernel& kernel, const std::function<Vec(double)>& phi,
                       double t, double T, double phi_sup, double quad_tol = 1e-8);

}  // namespace conjlab
