#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "conjlab/dichotomy.hpp"
#include "conjlab/green_window.hpp"

namespace conjlab {

struct ConjugacySettings {
    double horizon_T = 0.0;    // 0 = derived so truncation tails < tail_target
    double tail_target = 1e-6;
    double picard_tol = 1e-6;
    OdeTol ode_tol{1e-9, 1e-9};
    double ode_max_step = 0.1;
    double quad_tol = 1e-8;
    double bound_slack = 1e-3;  // relative slack when checking analytic bounds
    double grid_step = 0.0625;  // Picard table spacing
    int max_picard_iterations = 400;
    Interval window{-8.0, 8.0};      // where sup-grids live
    int hypothesis_grid_points = 25;
    /// Distance from the evaluation time beyond which the perturbation is
    /// ramped to zero along trajectories and inside Picard operators
    /// (0 = never). For fields that oscillate in space (sine perturbations)
    /// the exploding linear coordinates otherwise force exponentially fine
    /// resolution; the cut costs at most 2 K sup(mu) e^{-alpha d0}/alpha,
    /// which is folded into the reported tail bounds.
    double field_window = 0.0;
    /// Phase-per-cell budget for grading Picard grids against carrier
    /// oscillation (used only when field_window is active).
    double osc_phase_per_cell = 1.5;
};

struct HypothesisReport {
    double sup_L_mu = 0.0;
    double theta = 0.0;        // sup L_alpha(r)
    double theta_tilde = 0.0;  // sup L_alpha1(r), two-sided kernel at rate alpha1
    double K_theta = 0.0;
    double K_theta_tilde = 0.0;
    bool sup_L_mu_finite = false;
    bool theta_ok = false;        // K theta < 1
    bool theta_tilde_ok = false;  // K theta_tilde < 1
    std::optional<double> autonomous_shortcut;  // 2 r K / alpha when A, r constant
    std::vector<double> grid;
    double quad_error = 0.0;
    double tail_bound = 0.0;
    bool all_ok() const { return sup_L_mu_finite && theta_ok; }
};

/// A linearization problem: y' = A(t)y + f(t,y) against x' = A(t)x with the
/// dichotomy data. Hypothesis quantities are computed once at construction;
/// the object is immutable afterwards and safe to share across threads.
class ConjugacyProblem {
public:
    ConjugacyProblem(MatrixField a, NonlinearField f, DichotomyData d,
                     ConjugacySettings settings = {});

    const MatrixField& A() const { return a_; }
    const NonlinearField& f() const { return f_; }
    const DichotomyData& dichotomy() const { return d_; }
    const ConjugacySettings& settings() const { return set_; }
    const HypothesisReport& hypotheses() const { return hyp_; }
    const GreenKernel& kernel() const { return *kernel_; }
    double horizon() const { return horizon_; }
    double mu_sup() const { return mu_sup_; }
    /// K ||L_alpha(mu)||_inf, the uniform offset bound on H - id and G - id.
    double offset_bound() const { return d_.K * hyp_.sup_L_mu; }

    void require_theta() const;
    void require_theta_tilde() const;
    /// sup ||A|| over the window (grid-sampled), used for oscillation grading.
    double coefficient_bound() const { return m_bound_; }
    /// Effective field-window distance (infinity when disabled).
    double field_window_d0() const;

private:
    MatrixField a_;
    NonlinearField f_;
    DichotomyData d_;
    ConjugacySettings set_;
    std::unique_ptr<GreenKernel> kernel_;
    HypothesisReport hyp_;
    double horizon_ = 0.0;
    double mu_sup_ = 0.0;
    double m_bound_ = 0.0;
};

struct HSolveResult {
    Vec value;
    double quad_error = 0.0;
    double tail_bound = 0.0;
};

/// The unique bounded solution of Z' = A(t)Z - f(t, X(t,tau,xi)) at time t:
/// minus the Green operator applied along the integrated nonlinear trajectory.
HSolveResult solve_h(const ConjugacyProblem& p, double t, double tau, const Vec& xi);

struct PicardStats {
    int iterations = 0;
    double final_change = 0.0;
    std::vector<double> changes;
};

struct GSolveResult {
    Vec value;
    PicardStats stats;
};

/// Fixed point of T Z = K(f(., Y(., tau, xi) + Z)) evaluated at time t, by
/// Picard iteration on the window grid (ratio <= K theta). Requires
/// K theta < 1. tol <= 0 uses the problem's Picard tolerance.
GSolveResult solve_g(const ConjugacyProblem& p, double t, double tau, const Vec& xi,
                     double tol = -1.0);

Vec H_eval(const ConjugacyProblem& p, double t, const Vec& x);
Vec G_eval(const ConjugacyProblem& p, double t, const Vec& y);

/// Memoizing point evaluator of H or G; tracks the largest offset ||F p - p||
/// seen so the uniform offset bound can be audited after a batch of evaluations.
class MapEvaluator {
public:
    enum class Mode { H, G };
    MapEvaluator(const ConjugacyProblem& p, Mode mode);
    Vec operator()(double t, const Vec& point) const;
    double max_offset() const;
    long evaluations() const;

private:
    const ConjugacyProblem& p_;
    Mode mode_;
    mutable std::mutex mutex_;
    mutable std::map<std::vector<double>, Vec> memo_;
    mutable double max_offset_ = 0.0;
    mutable long evals_ = 0;
};

struct SampleSpec {
    int composition_samples = 100;
    Interval t_range{-2.0, 2.0};
    double point_radius = 2.0;
    int trajectories = 20;
    double trajectory_horizon = 3.0;
    int checks_per_trajectory = 4;
    unsigned long long seed = 1;
    double budget = 5e-3;
};

struct MapSampleRow {  // exported as CSV: t, point..., image...
    double t;
    Vec point;
    Vec image;
    bool is_H;
};

struct ConjugacyReport {
    double max_HG_residual = 0.0;       // ||H(t, G(t,y)) - y||
    double max_GH_residual = 0.0;       // ||G(t, H(t,x)) - x||
    double max_solution_map_H = 0.0;    // pushed nonlinear orbit vs linear flow
    double max_solution_map_G = 0.0;    // pushed linear orbit vs nonlinear flow
    double max_H_offset = 0.0;
    double max_G_offset = 0.0;
    double offset_bound = 0.0;
    bool offsets_ok = false;
    bool hypotheses_ok = false;
    double budget = 0.0;
    bool residuals_within_budget = false;
    std::vector<MapSampleRow> samples;
};

ConjugacyReport verify_conjugacy(const ConjugacyProblem& p, const SampleSpec& spec);

struct BoundedSolveResult {
    Trajectory trajectory;
    PicardStats stats;
};

/// Unique bounded solution on [t0, t0 + span] with P(t0) X(t0) = xi1, by
/// Picard iteration of the stable/unstable integral representation. The
/// internal window extends one horizon beyond the returned span. xi1 must lie
/// in range P(t0) (1e-9); requires K theta < 1. Negative span/tol pick the
/// problem defaults (span = horizon, tol = Picard tolerance).
BoundedSolveResult solve_bounded_forward(const ConjugacyProblem& p, double t0,
                                         const Vec& xi1, double tol = -1.0,
                                         double span = -1.0);

/// Mirror on [t0 - span, t0] with (I - P(t0)) X(t0) = xi2.
BoundedSolveResult solve_bounded_backward(const ConjugacyProblem& p, double t0,
                                          const Vec& xi2, double tol = -1.0,
                                          double span = -1.0);

struct DecayReport {
    double coefficient = 0.0;  // K / (1 - K theta_tilde)
    double alpha2 = 0.0;
    double min_margin = 0.0;   // min over samples, relative to the bound
    double worst_t = 0.0;
    int samples = 0;
    bool passed = false;
};

/// Reduced-rate decay estimate between two stable-fiber solutions over
/// [t0, t0 + horizon]. Requires K theta_tilde < 1. slack < 0 uses settings.
DecayReport decay_check(const ConjugacyProblem& p, double t0, const Vec& xi1,
                        const Vec& xi1_bar, double horizon, int n_samples = 61,
                        double slack = -1.0);

/// Mirror over [t0 - horizon, t0] with the growing-rate bound.
DecayReport decay_check_backward(const ConjugacyProblem& p, double t0, const Vec& xi2,
                                 const Vec& xi2_bar, double horizon, int n_samples = 61,
                                 double slack = -1.0);

struct ProbeReport {
    bool converged = false;
    double final_norm = 0.0;
    int iterations = 0;
    std::vector<double> norms;  // sup norm of each iterate
};

/// Picard iteration of Z -> K(f(., x(.) + Z) - f(., x(.))) along the linear
/// reference x(t) = U(t, t0) x0, started from the constant function Z0. The
/// iterates must contract to the zero solution.
ProbeReport zero_uniqueness_probe(const ConjugacyProblem& p, double t0, const Vec& x0,
                                  const Vec& z0, double tol);

}  // namespace conjlab
