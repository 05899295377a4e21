#include "conjlab/conjugacy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "conjlab/errors.hpp"
#include "conjlab/rng.hpp"

namespace conjlab {

namespace {

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> out(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        out[static_cast<size_t>(i)] = a + (b - a) * i / std::max(1, n - 1);
    return out;
}

double modulus_sup(const ScalarModulus& m, Interval window, int points) {
    double sup = 0.0;
    for (double t : linspace(window.lo, window.hi, points))
        sup = std::max(sup, m.at(t));
    return sup;
}

}  // namespace

ConjugacyProblem::ConjugacyProblem(MatrixField a, NonlinearField f, DichotomyData d,
                                   ConjugacySettings settings)
    : a_(std::move(a)), f_(std::move(f)), d_(std::move(d)), set_(settings) {
    d_.validate();
    if (a_.dim() != f_.dim() || a_.dim() != d_.P0.rows())
        throw InvalidArgument("dimension mismatch between A, f and P0");

    mu_sup_ = modulus_sup(f_.mu(), set_.window, 8 * set_.hypothesis_grid_points);

    // truncation horizon: analytic tail K sup(mu) e^{-alpha T}/alpha below target
    if (set_.horizon_T > 0.0) {
        horizon_ = set_.horizon_T;
    } else {
        const double scale = d_.K * std::max(mu_sup_, 1e-30) / d_.alpha;
        horizon_ = std::log(std::max(scale / set_.tail_target, 1.0)) / d_.alpha;
        horizon_ = std::max(horizon_, 6.0 / d_.alpha) + 2.0;
    }

    kernel_ = std::make_unique<GreenKernel>(d_, a_, horizon_, OdeTol{1e-12, 1e-12});
    m_bound_ = a_.bound_M(set_.window, 1e-2).value;

    hyp_.grid = linspace(set_.window.lo, set_.window.hi, set_.hypothesis_grid_points);
    const SupTransform lmu = sup_l_alpha(f_.mu(), d_.alpha, hyp_.grid, horizon_,
                                         0.1 * set_.quad_tol);
    const SupTransform lr = sup_l_alpha(f_.r(), d_.alpha, hyp_.grid, horizon_,
                                        0.1 * set_.quad_tol);
    const SupTransform lr1 = sup_l_alpha(f_.r(), d_.alpha1, hyp_.grid, horizon_,
                                         0.1 * set_.quad_tol);
    hyp_.sup_L_mu = lmu.theta;
    hyp_.theta = lr.theta;
    hyp_.theta_tilde = lr1.theta;
    hyp_.K_theta = d_.K * hyp_.theta;
    hyp_.K_theta_tilde = d_.K * hyp_.theta_tilde;
    hyp_.sup_L_mu_finite = std::isfinite(hyp_.sup_L_mu);
    hyp_.theta_ok = hyp_.K_theta < 1.0;
    hyp_.theta_tilde_ok = hyp_.K_theta_tilde < 1.0;
    hyp_.quad_error = std::max({lmu.quad_error, lr.quad_error, lr1.quad_error});
    hyp_.tail_bound = std::max({lmu.tail_bound, lr.tail_bound, lr1.tail_bound});
    if (a_.is_constant() && f_.r().kind() == "constant")
        hyp_.autonomous_shortcut = 2.0 * f_.r().at(0.0) * d_.K / d_.alpha;
}

void ConjugacyProblem::require_theta() const {
    if (!hyp_.theta_ok)
        throw HypothesisViolated("K theta >= 1: contraction hypothesis fails");
}

void ConjugacyProblem::require_theta_tilde() const {
    if (!hyp_.theta_tilde_ok)
        throw HypothesisViolated("K theta_tilde >= 1: decay-rate hypothesis fails");
}

double ConjugacyProblem::field_window_d0() const {
    return set_.field_window > 0.0 ? set_.field_window
                                   : std::numeric_limits<double>::infinity();
}

namespace {

// smooth ramp: 1 inside |s - center| <= d0, 0 beyond d0 + 1
double field_ramp(double s, double center, double d0) {
    const double d = std::abs(s - center);
    if (d <= d0) return 1.0;
    if (d >= d0 + 1.0) return 0.0;
    const double v = d - d0;
    return 1.0 - v * v * (3.0 - 2.0 * v);
}

// the perturbation ramped to zero away from the evaluation time; the cut
// region contributes at most 2 K sup(mu) e^{-alpha d0}/alpha to Green values
NonlinearField windowed_field(const NonlinearField& f, double center, double d0) {
    if (!std::isfinite(d0)) return f;
    auto base = f;
    auto eval = [base, center, d0](double s, const Vec& x) {
        const double w = field_ramp(s, center, d0);
        if (w == 0.0) return Vec(Vec::Zero(x.size()));
        return Vec(w * base.at(s, x));
    };
    return NonlinearField::custom(f.dim(), eval, f.mu(), f.r(),
                                  "windowed(" + f.kind() + ")");
}

}  // namespace

HSolveResult solve_h(const ConjugacyProblem& p, double t, double tau, const Vec& xi) {
    const double T = p.horizon();
    const double d0 = p.field_window_d0();
    const Interval span{std::min(tau, t - T), std::max(tau, t + T)};
    OdeOptions opt;
    opt.tol = p.settings().ode_tol;
    opt.max_step = p.settings().ode_max_step;
    const NonlinearField f_traj = windowed_field(p.f(), t, d0);
    const Trajectory X = integrate(p.A(), f_traj, tau, xi, span, opt);

    auto phi = [&](double s) { return p.f().at(s, X.at(s)); };
    const GreenApply g =
        green_apply(p.kernel(), phi, t, T, p.mu_sup(), p.settings().quad_tol);
    HSolveResult out;
    out.value = -g.value;
    out.quad_error = g.quad_error;
    out.tail_bound = g.tail_bound;
    if (std::isfinite(d0)) {
        const auto& d = p.dichotomy();
        out.tail_bound += 2.0 * d.K * p.mu_sup() * std::exp(-d.alpha * d0) / d.alpha;
    }
    return out;
}

namespace {

// Marches node positions outward from the center so the center is always a
// node. Cell sizes shrink where freq(s) (carrier oscillation estimate) would
// otherwise put more than the phase budget inside one cell.
std::vector<double> graded_nodes(double a, double b, double center, double h0,
                                 double phase_budget,
                                 const std::function<double(double)>& freq) {
    auto step_at = [&](double s) {
        double h = h0;
        if (freq) {
            const double f = freq(s);
            if (f > 0.0) h = std::min(h, phase_budget / f);
        }
        return std::max(h, 1e-7);
    };
    std::vector<double> nodes{center};
    for (double s = center; s < b;) {
        double h = step_at(s);
        if (s + h > b - 1e-12) h = b - s;
        s += h;
        nodes.push_back(s);
    }
    for (double s = center; s > a;) {
        double h = step_at(s - step_at(s));
        if (s - h < a + 1e-12) h = s - a;
        s -= h;
        nodes.push_back(s);
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    while (nodes.size() < 5) nodes.push_back(nodes.back() + h0);
    return nodes;
}

// shared Picard driver: iterate Z <- base + sweep(w * f(., carrier + Z))
struct PicardWindow {
    const ConjugacyProblem& p;
    GreenWindow gw;
    double center;
    double d0;                       // field-window distance (may be infinite)
    std::vector<Vec> carrier_gauss;  // Y(s) or x_ref(s) at Gauss nodes
    std::vector<Vec> base_nodes;     // inhomogeneous term at nodes (may be empty)
    bool subtract_carrier_field = false;  // phi = f(s, carrier+Z) - f(s, carrier)

    PicardWindow(const ConjugacyProblem& prob, double a, double b, double center_t,
                 const std::function<double(double)>& carrier_freq = {},
                 bool use_field_window = true)
        : p(prob),
          gw(prob.kernel(),
             graded_nodes(a, b, center_t, prob.settings().grid_step,
                          prob.settings().osc_phase_per_cell,
                          window_freq(carrier_freq, center_t,
                                      use_field_window ? prob.field_window_d0()
                                                       : std::numeric_limits<double>::infinity()))),
          center(center_t),
          d0(use_field_window ? prob.field_window_d0()
                              : std::numeric_limits<double>::infinity()) {}

    // no resolution needed where the ramped field vanishes
    static std::function<double(double)> window_freq(
        const std::function<double(double)>& freq, double center, double d0) {
        if (!freq || !std::isfinite(d0)) return freq;
        return [freq, center, d0](double s) {
            return std::abs(s - center) >= d0 + 1.0 ? 0.0 : freq(s);
        };
    }

    double weight(double s) const {
        return std::isfinite(d0) ? field_ramp(s, center, d0) : 1.0;
    }

    // runs the iteration; returns node values of the fixed point
    std::vector<Vec> run(double tol, PicardStats& stats,
                         const std::vector<Vec>* z_init = nullptr) {
        const int n = gw.dim();
        const size_t n_nodes = gw.nodes().size();
        std::vector<Vec> z(n_nodes, Vec::Zero(n));
        if (z_init) z = *z_init;
        std::vector<Vec> ref_field;
        if (subtract_carrier_field) {
            ref_field.resize(carrier_gauss.size());
            for (size_t k = 0; k < carrier_gauss.size(); ++k)
                ref_field[k] = p.f().at(gw.gauss_times()[k], carrier_gauss[k]);
        }
        std::vector<double> w(gw.gauss_times().size());
        for (size_t k = 0; k < w.size(); ++k) w[k] = weight(gw.gauss_times()[k]);
        std::vector<Vec> phi(carrier_gauss.size(), Vec::Zero(n));
        const int max_it = p.settings().max_picard_iterations;
        for (int it = 1; it <= max_it; ++it) {
            const auto zg = gw.interpolate_to_gauss(z);
            for (size_t k = 0; k < phi.size(); ++k) {
                if (w[k] == 0.0) {
                    phi[k] = Vec::Zero(n);
                    continue;
                }
                phi[k] = p.f().at(gw.gauss_times()[k], carrier_gauss[k] + zg[k]);
                if (subtract_carrier_field) phi[k] -= ref_field[k];
                if (w[k] != 1.0) phi[k] *= w[k];
            }
            auto next = gw.sweep(phi);
            if (!base_nodes.empty())
                for (size_t i = 0; i < n_nodes; ++i) next[i] += base_nodes[i];
            double change = 0.0;
            for (size_t i = 0; i < n_nodes; ++i)
                change = std::max(change, (next[i] - z[i]).cwiseAbs().maxCoeff());
            z = std::move(next);
            stats.iterations = it;
            stats.final_change = change;
            stats.changes.push_back(change);
            if (change < tol) return z;
        }
        throw ConvergenceFailure("Picard iteration hit the iteration cap",
                                 stats.final_change);
    }
};

}  // namespace

GSolveResult solve_g(const ConjugacyProblem& p, double t, double tau, const Vec& xi,
                     double tol) {
    p.require_theta();
    if (tol <= 0.0) tol = p.settings().picard_tol;
    const double T = p.horizon();
    const auto& flow = p.kernel().flow();

    std::function<double(double)> freq;
    if (std::isfinite(p.field_window_d0()) && !p.f().is_zero()) {
        const double m = p.coefficient_bound();
        freq = [&flow, m, tau, xi](double s) {
            return m * flow.apply(s, tau, xi).norm();
        };
    }
    PicardWindow pw(p, t - T, t + T, t, freq);
    const auto& gt = pw.gw.gauss_times();
    pw.carrier_gauss.resize(gt.size());
    for (size_t k = 0; k < gt.size(); ++k) {
        if (pw.weight(gt[k]) == 0.0) {
            pw.carrier_gauss[k] = Vec::Zero(p.A().dim());  // field is off here
            continue;
        }
        pw.carrier_gauss[k] = flow.apply(gt[k], tau, xi);
    }

    GSolveResult out;
    const auto z = pw.run(tol, out.stats);
    const auto& nodes = pw.gw.nodes();
    size_t center = 0;
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < nodes.size(); ++i) {
        const double dist = std::abs(nodes[i] - t);
        if (dist < best) { best = dist; center = i; }
    }
    out.value = z[center];
    return out;
}

Vec H_eval(const ConjugacyProblem& p, double t, const Vec& x) {
    return x + solve_h(p, t, t, x).value;
}

Vec G_eval(const ConjugacyProblem& p, double t, const Vec& y) {
    return y + solve_g(p, t, t, y).value;
}

MapEvaluator::MapEvaluator(const ConjugacyProblem& p, Mode mode) : p_(p), mode_(mode) {}

Vec MapEvaluator::operator()(double t, const Vec& point) const {
    std::vector<double> key(static_cast<size_t>(point.size()) + 1);
    key[0] = t;
    for (int i = 0; i < point.size(); ++i) key[static_cast<size_t>(i) + 1] = point[i];
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
    }
    const Vec value = mode_ == Mode::H ? H_eval(p_, t, point) : G_eval(p_, t, point);
    std::lock_guard<std::mutex> lock(mutex_);
    memo_.emplace(std::move(key), value);
    max_offset_ = std::max(max_offset_, (value - point).norm());
    ++evals_;
    return value;
}

double MapEvaluator::max_offset() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return max_offset_;
}

long MapEvaluator::evaluations() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return evals_;
}

ConjugacyReport verify_conjugacy(const ConjugacyProblem& p, const SampleSpec& spec) {
    p.require_theta();
    const int n = p.A().dim();
    const auto& flow = p.kernel().flow();
    ConjugacyReport rep;
    rep.hypotheses_ok = p.hypotheses().all_ok();
    rep.offset_bound = p.offset_bound();
    rep.budget = spec.budget;

    auto track_offset = [&](double t, const Vec& point, const Vec& image, bool isH) {
        const double off = (image - point).norm();
        if (isH)
            rep.max_H_offset = std::max(rep.max_H_offset, off);
        else
            rep.max_G_offset = std::max(rep.max_G_offset, off);
        if (static_cast<int>(rep.samples.size()) < 4 * spec.composition_samples)
            rep.samples.push_back({t, point, image, isH});
    };

    // (a) composition identities on seeded samples
    for (int i = 0; i < spec.composition_samples; ++i) {
        Rng rng = Rng::fork(spec.seed, static_cast<std::uint64_t>(i));
        const double t = rng.uniform(spec.t_range.lo, spec.t_range.hi);
        const Vec pt = rng.in_ball(n, spec.point_radius);

        const Vec gy = G_eval(p, t, pt);
        track_offset(t, pt, gy, false);
        const Vec hgy = H_eval(p, t, gy);
        track_offset(t, gy, hgy, true);
        rep.max_HG_residual = std::max(rep.max_HG_residual, (hgy - pt).norm());

        const Vec hx = H_eval(p, t, pt);
        track_offset(t, pt, hx, true);
        const Vec ghx = G_eval(p, t, hx);
        track_offset(t, hx, ghx, false);
        rep.max_GH_residual = std::max(rep.max_GH_residual, (ghx - pt).norm());
    }

    // (b) solution mapping along trajectories
    OdeOptions opt;
    opt.tol = p.settings().ode_tol;
    opt.max_step = p.settings().ode_max_step;
    for (int j = 0; j < spec.trajectories; ++j) {
        Rng rng = Rng::fork(spec.seed ^ 0x5bf0f5e4c0de1234ULL, static_cast<std::uint64_t>(j));
        const double t0 = rng.uniform(spec.t_range.lo, spec.t_range.hi);
        const double t1_max = t0 + spec.trajectory_horizon;

        const Vec x0 = rng.in_ball(n, spec.point_radius);
        const Trajectory X = integrate(p.A(), p.f(), t0, x0, {t0, t1_max}, opt);
        const Vec h0 = H_eval(p, t0, x0);
        track_offset(t0, x0, h0, true);

        const Vec y0 = rng.in_ball(n, spec.point_radius);
        const Vec g0 = G_eval(p, t0, y0);
        track_offset(t0, y0, g0, false);
        const Trajectory Xg = integrate(p.A(), p.f(), t0, g0, {t0, t1_max}, opt);

        for (int c = 1; c <= spec.checks_per_trajectory; ++c) {
            const double t1 =
                t0 + spec.trajectory_horizon * c / spec.checks_per_trajectory;
            const Mat u10 = flow.U(t1, t0);
            const Vec push_h = H_eval(p, t1, X.at(t1));
            rep.max_solution_map_H =
                std::max(rep.max_solution_map_H, (push_h - u10 * h0).norm());
            const Vec push_g = G_eval(p, t1, u10 * y0);
            rep.max_solution_map_G =
                std::max(rep.max_solution_map_G, (push_g - Xg.at(t1)).norm());
        }
    }

    const double allowed =
        rep.offset_bound * (1.0 + p.settings().bound_slack) + 10.0 * p.settings().quad_tol;
    rep.offsets_ok = rep.max_H_offset <= allowed && rep.max_G_offset <= allowed;
    rep.residuals_within_budget =
        rep.max_HG_residual <= spec.budget && rep.max_GH_residual <= spec.budget &&
        rep.max_solution_map_H <= spec.budget && rep.max_solution_map_G <= spec.budget;
    return rep;
}

namespace {

BoundedSolveResult bounded_solve(const ConjugacyProblem& p, double t0, const Vec& xi,
                                 double tol, double span, bool forward) {
    p.require_theta();
    if (tol <= 0.0) tol = p.settings().picard_tol;
    if (span <= 0.0) span = p.horizon();
    const int n = p.A().dim();
    const Mat p0 = p.kernel().projection(t0);
    const Mat proj = forward ? p0 : Mat(Mat::Identity(n, n) - p0);
    if ((proj * xi - xi).norm() > 1e-9 * (1.0 + xi.norm()))
        throw InvalidArgument(forward ? "xi1 must lie in range P(t0)"
                                      : "xi2 must lie in range I - P(t0)");

    const double a = forward ? t0 : t0 - span - p.horizon();
    const double b = forward ? t0 + span + p.horizon() : t0;
    // iterates stay bounded, so no oscillation grading or field window here
    PicardWindow pw(p, a, b, t0, {}, /*use_field_window=*/false);
    const auto& gw = pw.gw;

    pw.base_nodes = forward ? gw.propagate_stable_from_left(xi)
                            : gw.propagate_unstable_from_right(xi);
    // carrier 0: phi = f(s, Z); the iterate itself is the solution candidate
    pw.carrier_gauss.assign(gw.gauss_times().size(), Vec::Zero(n));

    BoundedSolveResult out;
    auto x_nodes = pw.run(tol, out.stats, &pw.base_nodes);

    // restrict to the requested span and attach ODE derivatives
    std::vector<double> ts;
    std::vector<Vec> xs, ds;
    for (size_t i = 0; i < gw.nodes().size(); ++i) {
        const double t = gw.nodes()[i];
        if (forward && t > t0 + span + 1e-12) break;
        if (!forward && t < t0 - span - 1e-12) continue;
        ts.push_back(t);
        xs.push_back(x_nodes[i]);
        ds.push_back(p.A().at(t) * x_nodes[i] + p.f().at(t, x_nodes[i]));
    }
    out.trajectory = Trajectory(std::move(ts), std::move(xs), std::move(ds),
                                p.settings().ode_tol);
    return out;
}

DecayReport decay_report(const ConjugacyProblem& p, const Trajectory& x,
                         const Trajectory& xbar, double t0, double dxi_norm,
                         double horizon, int n_samples, double slack, bool forward) {
    DecayReport rep;
    rep.coefficient = p.dichotomy().K / (1.0 - p.hypotheses().K_theta_tilde);
    rep.alpha2 = p.dichotomy().alpha2();
    rep.samples = n_samples;
    rep.min_margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_samples; ++i) {
        const double dt = horizon * i / std::max(1, n_samples - 1);
        const double t = forward ? t0 + dt : t0 - dt;
        const double diff = (x.at(t) - xbar.at(t)).norm();
        const double bound = rep.coefficient * dxi_norm * std::exp(-rep.alpha2 * dt);
        double margin;
        if (bound == 0.0)
            margin = diff == 0.0 ? 0.0 : -std::numeric_limits<double>::infinity();
        else
            margin = (bound * (1.0 + slack) - diff) / bound;
        if (margin < rep.min_margin) {
            rep.min_margin = margin;
            rep.worst_t = t;
        }
    }
    rep.passed = rep.min_margin >= 0.0;
    return rep;
}

}  // namespace

BoundedSolveResult solve_bounded_forward(const ConjugacyProblem& p, double t0,
                                         const Vec& xi1, double tol, double span) {
    return bounded_solve(p, t0, xi1, tol, span, true);
}

BoundedSolveResult solve_bounded_backward(const ConjugacyProblem& p, double t0,
                                          const Vec& xi2, double tol, double span) {
    return bounded_solve(p, t0, xi2, tol, span, false);
}

DecayReport decay_check(const ConjugacyProblem& p, double t0, const Vec& xi1,
                        const Vec& xi1_bar, double horizon, int n_samples,
                        double slack) {
    p.require_theta_tilde();
    if (slack < 0.0) slack = p.settings().bound_slack;
    const auto x = solve_bounded_forward(p, t0, xi1, -1.0, horizon);
    const auto xbar = solve_bounded_forward(p, t0, xi1_bar, -1.0, horizon);
    return decay_report(p, x.trajectory, xbar.trajectory, t0, (xi1 - xi1_bar).norm(),
                        horizon, n_samples, slack, true);
}

DecayReport decay_check_backward(const ConjugacyProblem& p, double t0, const Vec& xi2,
                                 const Vec& xi2_bar, double horizon, int n_samples,
                                 double slack) {
    p.require_theta_tilde();
    if (slack < 0.0) slack = p.settings().bound_slack;
    const auto x = solve_bounded_backward(p, t0, xi2, -1.0, horizon);
    const auto xbar = solve_bounded_backward(p, t0, xi2_bar, -1.0, horizon);
    return decay_report(p, x.trajectory, xbar.trajectory, t0, (xi2 - xi2_bar).norm(),
                        horizon, n_samples, slack, false);
}

ProbeReport zero_uniqueness_probe(const ConjugacyProblem& p, double t0, const Vec& x0,
                                  const Vec& z0, double tol) {
    p.require_theta();
    const double T = p.horizon();
    const auto& flow = p.kernel().flow();
    std::function<double(double)> freq;
    if (std::isfinite(p.field_window_d0()) && !p.f().is_zero()) {
        const double m = p.coefficient_bound();
        freq = [&flow, m, t0, x0](double s) {
            return m * flow.apply(s, t0, x0).norm();
        };
    }
    PicardWindow pw(p, t0 - T, t0 + T, t0, freq);
    const auto& gw = pw.gw;
    pw.carrier_gauss.resize(gw.gauss_times().size());
    for (size_t k = 0; k < pw.carrier_gauss.size(); ++k) {
        const double s = gw.gauss_times()[k];
        pw.carrier_gauss[k] = pw.weight(s) == 0.0 ? Vec(Vec::Zero(p.A().dim()))
                                                  : flow.apply(s, t0, x0);
    }

    ProbeReport rep;
    std::vector<Vec> z(gw.nodes().size(), z0);
    const int max_it = p.settings().max_picard_iterations;
    for (int it = 1; it <= max_it; ++it) {
        const auto zg = gw.interpolate_to_gauss(z);
        std::vector<Vec> phi(zg.size());
        for (size_t k = 0; k < zg.size(); ++k) {
            const double s = gw.gauss_times()[k];
            const double w = pw.weight(s);
            if (w == 0.0) {
                phi[k] = Vec::Zero(p.A().dim());
                continue;
            }
            phi[k] = w * (p.f().at(s, pw.carrier_gauss[k] + zg[k]) -
                          p.f().at(s, pw.carrier_gauss[k]));
        }
        z = gw.sweep(phi);
        double norm = 0.0;
        for (const auto& v : z) norm = std::max(norm, v.cwiseAbs().maxCoeff());
        rep.iterations = it;
        rep.final_norm = norm;
        rep.norms.push_back(norm);
        if (norm < tol) {
            rep.converged = true;
            return rep;
        }
    }
    throw ConvergenceFailure("zero-solution probe did not contract below tolerance",
                             rep.final_norm);
}

}  // namespace conjlab
