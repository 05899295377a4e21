#include "conjlab/gronwall.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "conjlab/errors.hpp"
#include "conjlab/quadrature.hpp"

namespace conjlab {

void IneqInstance::validate(bool need_u) const {
    if (!(s >= t0)) throw InvalidArgument("need s >= t0");
    if (!(c > 0.0 && c1 > 0.0 && c2 > 0.0))
        throw InvalidArgument("c, c1, c2 must be positive");
    if (!(alpha > 0.0)) throw InvalidArgument("alpha must be positive");
    if (!(alpha1 > 0.0 && alpha1 < alpha))
        throw InvalidArgument("alpha1 must lie in (0, alpha)");
    if (grid_points < 8) throw InvalidArgument("grid too coarse");
    if (need_u) {
        for (double v : u.values())
            if (v < 0.0) throw InvalidArgument("u must be nonnegative");
    }
}

namespace {

// Gauss-Legendre 4 on [-1, 1]
constexpr double kGx[4] = {-0.8611363115940526, -0.3399810435848563,
                           0.3399810435848563, 0.8611363115940526};
constexpr double kGw[4] = {0.3478548451374538, 0.6521451548625461,
                           0.6521451548625461, 0.3478548451374538};

// Uniform grid on [t0, s] with per-cell Gauss nodes. Applies the two-sided
// exponential-kernel operator to a function sampled at the Gauss nodes, at
// every grid node, in O(cells) by the semigroup recursion.
struct ScalarWindow {
    double t0, s, h;
    int cells;
    std::vector<double> nodes;        // cells + 1
    std::vector<double> gauss_t;      // cells * 4
    std::vector<double> gauss_w;      // cells * 4

    ScalarWindow(double a, double b, int grid_points)
        : t0(a), s(b), cells(std::max(1, grid_points - 1)) {
        h = (b - a) / cells;
        nodes.resize(cells + 1);
        for (int i = 0; i <= cells; ++i) nodes[i] = a + i * h;
        nodes.back() = b;
        gauss_t.resize(4 * cells);
        gauss_w.resize(4 * cells);
        for (int i = 0; i < cells; ++i) {
            const double mid = 0.5 * (nodes[i] + nodes[i + 1]);
            const double half = 0.5 * (nodes[i + 1] - nodes[i]);
            for (int j = 0; j < 4; ++j) {
                gauss_t[4 * i + j] = mid + half * kGx[j];
                gauss_w[4 * i + j] = half * kGw[j];
            }
        }
    }

    std::vector<double> lerp_to_gauss(const std::vector<double>& node_vals) const {
        std::vector<double> out(gauss_t.size());
        for (int i = 0; i < cells; ++i) {
            for (int j = 0; j < 4; ++j) {
                const double w = (gauss_t[4 * i + j] - nodes[i]) / h;
                out[4 * i + j] = (1.0 - w) * node_vals[i] + w * node_vals[i + 1];
            }
        }
        return out;
    }

    // c1 int_{t0}^{node} e^{-rate(node-tau)} psi + c2 int_{node}^{s} e^{-rate(tau-node)} psi
    std::vector<double> kernel_apply(double rate, double c1, double c2,
                                     const std::vector<double>& psi_gauss) const {
        std::vector<double> fwd(cells + 1, 0.0), bwd(cells + 1, 0.0);
        const double decay = std::exp(-rate * h);
        for (int i = 0; i < cells; ++i) {
            double local = 0.0;
            for (int j = 0; j < 4; ++j)
                local += gauss_w[4 * i + j] *
                         std::exp(-rate * (nodes[i + 1] - gauss_t[4 * i + j])) *
                         psi_gauss[4 * i + j];
            fwd[i + 1] = decay * fwd[i] + local;
        }
        for (int i = cells - 1; i >= 0; --i) {
            double local = 0.0;
            for (int j = 0; j < 4; ++j)
                local += gauss_w[4 * i + j] *
                         std::exp(-rate * (gauss_t[4 * i + j] - nodes[i])) *
                         psi_gauss[4 * i + j];
            bwd[i] = decay * bwd[i + 1] + local;
        }
        std::vector<double> out(cells + 1);
        for (int i = 0; i <= cells; ++i) out[i] = c1 * fwd[i] + c2 * bwd[i];
        return out;
    }
};

std::vector<double> sample_b(const ScalarWindow& w, const ScalarModulus& b) {
    std::vector<double> out(w.gauss_t.size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = b.at(w.gauss_t[i]);
    return out;
}

double first_term(const IneqInstance& inst, double t, bool second) {
    return second ? inst.c * std::exp(-inst.alpha * (inst.s - t))
                  : inst.c * std::exp(-inst.alpha * (t - inst.t0));
}

double conclusion_bound(const IneqInstance& inst, double theta, double t, bool second) {
    const double decay = second ? inst.alpha2() * (inst.s - t) : inst.alpha2() * (t - inst.t0);
    return inst.c / (1.0 - theta) * std::exp(-decay);
}

Certificate check_inequality(const IneqInstance& inst, double slack, bool second) {
    inst.validate();
    const Theta1 th = theta1(inst);
    if (!(th.value < 1.0))
        throw ContractionViolated("theta1 >= 1, certificate inapplicable", th.value);

    ScalarWindow w(inst.t0, inst.s, inst.grid_points);
    std::vector<double> u_nodes(w.nodes.size());
    for (size_t i = 0; i < w.nodes.size(); ++i) u_nodes[i] = inst.u.at(w.nodes[i]);
    std::vector<double> bu(w.gauss_t.size());
    const auto u_gauss = w.lerp_to_gauss(u_nodes);
    for (size_t i = 0; i < bu.size(); ++i) bu[i] = inst.b.at(w.gauss_t[i]) * u_gauss[i];
    const auto rhs_kernel = w.kernel_apply(inst.alpha, inst.c1, inst.c2, bu);

    Certificate cert;
    cert.theta1 = th.value;
    cert.alpha2 = inst.alpha2();
    cert.slack = slack;

    // hypothesis: the inequality itself must hold at the samples
    const double hyp_tol = std::max(slack, 1e-9);
    cert.hypothesis_ok = true;
    for (size_t i = 0; i < w.nodes.size(); ++i) {
        const double rhs = first_term(inst, w.nodes[i], second) + rhs_kernel[i];
        if (u_nodes[i] > rhs * (1.0 + hyp_tol) + 1e-14 * inst.c) {
            cert.hypothesis_ok = false;
            break;
        }
    }

    double worst = std::numeric_limits<double>::infinity();
    double worst_t = inst.t0;
    for (size_t i = 0; i < w.nodes.size(); ++i) {
        const double bound = conclusion_bound(inst, th.value, w.nodes[i], second);
        const double margin = (bound * (1.0 + slack) - u_nodes[i]) / bound;
        if (margin < worst) {
            worst = margin;
            worst_t = w.nodes[i];
        }
    }
    cert.bound_margin = worst;
    cert.worst_t = worst_t;
    if (!cert.hypothesis_ok)
        cert.verdict = CertificateVerdict::HypothesisNotSatisfied;
    else
        cert.verdict = worst >= 0.0 ? CertificateVerdict::Pass
                                    : CertificateVerdict::BoundViolated;
    return cert;
}

}  // namespace

double l_alpha1_windowed(const IneqInstance& inst, double t, double quad_tol) {
    inst.validate(false);
    if (!(t > inst.t0 && t < inst.s)) throw InvalidArgument("t must lie in (t0, s)");
    auto kinks = inst.b.breakpoints(inst.t0, inst.s);
    auto left = quad_adaptive_split(
        [&](double tau) { return std::exp(-inst.alpha1 * (t - tau)) * inst.b.at(tau); },
        inst.t0, t, kinks, quad_tol);
    auto right = quad_adaptive_split(
        [&](double tau) { return std::exp(-inst.alpha1 * (tau - t)) * inst.b.at(tau); },
        t, inst.s, kinks, quad_tol);
    return inst.c1 * left.value + inst.c2 * right.value;
}

Theta1 theta1(const IneqInstance& inst) {
    inst.validate(false);
    ScalarWindow w(inst.t0, inst.s, inst.grid_points);
    const auto vals = w.kernel_apply(inst.alpha1, inst.c1, inst.c2, sample_b(w, inst.b));
    Theta1 out;
    for (size_t i = 0; i < w.nodes.size(); ++i) {
        if (vals[i] > out.value) {
            out.value = vals[i];
            out.argmax_t = w.nodes[i];
        }
    }
    out.contraction = out.value < 1.0;
    return out;
}

Certificate check_first_inequality(const IneqInstance& inst, double slack) {
    return check_inequality(inst, slack, false);
}

Certificate check_second_inequality(const IneqInstance& inst, double slack) {
    return check_inequality(inst, slack, true);
}

WorstCaseU worst_case_u(const IneqInstance& tmpl, double tol, bool second,
                        int max_iterations) {
    tmpl.validate(false);
    if (!(tol > 0.0)) throw InvalidArgument("tolerance must be positive");
    const Theta1 th = theta1(tmpl);
    if (!(th.value < 1.0))
        throw ContractionViolated("theta1 >= 1, fixed point unavailable", th.value);

    ScalarWindow w(tmpl.t0, tmpl.s, tmpl.grid_points);
    const auto b_gauss = sample_b(w, tmpl.b);
    std::vector<double> base(w.nodes.size());
    for (size_t i = 0; i < w.nodes.size(); ++i)
        base[i] = first_term(tmpl, w.nodes[i], second);

    WorstCaseU out;
    std::vector<double> u = base;
    for (int it = 0; it < max_iterations; ++it) {
        auto u_gauss = w.lerp_to_gauss(u);
        for (size_t i = 0; i < u_gauss.size(); ++i) u_gauss[i] *= b_gauss[i];
        const auto k = w.kernel_apply(tmpl.alpha, tmpl.c1, tmpl.c2, u_gauss);
        double change = 0.0;
        std::vector<double> next(u.size());
        for (size_t i = 0; i < u.size(); ++i) {
            next[i] = base[i] + k[i];
            change = std::max(change, std::abs(next[i] - u[i]));
        }
        u = std::move(next);
        out.iterations = it + 1;
        out.final_change = change;
        out.changes.push_back(change);
        if (change < tol) {
            out.u = PiecewiseLinear(w.nodes, u);
            return out;
        }
    }
    throw ConvergenceFailure("worst-case fixed point did not converge",
                             out.final_change);
}

}  // namespace conjlab
