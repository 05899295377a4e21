#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "conjlab/conjugacy.hpp"
#include "conjlab/errors.hpp"
#include "conjlab/examples.hpp"
#include "conjlab/rng.hpp"

using namespace conjlab;

namespace {

ConjugacyProblem planar_problem(double sigma = 0.1, double field_window = 8.0) {
    auto ex = planar_example(sigma);
    ConjugacySettings set;
    set.field_window = field_window;
    return ConjugacyProblem(ex.A, ex.f, ex.D, set);
}

ConjugacyProblem zero_problem() {
    auto A = MatrixField::constant([] {
        Mat m = Mat::Zero(2, 2);
        m(0, 0) = -1.0;
        m(1, 1) = 1.0;
        return m;
    }());
    DichotomyData d{0.0, [] {
                        Mat m = Mat::Zero(2, 2);
                        m(0, 0) = 1.0;
                        return m;
                    }(),
                    1.0, 1.0, 0.5};
    return ConjugacyProblem(A, NonlinearField::zero(2), d, {});
}

}  // namespace

TEST_CASE("hypothesis checks") {
    SUBCASE("planar constants reproduce theta = 2 sigma") {
        auto p = planar_problem(0.1);
        const auto& h = p.hypotheses();
        CHECK(h.theta == doctest::Approx(0.2).epsilon(1e-4));
        CHECK(h.theta_tilde == doctest::Approx(0.4).epsilon(1e-3));
        CHECK(h.sup_L_mu == doctest::Approx(0.2 * std::sqrt(2.0)).epsilon(1e-4));
        CHECK(h.theta_ok);
        CHECK(h.theta_tilde_ok);
        CHECK(h.sup_L_mu_finite);
        REQUIRE(h.autonomous_shortcut);
        CHECK(*h.autonomous_shortcut == doctest::Approx(0.2).epsilon(1e-12));
    }
    SUBCASE("zero perturbation trivially passes") {
        auto p = zero_problem();
        CHECK(p.hypotheses().theta == 0.0);
        CHECK(p.hypotheses().sup_L_mu == 0.0);
        CHECK(p.hypotheses().all_ok());
        CHECK(p.offset_bound() == 0.0);
    }
    SUBCASE("large Lipschitz modulus is refused by the g-solver") {
        auto ex = planar_example(0.1);
        auto big = NonlinearField::builtin("planar_sine", {{"sigma", 0.6}});
        ConjugacyProblem p(ex.A, big, ex.D, {});
        CHECK(p.hypotheses().theta == doctest::Approx(1.2).epsilon(1e-3));
        CHECK_FALSE(p.hypotheses().theta_ok);
        Vec y = Vec::Ones(2);
        CHECK_THROWS_AS(solve_g(p, 0.0, 0.0, y), HypothesisViolated);
        CHECK_THROWS_AS(solve_bounded_forward(p, 0.0, Vec(p.dichotomy().P0 * y)),
                        HypothesisViolated);
    }
}

TEST_CASE("solve_h") {
    SUBCASE("zero perturbation gives the zero correction") {
        auto p = zero_problem();
        Vec x(2);
        x << 1.4, -0.6;
        CHECK(solve_h(p, 0.7, 0.7, x).value.norm() == 0.0);
    }
    SUBCASE("invariance along the trajectory") {
        auto ex = planar_example(0.1);
        ConjugacySettings set;
        set.field_window = 8.0;
        set.ode_tol = {1e-11, 1e-11};
        set.quad_tol = 1e-10;
        set.ode_max_step = 0.05;
        ConjugacyProblem p(ex.A, ex.f, ex.D, set);
        Vec xi(2);
        xi << 0.8, 0.5;
        const double tau = -1.0, t = 0.5;
        OdeOptions opt;
        opt.tol = set.ode_tol;
        opt.max_step = set.ode_max_step;
        const Vec x_t = integrate(p.A(), p.f(), tau, xi, {tau, t}, opt).at(t);
        const Vec h1 = solve_h(p, t, tau, xi).value;
        const Vec h2 = solve_h(p, t, t, x_t).value;
        CHECK((h1 - h2).norm() < 1e-6);
    }
    SUBCASE("norm bound K 2 mu / alpha with slack") {
        auto p = planar_problem(0.1);
        const double bound = 2.0 * 0.1 * std::sqrt(2.0);  // K 2 mu / alpha
        Rng rng(3);
        for (int i = 0; i < 8; ++i) {
            const double t = rng.uniform(-2.0, 2.0);
            const Vec x = rng.in_ball(2, 2.0);
            const auto h = solve_h(p, t, t, x);
            CHECK(h.value.norm() <= bound + 1e-3);
        }
    }
}

TEST_CASE("solve_g") {
    SUBCASE("zero perturbation converges in one sweep") {
        auto p = zero_problem();
        Vec y(2);
        y << 0.3, 0.9;
        const auto g = solve_g(p, 0.2, 0.2, y);
        CHECK(g.value.norm() == 0.0);
        CHECK(g.stats.iterations == 1);
    }
    SUBCASE("iteration count obeys the contraction estimate") {
        auto p = planar_problem(0.1);
        Vec y(2);
        y << 1.0, -0.7;
        const double tol = 1e-8;
        const auto g = solve_g(p, 0.0, 0.0, y, tol);
        REQUIRE(!g.stats.changes.empty());
        const double first = g.stats.changes.front();
        const int bound =
            static_cast<int>(std::ceil(std::log(tol / first) / std::log(0.2))) + 2;
        CHECK(g.stats.iterations <= bound);
    }
    SUBCASE("Picard contraction ratio stays within K theta + 0.05") {
        auto p = planar_problem(0.1);
        Rng rng(5);
        for (int i = 0; i < 3; ++i) {
            Vec y = rng.in_ball(2, 2.0);
            const auto g = solve_g(p, rng.uniform(-1.0, 1.0), 0.0, y, 1e-9);
            const auto& ch = g.stats.changes;
            for (size_t k = 1; k + 1 < ch.size(); ++k) {
                if (ch[k] < 1e-12) break;
                CHECK(ch[k + 1] / ch[k] <= p.hypotheses().K_theta + 0.05);
            }
        }
    }
    SUBCASE("iteration cap raises a convergence failure") {
        auto ex = planar_example(0.1);
        ConjugacySettings set;
        set.field_window = 8.0;
        set.max_picard_iterations = 2;
        ConjugacyProblem p(ex.A, ex.f, ex.D, set);
        Vec y(2);
        y << 1.0, 1.0;
        CHECK_THROWS_AS(solve_g(p, 0.0, 0.0, y, 1e-12), ConvergenceFailure);
    }
    SUBCASE("norm bound K ||L_alpha mu|| on random evaluations") {
        auto p = planar_problem(0.1);
        const double bound = p.offset_bound();
        Rng rng(7);
        for (int i = 0; i < 50; ++i) {
            const double t = rng.uniform(-2.0, 2.0);
            const Vec xi = rng.in_ball(2, 2.0);
            const auto g = solve_g(p, t, t, xi);
            CHECK(g.value.norm() <= bound + 1e-3);
        }
    }
}

TEST_CASE("H and G evaluations") {
    SUBCASE("identity when f vanishes") {
        auto p = zero_problem();
        Vec x(2);
        x << -0.4, 1.7;
        CHECK((H_eval(p, 0.5, x) - x).norm() == 0.0);
        CHECK((G_eval(p, 0.5, x) - x).norm() == 0.0);
    }
    SUBCASE("uniform offset bound, including far from the origin") {
        auto p = planar_problem(0.1);
        const double bound = p.offset_bound() + 1e-3;
        Vec x(2);
        x << 10.0 / std::sqrt(2.0), 10.0 / std::sqrt(2.0);  // ||x|| = 10
        CHECK((H_eval(p, 0.0, x) - x).norm() <= bound);
        Vec y(2);
        y << 0.3, -1.2;
        CHECK((H_eval(p, 1.0, y) - y).norm() <= bound);
        CHECK((G_eval(p, 1.0, y) - y).norm() <= bound);
    }
    SUBCASE("map evaluator memoizes and tracks offsets") {
        auto p = planar_problem(0.1);
        MapEvaluator H(p, MapEvaluator::Mode::H);
        Vec x(2);
        x << 0.5, 0.5;
        const Vec a = H(0.0, x);
        const long evals = H.evaluations();
        const Vec b = H(0.0, x);
        CHECK(H.evaluations() == evals);  // served from the memo
        CHECK((a - b).norm() == 0.0);
        CHECK(H.max_offset() <= p.offset_bound() * (1 + 1e-3) + 1e-4);
    }
}

TEST_CASE("conjugacy verification report") {
    SUBCASE("zero perturbation: identities hold to integration accuracy") {
        auto p = zero_problem();
        SampleSpec spec;
        spec.composition_samples = 6;
        spec.trajectories = 2;
        spec.budget = 1e-6;
        spec.seed = 11;
        const auto rep = verify_conjugacy(p, spec);
        CHECK(rep.max_HG_residual == 0.0);
        CHECK(rep.max_GH_residual == 0.0);
        // ODE error grows with e^{horizon} along the unstable direction
        CHECK(rep.max_solution_map_H < 1e-6);
        CHECK(rep.max_solution_map_G < 1e-6);
        CHECK(rep.offsets_ok);
        CHECK(rep.residuals_within_budget);
    }
    SUBCASE("planar example within the tolerance budget") {
        auto ex = planar_example(0.1);
        ConjugacySettings set;
        set.field_window = 8.0;
        set.picard_tol = 1e-4;  // the budget below tolerates a loose solver
        ConjugacyProblem p(ex.A, ex.f, ex.D, set);
        SampleSpec spec;
        spec.composition_samples = 12;
        spec.trajectories = 4;
        spec.budget = 5e-3;
        spec.seed = 2;
        const auto rep = verify_conjugacy(p, spec);
        CHECK(rep.residuals_within_budget);
        CHECK(rep.offsets_ok);
        CHECK(rep.max_HG_residual <= 5e-3);
        CHECK(rep.max_GH_residual <= 5e-3);
        CHECK(rep.max_solution_map_H <= 5e-3);
        CHECK(rep.hypotheses_ok);
        CHECK(!rep.samples.empty());
    }
    SUBCASE("closed-form oracle: pushing the stable fiber through numeric H") {
        // in-ball stable trajectory of the extended unit-square system
        auto ex = unit_ball_example(0.25);
        ConjugacySettings set;
        set.ode_tol = {1e-11, 1e-11};
        set.quad_tol = 1e-10;
        set.ode_max_step = 0.05;
        set.tail_target = 1e-9;
        ConjugacyProblem p(ex.A, ex.f, ex.D, set);
        const auto osc = trajectory_oracles(0.25);
        const auto& flow = p.kernel().flow();
        Vec x0(2);
        x0 << 1.0, 0.0;
        const Vec h0 = H_eval(p, 0.0, x0);
        // matches the closed form at the anchor
        CHECK(h0[0] == doctest::Approx(0.75).epsilon(1e-7));
        CHECK(std::abs(h0[1]) < 1e-7);
        double worst = 0.0;
        for (double t1 : {0.5, 1.0, 2.0, 3.0}) {
            Vec xt(2);
            xt << osc.x1_pos(t1), 0.0;
            const Vec lhs = H_eval(p, t1, xt);
            const Vec rhs = flow.U(t1, 0.0) * h0;
            worst = std::max(worst, (lhs - rhs).norm());
            // and against the closed form directly
            CHECK(lhs[0] == doctest::Approx(osc.y1_pos(t1)).epsilon(1e-6));
        }
        CHECK(worst <= 1e-6);
    }
}

TEST_CASE("bounded solutions on half-lines") {
    SUBCASE("zero perturbation reproduces the projected linear flow") {
        auto p = zero_problem();
        Vec xi(2);
        xi << 0.8, 0.0;
        const auto sol = solve_bounded_forward(p, 0.0, xi, 1e-10, 4.0);
        for (double t : {0.0, 1.0, 2.5, 4.0}) {
            CHECK(sol.trajectory.at(t)[0] ==
                  doctest::Approx(0.8 * std::exp(-t)).epsilon(1e-9));
            CHECK(std::abs(sol.trajectory.at(t)[1]) < 1e-12);
        }
        Vec xi2(2);
        xi2 << 0.0, 0.6;
        const auto back = solve_bounded_backward(p, 0.0, xi2, 1e-10, 4.0);
        for (double t : {0.0, -1.0, -3.0})
            CHECK(back.trajectory.at(t)[1] ==
                  doctest::Approx(0.6 * std::exp(t)).epsilon(1e-9));
    }
    SUBCASE("planar stable fiber stays bounded over [0, 8]") {
        auto ex = planar_example(0.1);
        ConjugacySettings set;
        set.field_window = 8.0;
        ConjugacyProblem p(ex.A, ex.f, ex.D, set);
        Vec xi(2);
        xi << 0.5, 0.0;
        const auto sol = solve_bounded_forward(p, 0.0, xi, 1e-8, 8.0);
        double worst = 0.0;
        for (int i = 0; i <= 160; ++i)
            worst = std::max(worst, sol.trajectory.at(0.05 * i).norm());
        CHECK(worst < 1.0);
        CHECK((p.kernel().projection(0.0) * sol.trajectory.at(0.0) - xi).norm() < 1e-8);
    }
    SUBCASE("re-integration oracle: the table solves the differential equation") {
        auto ex = planar_example(0.1);
        ConjugacySettings set;
        set.field_window = 10.0;
        set.picard_tol = 1e-9;
        set.grid_step = 0.03125;
        ConjugacyProblem p(ex.A, ex.f, ex.D, set);
        Vec xi(2);
        xi << 0.5, 0.0;
        const auto sol = solve_bounded_forward(p, 0.0, xi, 1e-10, 6.0);
        OdeOptions tight;
        tight.tol = {1e-12, 1e-12};
        tight.max_step = 0.05;
        const Trajectory re =
            integrate(p.A(), p.f(), 0.0, sol.trajectory.at(0.0), {0.0, 6.0}, tight);
        double worst = 0.0;
        for (int i = 0; i <= 120; ++i)
            worst = std::max(worst, (re.at(0.05 * i) - sol.trajectory.at(0.05 * i)).norm());
        CHECK(worst <= 1e-5);
    }
    SUBCASE("mirrored backward fiber, re-integrated") {
        auto ex = planar_example(0.1);
        ConjugacySettings set;
        set.field_window = 10.0;
        set.picard_tol = 1e-9;
        set.grid_step = 0.03125;
        ConjugacyProblem p(ex.A, ex.f, ex.D, set);
        Vec xi2(2);
        xi2 << 0.0, 0.5;
        const auto sol = solve_bounded_backward(p, 0.0, xi2, 1e-10, 6.0);
        double bounded = 0.0;
        for (int i = 0; i <= 120; ++i)
            bounded = std::max(bounded, sol.trajectory.at(-0.05 * i).norm());
        CHECK(bounded < 1.0);
        OdeOptions tight;
        tight.tol = {1e-12, 1e-12};
        tight.max_step = 0.05;
        const Trajectory re = integrate(p.A(), p.f(), 0.0, sol.trajectory.at(0.0),
                                        {-6.0, 0.0}, tight);
        double worst = 0.0;
        for (int i = 0; i <= 120; ++i)
            worst = std::max(worst, (re.at(-0.05 * i) - sol.trajectory.at(-0.05 * i)).norm());
        CHECK(worst <= 1e-5);
    }
    SUBCASE("initial data must live in the right subspace") {
        auto p = planar_problem(0.1);
        Vec bad(2);
        bad << 0.5, 0.5;
        CHECK_THROWS_AS(solve_bounded_forward(p, 0.0, bad), InvalidArgument);
        CHECK_THROWS_AS(solve_bounded_backward(p, 0.0, bad), InvalidArgument);
    }
}

TEST_CASE("decay estimates along stable fibers") {
    SUBCASE("linear case decays at the full rate, bound uses the reduced one") {
        auto p = zero_problem();
        Vec a(2), b(2);
        a << 0.9, 0.0;
        b << 0.2, 0.0;
        const auto rep = decay_check(p, 0.0, a, b, 6.0);
        CHECK(rep.passed);
        CHECK(rep.coefficient == doctest::Approx(1.0));  // theta_tilde = 0
        CHECK(rep.min_margin >= 0.0);
    }
    SUBCASE("identical data gives identically zero difference") {
        auto p = planar_problem(0.1);
        Vec a(2);
        a << 0.5, 0.0;
        const auto rep = decay_check(p, 0.0, a, a, 4.0);
        CHECK(rep.passed);
        CHECK(rep.min_margin == 0.0);
    }
    SUBCASE("planar pairs keep nonnegative margins, forward and backward") {
        auto ex = planar_example(0.1);
        ConjugacySettings set;
        set.field_window = 8.0;
        ConjugacyProblem p(ex.A, ex.f, ex.D, set);
        CHECK(p.hypotheses().K_theta_tilde == doctest::Approx(0.4).epsilon(1e-3));
        Rng rng(17);
        for (int i = 0; i < 5; ++i) {
            Vec a = Vec::Zero(2), b = Vec::Zero(2);
            a[0] = rng.uniform(-1.0, 1.0);
            b[0] = rng.uniform(-1.0, 1.0);
            const auto fwd = decay_check(p, rng.uniform(-1.0, 1.0), a, b, 6.0);
            CHECK(fwd.passed);
            Vec c = Vec::Zero(2), d = Vec::Zero(2);
            c[1] = rng.uniform(-1.0, 1.0);
            d[1] = rng.uniform(-1.0, 1.0);
            const auto bwd = decay_check_backward(p, rng.uniform(-1.0, 1.0), c, d, 6.0);
            CHECK(bwd.passed);
        }
    }
    SUBCASE("refused when the reduced-rate hypothesis fails") {
        auto ex = planar_example(0.1);
        DichotomyData d = ex.D;
        d.alpha1 = 0.05;  // theta_tilde = 2 sigma / alpha1 = 4
        ConjugacySettings set;
        set.field_window = 8.0;
        ConjugacyProblem p(ex.A, ex.f, d, set);
        Vec a = Vec::Zero(2);
        a[0] = 0.3;
        CHECK_THROWS_AS(decay_check(p, 0.0, a, a, 2.0), HypothesisViolated);
    }
}

TEST_CASE("zero-solution uniqueness probe") {
    SUBCASE("zero start stays zero") {
        auto p = planar_problem(0.1);
        Vec x0(2);
        x0 << 0.4, -0.2;
        const auto rep = zero_uniqueness_probe(p, 0.0, x0, Vec::Zero(2), 1e-8);
        CHECK(rep.converged);
        CHECK(rep.iterations == 1);
        CHECK(rep.final_norm == 0.0);
    }
    SUBCASE("perturbed start contracts geometrically to zero") {
        auto p = planar_problem(0.1);
        Vec x0(2);
        x0 << 0.4, -0.2;
        Vec z0 = Vec::Constant(2, 0.1);
        const auto rep = zero_uniqueness_probe(p, 0.0, x0, z0, 1e-8);
        CHECK(rep.converged);
        CHECK(rep.final_norm < 1e-8);
        const double k_theta = p.hypotheses().K_theta;
        for (size_t k = 0; k + 1 < rep.norms.size(); ++k) {
            if (rep.norms[k] < 1e-10) break;
            CHECK(rep.norms[k + 1] / rep.norms[k] <= k_theta + 0.05);
        }
    }
    SUBCASE("linear system collapses in one application") {
        auto p = zero_problem();
        Vec x0(2);
        x0 << 1.0, 0.5;
        const auto rep = zero_uniqueness_probe(p, 0.0, x0, Vec::Constant(2, 0.3), 1e-10);
        CHECK(rep.converged);
        CHECK(rep.iterations == 1);
    }
}
