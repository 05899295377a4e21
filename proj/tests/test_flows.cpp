#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "conjlab/errors.hpp"
#include "conjlab/examples.hpp"
#include "conjlab/flows.hpp"
#include "conjlab/rng.hpp"

using namespace conjlab;

namespace {

Mat diag2(double a, double b) {
    Mat m = Mat::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

}  // namespace

TEST_CASE("zero field gives a constant trajectory") {
    auto A = MatrixField::constant(Mat::Zero(2, 2));
    auto f = NonlinearField::zero(2);
    Vec v(2);
    v << 0.3, -1.7;
    Trajectory tr = integrate(A, f, 0.0, v, {-2.0, 2.0});
    for (double t : {-2.0, -0.5, 0.0, 1.3, 2.0}) {
        CHECK((tr.at(t) - v).norm() == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("scalar x' = (-1+eps) x matches the closed form") {
    const double eps = 0.25;
    Mat a(1, 1);
    a << -1.0 + eps;
    auto A = MatrixField::constant(a);
    Vec x0(1);
    x0 << 1.0;
    OdeOptions opt;
    opt.tol = {1e-12, 1e-12};
    opt.max_step = 0.05;
    Trajectory tr = integrate(A, NonlinearField::zero(1), 0.0, x0, {0.0, 5.0}, opt);
    for (double t : {1.0, 2.0, 5.0}) {
        CHECK(tr.at(t)[0] == doctest::Approx(std::exp((-1.0 + eps) * t)).epsilon(1e-9));
    }
}

TEST_CASE("planar example: trajectory from stable data stays bounded forward") {
    auto ex = planar_example(0.1);
    Vec x0(2);
    x0 << 0.5, 0.0;
    Trajectory tr = integrate(ex.A, ex.f, 0.0, x0, {0.0, 3.0});
    double worst = 0.0;
    for (int i = 0; i <= 60; ++i) worst = std::max(worst, tr.at(0.05 * i).norm());
    CHECK(worst < 2.0);
}

TEST_CASE("evolution operator of diag(-1,1) is the pair of scalar exponentials") {
    auto A = MatrixField::constant(diag2(-1.0, 1.0));
    const Mat u = evolution_operator(A, 1.7, -0.4);
    CHECK(u(0, 0) == doctest::Approx(std::exp(-2.1)).epsilon(1e-12));
    CHECK(u(1, 1) == doctest::Approx(std::exp(2.1)).epsilon(1e-12));
    CHECK(u(0, 1) == 0.0);
    const Mat id = evolution_operator(A, 0.3, 0.3);
    CHECK((id - Mat::Identity(2, 2)).norm() == 0.0);
}

TEST_CASE("cocycle identity U(t,s)U(s,r) = U(t,r)") {
    Mat a(2, 2);
    a << -1.0, 0.7, 0.2, 1.1;  // constant, non-diagonal: matrix-exponential path
    auto A = MatrixField::constant(a);
    auto shear = MatrixField::builtin("shear", {{"amp", 0.5}, {"omega", 2.0}});
    LinearFlow fa(A), fs(shear);
    Rng rng(42);
    for (int i = 0; i < 12; ++i) {
        const double t = rng.uniform(-3.0, 3.0);
        const double s = rng.uniform(-3.0, 3.0);
        const double r = rng.uniform(-3.0, 3.0);
        CHECK((fa.U(t, s) * fa.U(s, r) - fa.U(t, r)).norm() < 1e-9);
        CHECK((fs.U(t, s) * fs.U(s, r) - fs.U(t, r)).norm() < 1e-9);
    }
}

TEST_CASE("tabulated diagonal evolution matches the antiderivative oracle") {
    // A(t) = diag(-1 - 0.1 sin t, 1) sampled densely, then interpolated
    std::vector<double> times;
    std::vector<double> a0, a1;
    const double h = 2e-4;
    for (double t = -4.0; t <= 4.0 + 0.5 * h; t += h) {
        times.push_back(t);
        a0.push_back(-1.0 - 0.1 * std::sin(t));
        a1.push_back(1.0);
    }
    auto A = MatrixField::diagonal_table(times, {a0, a1});
    LinearFlow flow(A);
    for (auto [t, s] : std::vector<std::pair<double, double>>{
             {2.0, -1.0}, {0.5, 0.0}, {-3.0, 3.0}, {3.5, 1.25}}) {
        const double exact = std::exp(-(t - s) + 0.1 * (std::cos(t) - std::cos(s)));
        CHECK(flow.U(t, s)(0, 0) == doctest::Approx(exact).epsilon(1e-8));
        CHECK(flow.U(t, s)(1, 1) == doctest::Approx(std::exp(t - s)).epsilon(1e-8));
    }
}

TEST_CASE("radial extension freezes boundary values") {
    SUBCASE("1-d field eps*x clamps to eps*sign(x)") {
        const double eps = 0.25;
        auto inner = NonlinearField::custom(
            1, [eps](double, const Vec& x) { return Vec(eps * x); },
            ScalarModulus::constant(eps), ScalarModulus::constant(eps), "lin", 1.0);
        auto ext = radial_extend(inner, 1.0);
        Vec x(1);
        x << 3.7;
        CHECK(ext.at(0.0, x)[0] == doctest::Approx(eps).epsilon(1e-14));
        x << -2.2;
        CHECK(ext.at(0.0, x)[0] == doctest::Approx(-eps).epsilon(1e-14));
        x << 0.4;
        CHECK(ext.at(0.0, x)[0] == doctest::Approx(eps * 0.4).epsilon(1e-14));
    }
    SUBCASE("extension of the zero field is zero") {
        auto ext = radial_extend(NonlinearField::zero(2), 0.5);
        Rng rng(3);
        for (int i = 0; i < 20; ++i)
            CHECK(ext.at(rng.uniform(-1, 1), rng.in_ball(2, 4.0)).norm() == 0.0);
    }
    SUBCASE("Lipschitz spot-check across the boundary with modulus 2 r") {
        auto inner = NonlinearField::builtin("unit_ball_local", {{"epsilon", 0.25}});
        auto ext = radial_extend(inner, 1.0);
        const double two_r = ext.r().at(0.0);
        CHECK(two_r == doctest::Approx(2.0 * inner.r().at(0.0)));
        Rng rng(7);
        for (int i = 0; i < 1000; ++i) {
            const Vec x = rng.in_ball(2, 2.0);
            const Vec y = rng.in_ball(2, 2.0);
            const double d = (x - y).norm();
            if (d < 1e-12) continue;
            CHECK((ext.at(0.0, x) - ext.at(0.0, y)).norm() <= two_r * d * (1 + 1e-9));
        }
    }
    SUBCASE("rejects bad arguments") {
        CHECK_THROWS_AS(radial_extend(NonlinearField::zero(2), 0.0), InvalidArgument);
        auto shifted = NonlinearField::custom(
            1, [](double, const Vec& x) { return Vec(x.array() + 1.0); },
            ScalarModulus::constant(2.0), ScalarModulus::constant(1.0), "aff", 1.0);
        CHECK_THROWS_AS(radial_extend(shifted, 1.0), InvalidArgument);
    }
}

TEST_CASE("integrator converges at its nominal order under step halving") {
    auto ex = planar_example(0.1);
    Vec x0(2);
    x0 << 0.8, -0.3;
    OdeOptions tight;
    tight.tol = {1e-13, 1e-13};
    tight.max_step = 0.02;
    const Vec ref = integrate(ex.A, ex.f, 0.0, x0, {0.0, 2.0}, tight).at(2.0);

    auto end_error = [&](double h) {
        OdeOptions fixed;
        fixed.fixed_step = true;
        fixed.max_step = h;
        return (integrate(ex.A, ex.f, 0.0, x0, {0.0, 2.0}, fixed).at(2.0) - ref).norm();
    };
    const double e1 = end_error(0.1);
    const double e2 = end_error(0.05);
    const double order = std::log2(e1 / e2);
    CHECK(order > 4.0);
    CHECK(order < 6.5);
}

TEST_CASE("restarting mid-span agrees with one integration") {
    auto ex = planar_example(0.1);
    Vec x0(2);
    x0 << 1.1, 0.2;
    OdeOptions opt;
    opt.tol = {1e-10, 1e-10};
    Trajectory full = integrate(ex.A, ex.f, 0.0, x0, {0.0, 3.0}, opt);
    Trajectory first = integrate(ex.A, ex.f, 0.0, x0, {0.0, 1.5}, opt);
    Trajectory second = integrate(ex.A, ex.f, 1.5, first.at(1.5), {1.5, 3.0}, opt);
    CHECK((second.at(3.0) - full.at(3.0)).norm() < 10.0 * 1e-9);
}

TEST_CASE("builtin fields respect their declared moduli") {
    Rng rng(11);
    auto check_field = [&](const NonlinearField& f, double radius) {
        for (int i = 0; i < 400; ++i) {
            const double t = rng.uniform(-5.0, 5.0);
            const Vec x = rng.in_ball(f.dim(), radius);
            const Vec y = rng.in_ball(f.dim(), radius);
            CHECK(f.at(t, x).norm() <= f.mu().at(t) * (1 + 1e-9) + 1e-15);
            const double d = (x - y).norm();
            if (d > 1e-12)
                CHECK((f.at(t, x) - f.at(t, y)).norm() <= f.r().at(t) * d * (1 + 1e-9));
        }
    };
    check_field(NonlinearField::builtin("planar_sine", {{"sigma", 0.1}}), 6.0);
    check_field(NonlinearField::builtin("unit_ball_local", {{"epsilon", 0.25}}), 1.0);
    check_field(NonlinearField::builtin("sawtooth_sine", {{"c", 1.0}}), 6.0);
    // the scalar blend field's bound modulus covers its declared box radius
    check_field(NonlinearField::builtin(
                    "scalar_time", {{"epsilon", 0.1}, {"delta", 0.5}, {"box", 2.0}}),
                2.0);
}

TEST_CASE("trajectory dense output reproduces stored nodes") {
    auto ex = planar_example(0.1);
    Vec x0(2);
    x0 << 0.4, 0.6;
    Trajectory tr = integrate(ex.A, ex.f, 0.0, x0, {-1.0, 1.0});
    const auto& ts = tr.times();
    for (size_t i = 1; i + 1 < ts.size(); ++i)
        CHECK((tr.at(ts[i]) - tr.states()[i]).norm() == 0.0);
    for (size_t i = 1; i < ts.size(); ++i) CHECK(ts[i] > ts[i - 1]);
}

TEST_CASE("integration failure paths") {
    SUBCASE("span must contain t0") {
        auto A = MatrixField::constant(Mat::Identity(1, 1));
        Vec x0 = Vec::Ones(1);
        CHECK_THROWS_AS(integrate(A, NonlinearField::zero(1), 5.0, x0, {0.0, 1.0}),
                        InvalidArgument);
    }
    SUBCASE("non-finite state reports numeric overflow with the failure time") {
        Mat a(1, 1);
        a << 5.0;
        auto A = MatrixField::constant(a);
        Vec x0 = Vec::Ones(1);
        CHECK_THROWS_AS(integrate(A, NonlinearField::zero(1), 0.0, x0, {0.0, 400.0}),
                        NumericOverflow);
    }
    SUBCASE("oscillation below the time granularity underflows the step size") {
        // resolving sin(1e6 t) needs steps far below the representable
        // increment at t ~ 1e12
        auto rhs = [](double t, const Vec&) {
            Vec d(1);
            d[0] = std::sin(1e6 * t);
            return d;
        };
        Vec x0 = Vec::Zero(1);
        OdeOptions opt;
        opt.tol = {1e-9, 1e-9};
        try {
            integrate_ode(rhs, 1e12, x0, 1e12 + 1.0, opt);
            FAIL("expected IntegrationFailure");
        } catch (const IntegrationFailure& e) {
            CHECK(e.time >= 1e12);
            CHECK(e.time <= 1e12 + 1.0);
        }
    }
    SUBCASE("integrable singularities are crossed, not fatal") {
        auto rhs = [](double t, const Vec&) {
            Vec d(1);
            d[0] = 1.0 / std::sqrt(std::abs(1.0 - t));
            return d;
        };
        Vec x0 = Vec::Zero(1);
        Trajectory tr = integrate_ode(rhs, 0.0, x0, 2.0);
        CHECK(tr.at(2.0)[0] == doctest::Approx(4.0).epsilon(1e-4));
    }
    SUBCASE("step budget exhaustion names the time") {
        auto ex = planar_example(0.1);
        Vec x0(2);
        x0 << 1.0, 1.0;
        OdeOptions opt;
        opt.max_steps = 20;
        CHECK_THROWS_AS(integrate(ex.A, ex.f, 0.0, x0, {0.0, 50.0}, opt),
                        IntegrationFailure);
    }
}
