#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "conjlab/errors.hpp"
#include "conjlab/gronwall.hpp"
#include "conjlab/rng.hpp"

using namespace conjlab;

namespace {

IneqInstance base_instance() {
    IneqInstance inst;
    inst.t0 = 0.0;
    inst.s = 10.0;
    inst.c = 1.0;
    inst.c1 = 1.0;
    inst.c2 = 1.0;
    inst.alpha = 1.0;
    inst.alpha1 = 1.0;  // adjusted per test
    inst.b = ScalarModulus::constant(0.0);
    return inst;
}

PiecewiseLinear tabulate(const IneqInstance& inst, const std::function<double(double)>& f,
                         int n = 801) {
    std::vector<double> ts, vs;
    for (int i = 0; i < n; ++i) {
        const double t = inst.t0 + (inst.s - inst.t0) * i / (n - 1);
        ts.push_back(t);
        vs.push_back(f(t));
    }
    return PiecewiseLinear(ts, vs);
}

IneqInstance random_instance(Rng& rng, double theta_target) {
    IneqInstance inst;
    inst.t0 = 0.0;
    inst.s = rng.uniform(3.0, 8.0);
    inst.c = rng.uniform(0.1, 3.0);
    inst.c1 = rng.uniform(0.1, 3.0);
    inst.c2 = rng.uniform(0.1, 3.0);
    inst.alpha = rng.uniform(0.5, 2.0);
    inst.alpha1 = inst.alpha * rng.uniform(0.2, 0.8);
    if (rng.next_double() < 0.5) {
        inst.b = ScalarModulus::constant(1.0);
    } else {
        std::vector<double> ts, vs;
        for (int k = 0; k < 17; ++k) {
            ts.push_back(inst.t0 + (inst.s - inst.t0) * k / 16.0);
            vs.push_back(rng.uniform(0.1, 1.0));
        }
        inst.b = ScalarModulus::tabulated(ts, vs);
    }
    inst.b = inst.b.scaled(theta_target / theta1(inst).value);
    return inst;
}

}  // namespace

TEST_CASE("windowed kernel operator") {
    auto inst = base_instance();
    inst.alpha1 = 0.5;
    SUBCASE("zero modulus gives zero") {
        CHECK(l_alpha1_windowed(inst, 4.0) == 0.0);
    }
    SUBCASE("centered constant b over a long window approaches (c1+c2) b / alpha1") {
        auto wide = inst;
        wide.s = 140.0;
        wide.b = ScalarModulus::constant(0.2);
        wide.c1 = 1.3;
        wide.c2 = 0.7;
        const double expect = (wide.c1 + wide.c2) * 0.2 / wide.alpha1;
        CHECK(l_alpha1_windowed(wide, 70.0) == doctest::Approx(expect).epsilon(1e-8));
    }
    SUBCASE("antiderivative case: window [0,10], t = 5") {
        auto exact = inst;
        exact.alpha1 = 1.0 - 1e-12;  // alpha1 must stay below alpha
        exact.b = ScalarModulus::constant(1.0);
        const double v = l_alpha1_windowed(exact, 5.0);
        CHECK(v == doctest::Approx(2.0 * (1.0 - std::exp(-5.0))).epsilon(1e-9));
    }
    SUBCASE("evaluation point must lie inside the open window") {
        CHECK_THROWS_AS(l_alpha1_windowed(inst, -1.0), InvalidArgument);
        CHECK_THROWS_AS(l_alpha1_windowed(inst, 10.0), InvalidArgument);
    }
}

TEST_CASE("theta1 over the window grid") {
    auto inst = base_instance();
    inst.alpha1 = 0.5;
    SUBCASE("zero modulus") {
        const auto th = theta1(inst);
        CHECK(th.value == 0.0);
        CHECK(th.contraction);
    }
    SUBCASE("interior maximum of the constant case") {
        auto c = inst;
        c.b = ScalarModulus::constant(0.1);
        const auto th = theta1(c);
        CHECK(th.value <= 2.0 * 0.1 / 0.5);
        CHECK(th.argmax_t > c.t0);
        CHECK(th.argmax_t < c.s);
        CHECK(th.value == doctest::Approx(l_alpha1_windowed(c, th.argmax_t)).epsilon(1e-6));
    }
    SUBCASE("scaling b to a target theta1 is exact (operator linearity)") {
        Rng rng(17);
        for (int i = 0; i < 5; ++i) {
            auto r = random_instance(rng, 0.5);
            CHECK(theta1(r).value == doctest::Approx(0.5).epsilon(1e-6));
        }
    }
}

TEST_CASE("first dichotomic inequality certificate") {
    SUBCASE("pure decay with zero modulus passes") {
        auto inst = base_instance();
        inst.alpha1 = 0.4;
        inst.u = tabulate(inst, [&](double t) { return std::exp(-inst.alpha * t); },
                          inst.grid_points);
        const auto cert = check_first_inequality(inst, 1e-9);
        CHECK(cert.hypothesis_ok);
        CHECK(cert.verdict == CertificateVerdict::Pass);
        CHECK(cert.theta1 == 0.0);
        CHECK(cert.bound_margin >= 0.0);
    }
    SUBCASE("worst-case fixed point sits inside the decay bound") {
        auto inst = base_instance();
        inst.alpha1 = 0.5;
        inst.b = ScalarModulus::constant(0.1);  // theta1 ~ 0.36 < 1
        auto wc = worst_case_u(inst, 1e-12);
        inst.u = wc.u;
        const auto cert = check_first_inequality(inst, 1e-6);
        CHECK(cert.hypothesis_ok);
        CHECK(cert.verdict == CertificateVerdict::Pass);
        CHECK(cert.bound_margin >= 0.0);
    }
    SUBCASE("inflating one sample breaks the hypothesis, not the bound") {
        auto inst = base_instance();
        inst.alpha1 = 0.5;
        inst.b = ScalarModulus::constant(0.1);
        auto wc = worst_case_u(inst, 1e-12);
        const double th = theta1(inst).value;
        std::vector<double> vals = wc.u.values();
        const size_t mid = vals.size() / 2;
        vals[mid] *= std::exp(inst.alpha2()) / (1.0 - th);
        inst.u = PiecewiseLinear(wc.u.times(), vals);
        const auto cert = check_first_inequality(inst, 1e-6);
        CHECK_FALSE(cert.hypothesis_ok);
        CHECK(cert.verdict == CertificateVerdict::HypothesisNotSatisfied);
    }
}

TEST_CASE("second dichotomic inequality certificate") {
    SUBCASE("pure decay toward s passes") {
        auto inst = base_instance();
        inst.alpha1 = 0.4;
        inst.u = tabulate(
            inst, [&](double t) { return std::exp(-inst.alpha * (inst.s - t)); },
            inst.grid_points);
        const auto cert = check_second_inequality(inst, 1e-9);
        CHECK(cert.hypothesis_ok);
        CHECK(cert.verdict == CertificateVerdict::Pass);
    }
    SUBCASE("mirrored worst case passes") {
        auto inst = base_instance();
        inst.alpha1 = 0.5;
        inst.b = ScalarModulus::constant(0.1);
        auto wc = worst_case_u(inst, 1e-12, /*second=*/true);
        inst.u = wc.u;
        const auto cert = check_second_inequality(inst, 1e-6);
        CHECK(cert.hypothesis_ok);
        CHECK(cert.verdict == CertificateVerdict::Pass);
        CHECK(cert.bound_margin >= 0.0);
    }
    SUBCASE("mirrored inflated sample fails the hypothesis") {
        auto inst = base_instance();
        inst.alpha1 = 0.5;
        inst.b = ScalarModulus::constant(0.1);
        auto wc = worst_case_u(inst, 1e-12, true);
        std::vector<double> vals = wc.u.values();
        vals[vals.size() / 2] *= 3.0 * std::exp(inst.alpha2());
        inst.u = PiecewiseLinear(wc.u.times(), vals);
        const auto cert = check_second_inequality(inst, 1e-6);
        CHECK_FALSE(cert.hypothesis_ok);
        CHECK(cert.verdict == CertificateVerdict::HypothesisNotSatisfied);
    }
}

TEST_CASE("worst-case fixed point") {
    SUBCASE("zero modulus converges to the bare decay term in one sweep") {
        auto inst = base_instance();
        inst.alpha1 = 0.5;
        auto wc = worst_case_u(inst, 1e-12);
        CHECK(wc.iterations == 1);
        const auto& ts = wc.u.times();
        for (size_t k : {size_t(0), ts.size() / 3, ts.size() / 2, ts.size() - 1})
            CHECK(wc.u.values()[k] == doctest::Approx(std::exp(-ts[k])).epsilon(1e-9));
    }
    SUBCASE("geometric convergence bounded by the contraction count") {
        auto inst = base_instance();
        inst.alpha1 = 0.5;
        inst.s = 8.0;
        inst.b = ScalarModulus::constant(1.0);
        inst.b = inst.b.scaled(0.5 / theta1(inst).value);  // theta1 = 0.5
        const double tol = 1e-10;
        auto wc = worst_case_u(inst, tol);
        const double bound = std::log(tol / inst.c) / std::log(0.5) + 1.0;
        CHECK(wc.iterations <= static_cast<int>(std::ceil(bound)) + 1);
        CHECK(wc.final_change < tol);
    }
    SUBCASE("fixed point satisfies the inequality with near equality") {
        auto inst = base_instance();
        inst.alpha1 = 0.6;
        inst.b = ScalarModulus::constant(0.15);
        auto wc = worst_case_u(inst, 1e-12);
        inst.u = wc.u;
        const auto cert = check_first_inequality(inst, 1e-8);
        CHECK(cert.hypothesis_ok);
        CHECK(cert.verdict == CertificateVerdict::Pass);
    }
}

TEST_CASE("monotonicity and scaling properties") {
    Rng rng(23);
    SUBCASE("pointwise larger b never decreases theta1 or the fixed point") {
        for (int i = 0; i < 4; ++i) {
            auto inst = random_instance(rng, rng.uniform(0.2, 0.6));
            auto bigger = inst;
            bigger.b = inst.b.scaled(1.15);
            CHECK(theta1(bigger).value >= theta1(inst).value);
            auto wa = worst_case_u(inst, 1e-11);
            auto wb = worst_case_u(bigger, 1e-11);
            for (size_t k = 0; k < wa.u.values().size(); ++k)
                CHECK(wb.u.values()[k] >= wa.u.values()[k] - 1e-9);
        }
    }
    SUBCASE("fixed point is exactly linear in c") {
        for (int i = 0; i < 4; ++i) {
            auto inst = random_instance(rng, 0.4);
            const double tol = 1e-12 * inst.c;
            auto base = worst_case_u(inst, tol);
            auto scaled = inst;
            scaled.c = 3.0 * inst.c;
            auto tripled = worst_case_u(scaled, 3.0 * tol);
            CHECK(tripled.iterations == base.iterations);
            for (size_t k = 0; k < base.u.values().size(); ++k) {
                const double expect = 3.0 * base.u.values()[k];
                CHECK(std::abs(tripled.u.values()[k] - expect) <=
                      1e-10 * std::max(1.0, expect));
            }
        }
    }
    SUBCASE("decay bounds hold across a randomized admissible family") {
        for (int i = 0; i < 12; ++i) {
            auto inst = random_instance(rng, rng.uniform(0.1, 0.9));
            auto wc1 = worst_case_u(inst, 1e-11 * inst.c);
            auto first = inst;
            first.u = wc1.u;
            CHECK(check_first_inequality(first, 1e-6).verdict ==
                  CertificateVerdict::Pass);
            auto wc2 = worst_case_u(inst, 1e-11 * inst.c, true);
            auto second = inst;
            second.u = wc2.u;
            CHECK(check_second_inequality(second, 1e-6).verdict ==
                  CertificateVerdict::Pass);
        }
    }
}

TEST_CASE("contraction violations are typed errors") {
    auto inst = base_instance();
    inst.alpha1 = 0.5;
    inst.b = ScalarModulus::constant(2.0);  // theta1 far above 1
    inst.u = tabulate(inst, [](double) { return 1.0; });
    CHECK_THROWS_AS(check_first_inequality(inst, 1e-6), ContractionViolated);
    CHECK_THROWS_AS(worst_case_u(inst, 1e-8), ContractionViolated);
}

TEST_CASE("instance validation") {
    auto inst = base_instance();
    inst.alpha1 = 1.5;  // above alpha
    CHECK_THROWS_AS(theta1(inst), InvalidArgument);
    auto neg = base_instance();
    neg.alpha1 = 0.5;
    neg.c = -1.0;
    CHECK_THROWS_AS(theta1(neg), InvalidArgument);
}
