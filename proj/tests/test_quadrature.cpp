#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "halfline/errors.hpp"
#include "halfline/quadrature.hpp"

using namespace halfline;

TEST_CASE("basic improper integrals") {
    const auto q1 = quad_improper([](double u) { return 1.0 / (u * u); }, 1.0, kInf, {});
    CHECK(q1.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(q1.abs_error_estimate >= 0.0);
    CHECK(q1.evaluations >= 1);

    QuadOptions sing;
    sing.lower_singularity = 0.5;
    const auto q2 = quad_improper([](double u) { return 1.0 / std::sqrt(u); }, 0.0, 1.0, sing);
    CHECK(q2.value == doctest::Approx(2.0).epsilon(1e-10));

    // log singularity folded from infinity; exact value 0
    QuadOptions o3;
    o3.split_points = {2.0};
    const auto q3 =
        quad_improper([](double u) { return std::log(u - 1.0) / (u * u); }, 1.0, kInf, o3);
    CHECK(std::fabs(q3.value) < 1e-8);
}

TEST_CASE("exponential decay through the fold") {
    const auto q = quad_improper([](double u) { return std::exp(-u); }, 0.0, kInf, {});
    CHECK(q.value == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("declared decay exponent removes the fold singularity") {
    // integrand ~ u^{-1.2} at infinity
    QuadOptions o;
    o.decay_at_infinity = 1.2;
    const auto q = quad_improper([](double u) { return std::pow(u, -1.2); }, 1.0, kInf, o);
    CHECK(q.value == doctest::Approx(5.0).epsilon(1e-10));
}

TEST_CASE("upper endpoint singularity") {
    QuadOptions o;
    o.upper_singularity = 0.5;
    const auto q =
        quad_improper([](double u) { return 1.0 / std::sqrt(1.0 - u); }, 0.0, 1.0, o);
    CHECK(q.value == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("both endpoints singular") {
    // int_0^1 u^{-1/2}(1-u)^{-1/2} = pi
    QuadOptions o;
    o.lower_singularity = 0.5;
    o.upper_singularity = 0.5;
    const auto q = quad_improper(
        [](double u) { return 1.0 / std::sqrt(u * (1.0 - u)); }, 0.0, 1.0, o);
    CHECK(q.value == doctest::Approx(M_PI).epsilon(1e-10));
}

TEST_CASE("split points isolate kinks") {
    const auto q = quad_improper(
        [](double u) { return std::fabs(u - 0.3); }, 0.0, 1.0,
        {.abs_tol = 1e-12, .max_evals = 100000, .split_points = {0.3}});
    // int = 0.3^2/2 + 0.7^2/2
    CHECK(q.value == doctest::Approx(0.5 * (0.09 + 0.49)).epsilon(1e-12));
}

TEST_CASE("budget exhaustion raises numeric_failure with the best estimate") {
    QuadOptions tight;
    tight.abs_tol = 1e-15;
    tight.max_evals = 60;
    bool thrown = false;
    try {
        quad_improper([](double u) { return std::sin(50.0 * u) * std::log(u); }, 0.0, 1.0,
                      tight);
    } catch (const numeric_failure& e) {
        thrown = true;
        CHECK(std::isfinite(e.best_estimate()));
        CHECK(e.error_bound() >= 0.0);
    }
    CHECK(thrown);
}

TEST_CASE("degenerate and invalid limits") {
    CHECK(quad_improper([](double) { return 1.0; }, 2.0, 2.0, {}).value == 0.0);
    CHECK_THROWS_AS(quad_improper([](double) { return 1.0; }, 3.0, 1.0, {}),
                    std::domain_error);
    QuadOptions bad;
    bad.lower_singularity = 1.5;  // non-integrable
    CHECK_THROWS_AS(quad_improper([](double u) { return u; }, 0.0, 1.0, bad),
                    std::domain_error);
}

TEST_CASE("reported error bounds hold on analytic cases") {
    struct Case {
        double (*f)(double);
        double lo, hi, exact;
    } cases[] = {
        {[](double u) { return std::exp(-u * u); }, 0.0, 5.0, 0.8862269254527580137},
        {[](double u) { return 1.0 / (1.0 + u * u); }, 0.0, 1.0, M_PI / 4.0},
    };
    for (const auto& c : cases) {
        const auto q = quad_improper(c.f, c.lo, c.hi, {});
        CHECK(std::fabs(q.value - c.exact) <= std::max(q.abs_error_estimate, 1e-13));
    }
}
