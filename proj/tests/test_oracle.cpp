#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dilaton/oracle.hpp"
#include "dilaton/validation.hpp"

using namespace dilaton;
using namespace dilaton::oracle;

TEST_CASE("adaptive integration") {
    QuadratureConfig cfg;

    SUBCASE("zero integrand") {
        const QuadResult r = integrate_adaptive([](double) { return 0.0; }, 0.0,
                                                3.0, cfg);
        CHECK(r.value == 0.0);
        CHECK(r.error_estimate == 0.0);
        CHECK(r.converged);
    }

    SUBCASE("polynomials up to cubic are exact") {
        const QuadResult r = integrate_adaptive(
            [](double x) { return 3.0 * x * x - 2.0 * x + 1.0; }, -1.0, 2.0, cfg);
        // antiderivative x^3 - x^2 + x
        CHECK(r.value == doctest::Approx(9.0).epsilon(1e-14));
    }

    SUBCASE("oscillatory integrand with known value") {
        const QuadResult r = integrate_adaptive(
            [](double x) { return std::cos(25.0 * x); }, 0.0, 1.0, cfg);
        CHECK(r.converged);
        CHECK(r.value == doctest::Approx(std::sin(25.0) / 25.0).epsilon(1e-10));
        CHECK(std::abs(r.value - std::sin(25.0) / 25.0) <=
              10.0 * r.error_estimate + 1e-16);
    }

    SUBCASE("subdivision cap reports non-convergence with best estimate") {
        QuadratureConfig tight;
        tight.abs_tol = 1e-300;
        tight.rel_tol = 1e-300;
        tight.max_subdivisions = 8;
        const QuadResult r = integrate_adaptive(
            [](double x) { return std::cos(40.0 * x * x); }, 0.0, 2.0, tight);
        CHECK_FALSE(r.converged);
        CHECK(std::isfinite(r.value));
    }

    SUBCASE("deterministic") {
        const auto f = [](double x) { return std::sin(3.0 * x) / (1.0 + x * x); };
        const QuadResult a = integrate_adaptive(f, 0.0, 7.0, cfg);
        const QuadResult b = integrate_adaptive(f, 0.0, 7.0, cfg);
        CHECK(a.value == b.value);
        CHECK(a.error_estimate == b.error_estimate);
        CHECK(a.subdivisions == b.subdivisions);
    }
}

TEST_CASE("quad_term_phase") {
    const PhysicalContext ctx = PhysicalContext::si();
    geometry::Species s;
    s.m = 1.44316060e-25;
    s.beta = 3e-7;
    const InterferometerSpec spec =
        geometry::mach_zehnder(0.4, 1.2e7, s, 0.05, -0.1, DilatonParams{}, ctx);
    QuadratureConfig cfg;

    SUBCASE("linear dilaton term within tolerance of the closed value") {
        const QuadResult r =
            quad_term_phase(spec, engine::PerturbationTerm::dilaton_linear, cfg);
        CHECK(r.converged);
        const double expected = -s.beta * 1.2e7 * ctx.g * 0.4 * 0.4;
        CHECK(r.value == doctest::Approx(expected).epsilon(1e-10));
    }

    SUBCASE("delta-function kinds are rejected") {
        CHECK_THROWS_AS(
            quad_term_phase(spec, engine::PerturbationTerm::wave_vector_mod, cfg),
            physics_error);
        CHECK_THROWS_AS(quad_term_phase(spec, engine::PerturbationTerm::fsl, cfg),
                        physics_error);
    }
}

TEST_CASE("phi_sa_numeric") {
    SUBCASE("zero coupling") {
        forms::DarkMatterPair pair = validation::draw_dm_pair(1, 0);
        pair.rho0 = 0.0;
        CHECK(phi_sa_numeric(pair, 64) == 0.0);
    }

    SUBCASE("matches the closed amplitude and is sample-converged") {
        const forms::DarkMatterPair pair = validation::draw_dm_pair(1, 3);
        const double closed = forms::dm_signal_amplitude(pair);
        const double n1 = phi_sa_numeric(pair, 10000);
        CHECK(relative_deviation(n1, closed, 1e-300) <= 1e-6);
        const double n2 = phi_sa_numeric(pair, 20000);
        CHECK(relative_deviation(n1, n2, 1e-300) <= 1e-12);
    }

    CHECK_THROWS_AS(phi_sa_numeric(validation::draw_dm_pair(1, 0), 8),
                    physics_error);
}

TEST_CASE("finite difference gradient") {
    SUBCASE("constant field") {
        const auto grad = finite_difference_gradient(
            [](double, double, double, double) { return 42.0; },
            {0.1, 0.2, 0.3, 0.4}, 1e-3);
        for (double gi : grad) CHECK(gi == 0.0);
    }

    SUBCASE("linear field is exact") {
        const auto grad = finite_difference_gradient(
            [](double a, double b, double c, double d) {
                return 2.0 * a - 3.0 * b + 0.5 * c + 7.0 * d;
            },
            {1.0, -2.0, 0.5, 3.0}, 1e-2);
        CHECK(grad[0] == doctest::Approx(2.0).epsilon(1e-11));
        CHECK(grad[1] == doctest::Approx(-3.0).epsilon(1e-11));
        CHECK(grad[2] == doctest::Approx(0.5).epsilon(1e-11));
        CHECK(grad[3] == doctest::Approx(7.0).epsilon(1e-11));
    }

    SUBCASE("second-order convergence on a transcendental field") {
        const auto f = [](double a, double b, double c, double d) {
            return std::sin(a) * std::exp(0.3 * b) + std::cos(2.0 * c) * d;
        };
        const std::array<double, 4> x{0.3, 0.7, -0.4, 1.1};
        const double exact = std::cos(x[0]) * std::exp(0.3 * x[1]);
        const double e1 =
            std::abs(finite_difference_gradient(f, x, 0.1, false)[0] - exact);
        const double e2 =
            std::abs(finite_difference_gradient(f, x, 0.05, false)[0] - exact);
        CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
    }
}
