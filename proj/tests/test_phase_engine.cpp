#include <doctest.h>

#include <cmath>
#include <random>

#include "dilaton/closed_forms.hpp"
#include "dilaton/oracle.hpp"
#include "dilaton/phase_engine.hpp"
#include "dilaton/validation.hpp"

using namespace dilaton;
using namespace dilaton::engine;

namespace {

geometry::Species rubidium(double beta = 0.0, double rho0 = 0.0) {
    geometry::Species s;
    s.m = 1.44316060e-25;
    s.beta = beta;
    s.rho0 = rho0;
    return s;
}

InterferometerSpec basic_mz(double T, double k, const PhysicalContext& ctx,
                            double beta = 0.0, double z0 = 0.0, double v0 = 0.0) {
    return geometry::mach_zehnder(T, k, rubidium(beta), z0, v0, DilatonParams{},
                                  ctx);
}

}  // namespace

TEST_CASE("phi0") {
    SUBCASE("vanishes without gravity") {
        const PhysicalContext flat = PhysicalContext::si(0.0);
        const InterferometerSpec spec = basic_mz(0.5, 1.6e7, flat, 0, 0.3, -0.2);
        const double scale =
            std::abs(1.6e7) * geometry::characteristic_scales(spec).z;
        CHECK(std::abs(phi0(spec)) <= 1e-12 * scale);
    }

    SUBCASE("kick sum equals -k g T^2") {
        std::mt19937_64 rng(41);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < 10; ++i) {
            const double T = 0.05 + u(rng);
            const double k = (u(rng) < 0.5 ? -1 : 1) * (1e6 + 2e7 * u(rng));
            const PhysicalContext ctx = PhysicalContext::si(1.0 + 9.0 * u(rng));
            const InterferometerSpec spec =
                basic_mz(T, k, ctx, 0.0, u(rng) - 0.5, u(rng) - 0.5);
            const double expected = -k * ctx.g * T * T;
            CHECK(phi0(spec) == doctest::Approx(expected).epsilon(1e-10));
        }
    }

    SUBCASE("laser phases enter as phi1 - 2 phi2 + phi3") {
        const PhysicalContext ctx = PhysicalContext::si();
        InterferometerSpec spec = basic_mz(0.5, 1.6e7, ctx);
        const double base = phi0(spec);
        spec.pulses[0].laser_phase = 0.25;
        spec.pulses[1].laser_phase = 0.1;
        spec.pulses[2].laser_phase = -0.4;
        // Compare the difference: the laser part is tiny next to -kgT^2.
        CHECK(phi0(spec) - base ==
              doctest::Approx(0.25 - 2 * 0.1 - 0.4).epsilon(1e-6));
    }

    SUBCASE("requires closure") {
        const PhysicalContext ctx = PhysicalContext::si();
        InterferometerSpec spec = basic_mz(0.5, 1.6e7, ctx);
        spec.pulses[1].kick_upper *= 0.9;
        CHECK_THROWS_AS(phi0(spec), physics_error);
    }
}

TEST_CASE("dilaton_linear term") {
    const PhysicalContext ctx = PhysicalContext::si();

    SUBCASE("equals -beta k g T^2 on the Mach-Zehnder") {
        std::mt19937_64 rng(43);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < 10; ++i) {
            const double T = 0.05 + u(rng), k = 1e6 + 2e7 * u(rng);
            const double beta = 2e-6 * u(rng) - 1e-6;
            const InterferometerSpec spec = basic_mz(T, k, ctx, beta, 0.1, 0.2);
            const double expected = -beta * k * ctx.g * T * T;
            const double got = term_phase(spec, PerturbationTerm::dilaton_linear);
            CHECK(relative_deviation(got, expected, 1e-300) <= 1e-13);
        }
    }

    SUBCASE("homogeneous in beta") {
        InterferometerSpec spec = basic_mz(0.4, 1.2e7, ctx, 1e-7);
        const double once = term_phase(spec, PerturbationTerm::dilaton_linear);
        spec.species.beta *= 3.0;
        CHECK(term_phase(spec, PerturbationTerm::dilaton_linear) ==
              doctest::Approx(3.0 * once).epsilon(1e-14));
    }

    SUBCASE("exactly antisymmetric under kick reversal") {
        InterferometerSpec spec = basic_mz(0.4, 1.2e7, ctx, 1e-7, 0.3, -0.1);
        const double plus = term_phase(spec, PerturbationTerm::dilaton_linear);
        for (auto& pulse : spec.pulses) {
            pulse.kick_upper = -pulse.kick_upper;
            pulse.kick_lower = -pulse.kick_lower;
        }
        const double minus = term_phase(spec, PerturbationTerm::dilaton_linear);
        CHECK(minus == doctest::Approx(-plus).epsilon(1e-14));
    }
}

TEST_CASE("no splitting means no phase") {
    // Two pulses with zero kicks everywhere: branches coincide and every
    // term vanishes identically.
    const PhysicalContext ctx = PhysicalContext::si();
    InterferometerSpec spec;
    spec.species = rubidium(1e-6, 1e-8);
    spec.dilaton.omega_rho = 3.0;
    spec.dilaton.k_rho = 0.5;
    spec.ctx = ctx;
    spec.pulses = {{0.0, 0.0, 0.0, 0.0}, {1.0, 0.0, 0.0, 0.0}};
    CHECK(phi0(spec) == 0.0);
    CHECK(term_phase(spec, PerturbationTerm::wave_vector_mod) == 0.0);
    CHECK(term_phase(spec, PerturbationTerm::dilaton_linear) == 0.0);
    CHECK(term_phase(spec, PerturbationTerm::dilaton_oscillation) == 0.0);
}

TEST_CASE("wave_vector_mod antisymmetry residual") {
    // phi_wv(k) + phi_wv(-k) = -(k g/c^2)(2 v0 T - 3 g T^2) v_r T: the
    // kick-quadratic remainder, checked explicitly.
    const PhysicalContext ctx = PhysicalContext::si();
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 10; ++i) {
        const double T = 0.1 + u(rng), k = 1e6 + 2e7 * u(rng);
        const double z0 = u(rng) - 0.5, v0 = u(rng) - 0.5;
        const InterferometerSpec plus_spec = basic_mz(T, k, ctx, 0.0, z0, v0);
        const InterferometerSpec minus_spec = basic_mz(T, -k, ctx, 0.0, z0, v0);
        const double plus = term_phase(plus_spec, PerturbationTerm::wave_vector_mod);
        const double minus = term_phase(minus_spec, PerturbationTerm::wave_vector_mod);
        const double v_r = ctx.hbar * k / plus_spec.species.m;
        const double expected = -(k * ctx.g / sq(ctx.c)) *
                                (2.0 * v0 * T - 3.0 * ctx.g * T * T) * v_r * T;
        CHECK(plus + minus == doctest::Approx(expected).epsilon(1e-6));
    }
}

TEST_CASE("fsl phase") {
    const PhysicalContext ctx = PhysicalContext::si();

    SUBCASE("vanishes without gravity") {
        const PhysicalContext flat = PhysicalContext::si(0.0);
        CHECK(fsl_phase(basic_mz(0.5, 1.6e7, flat)) == 0.0);
    }

    SUBCASE("vanishes when the central-pulse velocity is zero") {
        const double T = 0.3, k = 1.4e7;
        const double v0 = ctx.g * T - ctx.hbar * k / rubidium().m;
        const InterferometerSpec spec = basic_mz(T, k, ctx, 0.0, 0.0, v0);
        CHECK(std::abs(fsl_phase(spec)) <=
              1e-12 * std::abs(3.0 * k * ctx.g * T * T * v0 / ctx.c));
    }

    SUBCASE("direct arithmetic spot value") {
        const double T = 0.1, k = 1e7, v_T = 0.3;
        PhysicalContext g981 = PhysicalContext::si(9.81);
        geometry::Species s = rubidium();
        const double v0 = v_T + g981.g * T - g981.hbar * k / s.m;
        const InterferometerSpec spec =
            geometry::mach_zehnder(T, k, s, 0.0, v0, DilatonParams{}, g981);
        const long double expected =
            -3.0L * 1e7L * 9.81L * 0.01L * 0.3L / 299792458.0L;
        CHECK(fsl_phase(spec) ==
              doctest::Approx(static_cast<double>(expected)).epsilon(1e-9));
        CHECK(fsl_phase(spec) == doctest::Approx(-2.945e-3).epsilon(2e-3));
    }

    SUBCASE("restricted to the Mach-Zehnder") {
        InterferometerSpec spec = basic_mz(0.5, 1.6e7, ctx);
        spec.pulses[1].t = 0.4;  // unequal intervals: not a Mach-Zehnder
        CHECK_THROWS_AS(fsl_phase(spec), physics_error);
    }

    SUBCASE("kick antisymmetry up to the recoil-quadratic remainder") {
        // phi(k) + phi(-k) = -6 k g T^2 v_r / c exactly.
        const double T = 0.4, k = 1.3e7, v0 = 0.2;
        const InterferometerSpec plus = basic_mz(T, k, ctx, 0.0, 0.0, v0);
        const InterferometerSpec minus = basic_mz(T, -k, ctx, 0.0, 0.0, v0);
        const double v_r = ctx.hbar * k / plus.species.m;
        const double expected = -6.0 * k * ctx.g * T * T * v_r / ctx.c;
        CHECK(fsl_phase(plus) + fsl_phase(minus) ==
              doctest::Approx(expected).epsilon(1e-7));
    }
}

TEST_CASE("dilaton_oscillation vs quadrature oracle") {
    const PhysicalContext flat = PhysicalContext::si(0.0);
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 15; ++i) {
        const double T = 0.3 + u(rng);
        const double k = 5e6 + 2e7 * u(rng);
        geometry::Species s = rubidium(0.0, 1e-9 + 1e-7 * u(rng));
        DilatonParams d;
        d.omega_rho = 0.5 + 20.0 * u(rng);
        // k_rho bounded away from zero: the quadrature integrand is itself
        // a pointwise cosine difference whose round-off floor grows like
        // eps/(k_rho dz).
        d.k_rho = 0.05 + 0.2 * u(rng);
        d.phi_rho = 6.28 * u(rng);
        const InterferometerSpec spec = geometry::mach_zehnder(
            T, k, s, u(rng) - 0.5, u(rng) - 0.5, d, flat);
        const double exact = term_phase(spec, PerturbationTerm::dilaton_oscillation);
        // Drive the oracle to an absolute target well below the value: the
        // oscillatory integral cancels strongly, so a purely sup-based
        // relative tolerance would stop refining too early. The floor keeps
        // the target above the integrand's own round-off.
        const double v_r = flat.hbar * k / s.m;
        const double f_sup = (s.m * flat.c * flat.c * s.rho0 / flat.hbar) *
                             std::fmin(2.0, d.k_rho * v_r * T);
        oracle::QuadratureConfig cfg;
        cfg.abs_tol = std::fmax(1e-12 * std::abs(exact), 1e-15 * f_sup * 2.0 * T);
        cfg.rel_tol = 1e-15;
        const oracle::QuadResult quad = oracle::quad_term_phase(
            spec, PerturbationTerm::dilaton_oscillation, cfg);
        REQUIRE(quad.converged);
        CHECK(std::abs(exact - quad.value) <=
              std::fmax(1e-10 * std::abs(exact),
                        30.0 * quad.error_estimate + 1e-12 * f_sup * T));
    }
}

TEST_CASE("oscillation term with gravity uses quadrature") {
    const PhysicalContext ctx = PhysicalContext::si();
    geometry::Species s = rubidium(0.0, 1e-8);
    DilatonParams d;
    d.omega_rho = 7.0;
    d.k_rho = 0.05;
    d.phi_rho = 0.3;
    const InterferometerSpec spec =
        geometry::mach_zehnder(0.3, 1.5e7, s, 0.0, 0.0, d, ctx);
    const double value = term_phase(spec, PerturbationTerm::dilaton_oscillation);
    CHECK(std::isfinite(value));
    CHECK(value != 0.0);
    // Linear-in-rho0 scaling survives the quadrature path.
    InterferometerSpec doubled = spec;
    doubled.species.rho0 *= 2.0;
    CHECK(term_phase(doubled, PerturbationTerm::dilaton_oscillation) ==
          doctest::Approx(2.0 * value).epsilon(1e-9));
}

TEST_CASE("total phase") {
    const PhysicalContext ctx = PhysicalContext::si();

    SUBCASE("no terms, no gravity") {
        const PhysicalContext flat = PhysicalContext::si(0.0);
        const InterferometerSpec spec = basic_mz(0.5, 1.6e7, flat);
        const PhaseBreakdown b = total_phase(spec, {});
        CHECK(b.total == b.phi0);
        CHECK(std::abs(b.total) <=
              1e-12 * std::abs(1.6e7) * geometry::characteristic_scales(spec).z);
    }

    SUBCASE("gravity terms match the closed form") {
        for (int i = 0; i < 10; ++i) {
            const validation::MzDraw d = validation::draw_mz(99, i);
            constexpr PerturbationTerm kTerms[] = {
                PerturbationTerm::wave_vector_mod, PerturbationTerm::dilaton_linear,
                PerturbationTerm::fsl};
            const PhaseBreakdown b = total_phase(d.spec, kTerms);
            const double closed = forms::single_phase(d.params);
            CHECK(relative_deviation(b.total, closed, 1e-30) <= 1e-8);
        }
    }

    SUBCASE("duplicate terms rejected") {
        const InterferometerSpec spec = basic_mz(0.5, 1.6e7, ctx);
        constexpr PerturbationTerm kTerms[] = {PerturbationTerm::fsl,
                                               PerturbationTerm::fsl};
        CHECK_THROWS_AS(total_phase(spec, kTerms), physics_error);
    }

    SUBCASE("serialized records carry every term") {
        const InterferometerSpec spec = basic_mz(0.5, 1.6e7, ctx, 1e-7);
        constexpr PerturbationTerm kTerms[] = {PerturbationTerm::wave_vector_mod,
                                               PerturbationTerm::fsl};
        const PhaseBreakdown b = total_phase(spec, kTerms);
        const std::string json = to_json(b);
        CHECK(json.find("\"phi0_rad\":") != std::string::npos);
        CHECK(json.find("\"wave_vector_mod_rad\":") != std::string::npos);
        CHECK(json.find("\"fsl_rad\":") != std::string::npos);
        CHECK(json.find("\"total_rad\":") != std::string::npos);
        const std::string csv_rec = to_csv(b);
        CHECK(csv_rec.find("phi0_rad,wave_vector_mod_rad,fsl_rad,total_rad\n") == 0);
    }

    SUBCASE("breakdown sums to the total") {
        geometry::Species s = rubidium(1e-7, 1e-9);
        DilatonParams d;
        d.omega_rho = 3.0;
        d.k_rho = 0.0;
        const PhysicalContext flat = PhysicalContext::si(0.0);
        const InterferometerSpec spec =
            geometry::mach_zehnder(0.5, 1.6e7, s, 0.0, 0.0, d, flat);
        constexpr PerturbationTerm kAll[] = {
            PerturbationTerm::wave_vector_mod, PerturbationTerm::dilaton_linear,
            PerturbationTerm::dilaton_oscillation, PerturbationTerm::fsl};
        const PhaseBreakdown b = total_phase(spec, kAll);
        double sum = b.phi0 + b.phi_fsl;
        for (const auto& [kind, value] : b.terms) sum += value;
        CHECK(sum == b.total);
    }
}
