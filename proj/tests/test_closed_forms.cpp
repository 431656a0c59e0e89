#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dilaton/closed_forms.hpp"
#include "dilaton/oracle.hpp"
#include "dilaton/validation.hpp"

using namespace dilaton;
using namespace dilaton::forms;

TEST_CASE("single phase limits") {
    SinglePhaseParams p;
    p.T = 0.5;
    p.k = 1.6e7;
    p.species.m = 1.44316060e-25;
    p.ctx = PhysicalContext::si();

    SUBCASE("gravimeter phase dominates") {
        // With c scaled far up, every propagation correction dies and the
        // bracket reduces to 1 + beta.
        SinglePhaseParams huge_c = p;
        huge_c.ctx.c *= 1e6;
        const double kgT2 = p.k * p.ctx.g * p.T * p.T;
        CHECK(single_phase(huge_c) == doctest::Approx(-kgT2).epsilon(1e-9));

        huge_c.species.beta = 1e-6;
        CHECK(single_phase(huge_c) ==
              doctest::Approx(-kgT2 * (1.0 + 1e-6)).epsilon(1e-9));
    }

    SUBCASE("term-for-term against the engine") {
        for (int i = 0; i < 20; ++i) {
            const validation::MzDraw d = validation::draw_mz(2024, i);
            const SinglePhaseBreakdown closed = single_phase_breakdown(d.params);
            using engine::PerturbationTerm;
            CHECK(relative_deviation(engine::phi0(d.spec), closed.phi0, 1e-30) <= 1e-8);
            CHECK(relative_deviation(
                      engine::term_phase(d.spec, PerturbationTerm::wave_vector_mod),
                      closed.wave_vector_term, 1e-30) <= 1e-8);
            CHECK(relative_deviation(
                      engine::term_phase(d.spec, PerturbationTerm::dilaton_linear),
                      closed.beta_term, 1e-30) <= 1e-8);
            CHECK(relative_deviation(engine::fsl_phase(d.spec), closed.fsl_term,
                                     1e-30) <= 1e-8);
        }
    }
}

TEST_CASE("gradiometer") {
    const PhysicalContext ctx = PhysicalContext::si();
    GradiometerPair pair;
    pair.T = 0.5;
    pair.k = 1.61e7;
    pair.m = 1.44316060e-25;
    pair.v0 = 0.0;
    pair.g = 9.81;

    SUBCASE("wave-vector contribution at one kilometre") {
        pair.ell = 1000.0;
        pair.delta_g = 0.0;
        const double phi = gradiometer_phase(pair, 0.0, ctx);
        const double normalized = phi / (pair.k * pair.g * pair.T * pair.T);
        CHECK(normalized ==
              doctest::Approx(pair.g * pair.ell / sq(ctx.c)).epsilon(1e-15));
        CHECK(normalized == doctest::Approx(1.09e-13).epsilon(0.01));
    }

    SUBCASE("identical interferometers see nothing") {
        pair.ell = 1e-12;
        pair.delta_g = 0.0;
        CHECK(std::abs(gradiometer_phase(pair, 0.0, ctx)) <=
              1e-20 * pair.k * pair.g * sq(pair.T));
    }

    SUBCASE("ell term is independent of T, k, v0") {
        pair.delta_g = 0.0;
        pair.ell = 250.0;
        const double reference =
            gradiometer_phase(pair, 0.0, ctx) / (pair.k * pair.g * sq(pair.T));
        GradiometerPair other = pair;
        other.T = 1.3;
        other.k = 5e6;
        other.v0 = 2.0;
        const double normalized =
            gradiometer_phase(other, 0.0, ctx) / (other.k * other.g * sq(other.T));
        CHECK(normalized == doctest::Approx(reference).epsilon(1e-14));
    }

    SUBCASE("matches the difference of two single phases to stated order") {
        pair.ell = 1000.0;
        pair.delta_g = 1e-3;
        const double beta = 1e-8;
        const double formula = gradiometer_phase(pair, beta, ctx);

        SinglePhaseParams upper;
        upper.T = pair.T;
        upper.k = pair.k;
        upper.species.m = pair.m;
        upper.species.beta = beta;
        upper.v0 = pair.v0;
        upper.z0 = pair.ell;
        upper.ctx = PhysicalContext::si(pair.g + pair.delta_g / 2.0);
        SinglePhaseParams lower = upper;
        lower.z0 = 0.0;
        lower.ctx = PhysicalContext::si(pair.g - pair.delta_g / 2.0);
        const double direct = single_phase(upper) - single_phase(lower);

        // Dropped pieces are delta_g cross terms of order (delta_g/g) times
        // the c^-2 block, the second-order delta_g^2 FSL remainder, and the
        // round-off floor of subtracting two phases of size kgT^2.
        const double kgT2 = pair.k * pair.g * sq(pair.T);
        const double c2 = sq(ctx.c);
        const double v_r = ctx.hbar * pair.k / pair.m;
        const double speeds = std::abs(pair.v0) + v_r + pair.g * pair.T;
        const double block_scale =
            speeds * speeds / c2 + pair.g * (std::abs(upper.z0) + 1.0) / c2;
        const double bound =
            10.0 * kgT2 * (std::abs(pair.delta_g) / pair.g) * block_scale +
            kgT2 * sq(pair.delta_g / pair.g) * (3.0 * pair.g * pair.T / ctx.c) +
            1e-14 * kgT2;
        CHECK(std::abs(direct - formula) <= bound);
        // The wave-vector piece g ell/c^2 is visible above that bound.
        CHECK(kgT2 * pair.g * pair.ell / c2 > 5.0 * bound);
    }

    SUBCASE("g = 0 rejected") {
        pair.g = 0.0;
        pair.ell = 10.0;
        CHECK_THROWS_AS(gradiometer_phase(pair, 0.0, ctx), physics_error);
    }
}

TEST_CASE("eep theta") {
    const PhysicalContext ctx = PhysicalContext::si();
    const double g = 9.81, T = 0.5;

    SUBCASE("identical species gives zero") {
        EepPair pair;
        pair.m = 1.44316060e-25;
        pair.k = 1.61e7;
        CHECK(eep_theta(pair, +1, g, T, ctx) == 0.0);
        CHECK(eep_theta(pair, -1, g, T, ctx) == 0.0);
    }

    SUBCASE("magic Bragg clock pair is dominated by delta beta") {
        EepPair pair;
        pair.m = 1.44316060e-25;
        pair.k = 1.61e7;
        pair.delta_k = 0.0;
        pair.beta_a = 0.0;
        pair.beta_b = 1e-10;
        pair.delta_m = 1e-10 * pair.m;  // Omega/omega_C = 1e-10
        const double theta = eep_theta(pair, +1, g, T, ctx);
        const double v_r = pair.recoil_velocity(ctx);
        const double correction = -pair.chi() * (v_r / ctx.c) *
                                  (3.0 - 1.5 * g * T / ctx.c) * 1e-10;
        CHECK(theta - pair.delta_beta() ==
              doctest::Approx(correction).epsilon(1e-5));
        CHECK(std::abs(theta - pair.delta_beta()) <= 1e-6 * std::abs(pair.delta_beta()));
    }

    SUBCASE("finite-speed-of-light term 3 dv0/c") {
        EepPair pair;
        pair.m = 1.44316060e-25;
        pair.k = 1.61e7;
        pair.delta_v0 = 2e-11 * ctx.c;
        const double theta = eep_theta(pair, +1, 0.0, T, ctx);
        // With g = 0 and no other differences only the dv0 terms survive.
        CHECK(theta == doctest::Approx(6e-11).epsilon(1e-4));
    }

    SUBCASE("mass bound enforced") {
        EepPair pair;
        pair.m = 1e-25;
        pair.delta_m = 2.5e-25;
        pair.k = 1e7;
        CHECK_THROWS_AS(eep_theta(pair, +1, g, T, ctx), physics_error);
    }
}

TEST_CASE("k reversal") {
    const PhysicalContext ctx = PhysicalContext::si();

    SUBCASE("two-theta composition equals the closed form") {
        double max_dev = 0.0;
        for (int i = 0; i < 200; ++i) {
            const validation::EepDraw d = validation::draw_eep(555, i);
            const PhysicalContext local = PhysicalContext::si(d.g);
            const double closed = k_reversal(d.pair, d.g, d.T, local);
            const double composed =
                0.5 * (eep_theta(d.pair, +1, d.g, d.T, local) -
                       eep_theta(d.pair, -1, d.g, d.T, local));
            max_dev = std::fmax(max_dev, relative_deviation(composed, closed, 1e-300));
        }
        CHECK(max_dev <= 1e-12);
    }

    SUBCASE("delta v0 of one micrometre per second") {
        EepPair pair;
        pair.m = 1.44316060e-25;
        pair.k = 1.61e7;
        pair.delta_v0 = 1e-6;
        const double value = k_reversal(pair, 9.81, 0.5, ctx);
        // Surviving signal is 3 dv0/c; the per-unit velocity-uncertainty
        // scale dv0/c itself is about 3.3e-15.
        CHECK(value == doctest::Approx(3.0 * 1e-6 / ctx.c).epsilon(1e-3));
        CHECK(pair.delta_v0 / ctx.c == doctest::Approx(3.3e-15).epsilon(0.02));
    }

    SUBCASE("all differences zero") {
        EepPair pair;
        pair.m = 1e-25;
        pair.k = 1e7;
        pair.v0 = 3.0;
        CHECK(k_reversal(pair, 9.81, 0.5, ctx) == 0.0);
    }
}

TEST_CASE("dark matter differential phase") {
    SUBCASE("massless dilaton silences the signal") {
        for (int i = 0; i < 20; ++i) {
            DarkMatterPair pair = validation::draw_dm_pair(31337, i);
            pair.omega_rho = pair.ctx.c * pair.k_rho;
            CHECK(dm_signal_amplitude(pair) == 0.0);
            CHECK(dm_differential_phase(pair) == 0.0);
        }
    }

    SUBCASE("vanishing recoil silences the signal") {
        for (int i = 0; i < 20; ++i) {
            DarkMatterPair pair = validation::draw_dm_pair(31337, i + 100);
            pair.k_rho = 0.0;
            CHECK(dm_signal_amplitude(pair) == 0.0);
        }
    }

    SUBCASE("coincident interferometers see the same field") {
        DarkMatterPair pair = validation::draw_dm_pair(31337, 7);
        pair.ell = 0.0;
        CHECK(dm_signal_amplitude(pair) == 0.0);
    }

    SUBCASE("engine difference with start-time offset matches") {
        for (int i = 0; i < 15; ++i) {
            const DarkMatterPair pair = validation::draw_dm_pair(8080, i);
            const auto [upper, lower] = dm_engine_specs(pair);
            using engine::PerturbationTerm;
            const double engine_diff =
                engine::term_phase(upper, PerturbationTerm::dilaton_oscillation) -
                engine::term_phase(lower, PerturbationTerm::dilaton_oscillation);
            const double closed = dm_differential_phase(pair);
            // Absolute floor: the two-interferometer subtraction leaves
            // round-off at the signal-amplitude scale when the cosine
            // happens to sit near a zero.
            const double floor = 1e-9 * dm_signal_amplitude(pair) + 1e-300;
            CHECK(std::abs(engine_diff - closed) <=
                  std::fmax(1e-8 * std::abs(closed), floor));
        }
    }

    SUBCASE("periodic in a common start-time shift") {
        const DarkMatterPair pair = validation::draw_dm_pair(8080, 3);
        DarkMatterPair shifted = pair;
        shifted.phi_rho = pair.phi_rho + 2.0 * std::numbers::pi;
        const double a = dm_differential_phase(pair);
        const double b = dm_differential_phase(shifted);
        CHECK(std::abs(a - b) <= 1e-10 * dm_signal_amplitude(pair) + 1e-300);
    }

    SUBCASE("signed amplitude consistency") {
        const DarkMatterPair pair = validation::draw_dm_pair(8080, 5);
        CHECK(std::abs(dm_signal_amplitude_signed(pair)) ==
              dm_signal_amplitude(pair));
    }

    SUBCASE("microgravity enforced") {
        DarkMatterPair pair = validation::draw_dm_pair(8080, 9);
        pair.ctx.g = 9.81;
        CHECK_THROWS_AS(dm_differential_phase(pair), physics_error);
    }
}

TEST_CASE("phi_SA against the phi_rho average") {
    for (int i = 0; i < 20; ++i) {
        const DarkMatterPair pair = validation::draw_dm_pair(6060, i);
        const double closed = dm_signal_amplitude(pair);
        const double numeric = oracle::phi_sa_numeric(pair, 4096);
        CHECK(relative_deviation(closed, numeric, 1e-300) <= 1e-6);
    }
}
