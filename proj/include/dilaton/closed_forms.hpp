#pragma once

#include <utility>

#include "dilaton/phase_engine.hpp"

namespace dilaton::forms {

using geometry::InterferometerSpec;
using geometry::Species;

// Single Mach-Zehnder interferometer in uniform gravity with dilaton
// couplings; everything needed for the closed-form total phase.
struct SinglePhaseParams {
    double T = 0.0;  // interrogation time [s]
    double k = 0.0;  // effective wave number [1/m]
    Species species;
    double z0 = 0.0;
    double v0 = 0.0;
    PhysicalContext ctx;

    double recoil_velocity() const { return ctx.hbar * k / species.m; }
    double v_T() const { return v0 - ctx.g * T + recoil_velocity(); }
    double z_T() const {
        return z0 + v0 * T - ctx.g * T * T / 2 + recoil_velocity() * T;
    }
};

// phi = -k g T^2 [ 1 + beta + 3 v_T/c + v0 v_T/c^2 - g z_T/c^2
//                  - (g T/c^2)(v0 + hbar k/(2m) - g T) + g^2 T^2/(4 c^2) ].
// The bracket is assembled from dimensionless ratios; the four bracketed
// groups are also exposed term by term for breakdown comparisons.
double single_phase(const SinglePhaseParams& p);

struct SinglePhaseBreakdown {
    double phi0 = 0.0;         // -k g T^2
    double beta_term = 0.0;    // -k g T^2 beta
    double fsl_term = 0.0;     // -k g T^2 3 v_T/c
    double wave_vector_term = 0.0;  // the c^-2 block
    double total = 0.0;
};

SinglePhaseBreakdown single_phase_breakdown(const SinglePhaseParams& p);

// Two vertically separated interferometers with common T, k, v0, species
// mass and equal initial velocities; interferometer 1 sits a height ell
// above interferometer 2. g is the mean local acceleration, delta_g the
// difference g_1 - g_2.
struct GradiometerPair {
    double ell = 0.0;      // separation [m]
    double g = 0.0;        // mean acceleration [m/s^2]
    double delta_g = 0.0;  // g_1 - g_2 [m/s^2]
    double T = 0.0;
    double k = 0.0;
    double v0 = 0.0;
    double m = 0.0;  // species mass, fixes v_T = v0 - gT + hbar k/m
};

// delta_phi = k g T^2 [ -(delta_g/g)(1 + beta + 3 (v_T - gT)/c) + g ell/c^2 ].
double gradiometer_phase(const GradiometerPair& pair, double beta,
                         const PhysicalContext& ctx);

// Two species/states j = a, b with m_j = m + lambda_j dm/2, k_j = k +
// lambda_j dk/2, v0_j = v0 + lambda_j dv0/2, z0_j = z0 + lambda_j dz0
// (positions carry no 1/2, matching the source convention), lambda_a = -1,
// lambda_b = +1.
struct EepPair {
    double m = 0.0;       // mean mass [kg]
    double delta_m = 0.0; // [kg]
    double k = 0.0;       // mean kick [1/m]
    double delta_k = 0.0; // [1/m]
    double beta_a = 0.0;
    double beta_b = 0.0;
    double v0 = 0.0;
    double delta_v0 = 0.0;
    double z0 = 0.0;
    double delta_z0 = 0.0;

    double Omega(const PhysicalContext& ctx) const {
        return delta_m * ctx.c * ctx.c / ctx.hbar;
    }
    double omega_C(const PhysicalContext& ctx) const {
        return m * ctx.c * ctx.c / ctx.hbar;
    }
    // chi = [1 - Omega^2/(2 omega_C)^2]^{-1}
    double chi() const { return 1.0 / (1.0 - sq(delta_m / (2.0 * m))); }
    double recoil_velocity(const PhysicalContext& ctx) const {
        return ctx.hbar * k / m;
    }
    double delta_beta() const { return beta_b - beta_a; }

    void validate() const;  // |delta_m| < 2m, m > 0
};

// Normalized differential phase theta_k = phi_a/(|k_a| g T^2) -
// phi_b/(|k_b| g T^2). sign = +1 for the k_a, k_b > 0 run; sign = -1 for
// the kick-reversed run, where the |k_j| normalization flips every
// k-independent term while the kick-linear (chi v_r) terms keep their sign.
double eep_theta(const EepPair& pair, int sign, double g, double T,
                 const PhysicalContext& ctx);

// (theta_k - theta_{-k})/2, returned in its k-free closed form
//   dbeta + 3 dv0/c + 2 v0 dv0/c^2 - g dz0/c^2 - 3 g dv0 T/c^2.
double k_reversal(const EepPair& pair, double g, double T,
                  const PhysicalContext& ctx);

// Two identical interferometers in microgravity (g = 0 enforced), the
// upper one starting ell higher and ell/c later than the lower one. The
// lower interferometer starts at z = ell/2 so that the reference position
// z_T_bar = ell + v0 T + hbar k T/(2m) is the mid-experiment average at the
// central pulse.
struct DarkMatterPair {
    double ell = 0.0;  // separation [m]
    double T = 0.0;
    double k = 0.0;
    double v0 = 0.0;
    double m = 0.0;
    double rho0 = 0.0;       // atom coupling to the oscillating background
    double omega_rho = 0.0;  // [rad/s]
    double k_rho = 0.0;      // [1/m]
    double phi_rho = 0.0;    // [rad]
    PhysicalContext ctx;     // ctx.g must be 0

    double v_T() const { return v0 + ctx.hbar * k / m; }
    double z_T_bar() const {
        return ell + v0 * T + ctx.hbar * k * T / (2.0 * m);
    }

    void validate() const;
};

// delta_phi/(c k T)^2 = -2 rho0 (k_rho/k)
//     cos(omega T - k_rho z_T_bar + omega ell/(2c) + phi_rho)
//   * sin((omega ell/(2c)) [1 - c k_rho/omega])
//   * sinc((omega T/2) [1 - v0 k_rho/omega])
//   * sinc((omega T/2) [1 - v_T k_rho/omega]).
double dm_differential_phase(const DarkMatterPair& pair);

// Standard deviation of delta_phi over the unknown phi_rho: the same
// product without the cosine, with absolute value taken.
double dm_signal_amplitude(const DarkMatterPair& pair);

// Raw signed product (no |.|), retrievable alongside the amplitude.
double dm_signal_amplitude_signed(const DarkMatterPair& pair);

// Engine counterparts of the dark-matter pair: the two interferometer
// specs with the documented placement (lower at z = ell/2, t = 0; upper at
// z = 3 ell/2, t = ell/c).
std::pair<InterferometerSpec, InterferometerSpec> dm_engine_specs(
    const DarkMatterPair& pair);

}  // namespace dilaton::forms
