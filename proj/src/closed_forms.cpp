#include "dilaton/closed_forms.hpp"

#include <cmath>

namespace dilaton::forms {

SinglePhaseBreakdown single_phase_breakdown(const SinglePhaseParams& p) {
    p.ctx.validate();
    p.species.validate();
    if (!(p.T > 0.0)) throw physics_error("single_phase: T must be positive");
    if (p.k == 0.0) throw physics_error("single_phase: k must be nonzero");

    const double c = p.ctx.c;
    const double g = p.ctx.g;
    const double T = p.T;
    const double kgT2 = p.k * g * T * T;
    const double v_T = p.v_T();
    const double v_r = p.recoil_velocity();

    // Bracket of -phi/(k g T^2), assembled from dimensionless ratios.
    const double wave_vector_block =
        (p.v0 / c) * (v_T / c) - g * p.z_T() / (c * c) -
        (g * T / c) * ((p.v0 + 0.5 * v_r - g * T) / c) + sq(g * T / (2.0 * c));

    SinglePhaseBreakdown b;
    b.phi0 = -kgT2;
    b.beta_term = -kgT2 * p.species.beta;
    b.fsl_term = -kgT2 * 3.0 * (v_T / c);
    b.wave_vector_term = -kgT2 * wave_vector_block;
    b.total = -kgT2 * (1.0 + p.species.beta + 3.0 * (v_T / c) + wave_vector_block);
    return b;
}

double single_phase(const SinglePhaseParams& p) {
    return single_phase_breakdown(p).total;
}

double gradiometer_phase(const GradiometerPair& pair, double beta,
                         const PhysicalContext& ctx) {
    if (pair.g == 0.0)
        throw physics_error("gradiometer_phase: formula is normalized by g; g must be nonzero");
    if (!(pair.T > 0.0)) throw physics_error("gradiometer_phase: T must be positive");
    if (!(pair.m > 0.0)) throw physics_error("gradiometer_phase: mass must be positive");
    if (!(pair.ell > 0.0)) throw physics_error("gradiometer_phase: separation must be positive");
    const double c = ctx.c;
    const double v_T = pair.v0 - pair.g * pair.T + ctx.hbar * pair.k / pair.m;
    const double normalized =
        -(pair.delta_g / pair.g) *
            (1.0 + beta + 3.0 * (v_T - pair.g * pair.T) / c) +
        pair.g * pair.ell / (c * c);
    return pair.k * pair.g * pair.T * pair.T * normalized;
}

void EepPair::validate() const {
    if (!(m > 0.0)) throw physics_error("EepPair: mean mass must be positive");
    if (!(std::abs(delta_m) < 2.0 * m))
        throw physics_error("EepPair: |delta_m| must be below 2m (chi finite, masses positive)");
    if (k == 0.0) throw physics_error("EepPair: mean kick must be nonzero");
}

namespace {

// k-independent part of theta_k; shared verbatim by eep_theta and
// k_reversal so the compositional identity holds argwise.
double theta_even_terms(const EepPair& pair, double g, double T,
                        const PhysicalContext& ctx) {
    const double c = ctx.c;
    return pair.delta_beta() + 3.0 * pair.delta_v0 / c -
           g / (c * c) * (pair.delta_z0 + 3.0 * pair.delta_v0 * T) +
           2.0 * pair.v0 * pair.delta_v0 / (c * c);
}

}  // namespace

double eep_theta(const EepPair& pair, int sign, double g, double T,
                 const PhysicalContext& ctx) {
    pair.validate();
    if (sign != 1 && sign != -1)
        throw physics_error("eep_theta: sign must be +1 or -1");
    if (!(pair.k - 0.5 * std::abs(pair.delta_k) > 0.0))
        throw physics_error("eep_theta: both species kicks must share the sign of k");

    const double c = ctx.c;
    const double chi = pair.chi();
    const double v_r = pair.recoil_velocity(ctx);
    const double mass_ratio = pair.Omega(ctx) / pair.omega_C(ctx);  // = dm/m
    const double kick_ratio = pair.delta_k / pair.k;

    // Kick-linear terms keep their sign under k-reversal: the phases flip
    // with the kicks but so does the |k_j| normalization of everything else.
    const double odd =
        chi * (v_r / c) * (3.0 - 1.5 * g * T / c + pair.v0 / c) *
            (kick_ratio - mass_ratio) +
        chi * (v_r * pair.delta_v0 / (c * c)) *
            (1.0 - 0.25 * kick_ratio * mass_ratio);

    return sign * theta_even_terms(pair, g, T, ctx) + odd;
}

double k_reversal(const EepPair& pair, double g, double T,
                  const PhysicalContext& ctx) {
    pair.validate();
    return theta_even_terms(pair, g, T, ctx);
}

void DarkMatterPair::validate() const {
    ctx.validate();
    if (ctx.g != 0.0)
        throw physics_error("DarkMatterPair: microgravity required (g = 0)");
    if (!(m > 0.0)) throw physics_error("DarkMatterPair: mass must be positive");
    if (!(k > 0.0)) throw physics_error("DarkMatterPair: k must be positive");
    if (!(T > 0.0)) throw physics_error("DarkMatterPair: T must be positive");
    if (!(ell >= 0.0)) throw physics_error("DarkMatterPair: separation must be non-negative");
    if (!(omega_rho > 0.0))
        throw physics_error("DarkMatterPair: omega_rho must be positive");
    if (!(k_rho >= 0.0)) throw physics_error("DarkMatterPair: k_rho must be non-negative");
}

namespace {

struct DmFactors {
    double prefactor;    // 2 rho0 (k_rho/k) (c k T)^2
    double envelope;     // sin * sinc * sinc
    double cos_argument;
};

DmFactors dm_factors(const DarkMatterPair& pair) {
    pair.validate();
    const double c = pair.ctx.c;
    const double w = pair.omega_rho;
    // (c k_rho)/omega written exactly this way so a massless construction
    // omega = c*k_rho cancels to 1 bit-exactly and the envelope vanishes.
    const double massless_ratio = (c * pair.k_rho) / w;
    const double sin_factor = std::sin(w * pair.ell / (2.0 * c) * (1.0 - massless_ratio));
    const double sinc_v0 = sinc(w * pair.T / 2.0 * (1.0 - pair.v0 * pair.k_rho / w));
    const double sinc_vT = sinc(w * pair.T / 2.0 * (1.0 - pair.v_T() * pair.k_rho / w));

    DmFactors f;
    f.prefactor = 2.0 * pair.rho0 * (pair.k_rho / pair.k) * sq(c * pair.k * pair.T);
    f.envelope = sin_factor * sinc_v0 * sinc_vT;
    f.cos_argument = w * pair.T - pair.k_rho * pair.z_T_bar() +
                     w * pair.ell / (2.0 * c) + pair.phi_rho;
    return f;
}

}  // namespace

double dm_differential_phase(const DarkMatterPair& pair) {
    const DmFactors f = dm_factors(pair);
    return -f.prefactor * std::cos(f.cos_argument) * f.envelope;
}

double dm_signal_amplitude_signed(const DarkMatterPair& pair) {
    const DmFactors f = dm_factors(pair);
    return f.prefactor * f.envelope;
}

double dm_signal_amplitude(const DarkMatterPair& pair) {
    return std::abs(dm_signal_amplitude_signed(pair));
}

std::pair<InterferometerSpec, InterferometerSpec> dm_engine_specs(
    const DarkMatterPair& pair) {
    pair.validate();
    Species species;
    species.m = pair.m;
    species.beta = 0.0;
    species.rho0 = pair.rho0;

    DilatonParams dilaton;
    dilaton.rho0_bar = 0.0;  // EM-side amplitude unused by the matter coupling
    dilaton.k_rho = pair.k_rho;
    dilaton.omega_rho = pair.omega_rho;
    dilaton.phi_rho = pair.phi_rho;

    const double z_lower = pair.ell / 2.0;
    InterferometerSpec upper =
        geometry::mach_zehnder(pair.T, pair.k, species, z_lower + pair.ell,
                               pair.v0, dilaton, pair.ctx, pair.ell / pair.ctx.c);
    InterferometerSpec lower = geometry::mach_zehnder(
        pair.T, pair.k, species, z_lower, pair.v0, dilaton, pair.ctx, 0.0);
    return {std::move(upper), std::move(lower)};
}

}  // namespace dilaton::forms
