#include "dilaton/optics.hpp"

#include <cmath>

namespace dilaton::optics {

namespace {

// Minkowski-signature sesquilinear norm e*_nu e^nu at z = 0 (metric = eta).
double eta_norm(const complex4& e) {
    return std::norm(e[0]) - std::norm(e[1]) - std::norm(e[2]) - std::norm(e[3]);
}

}  // namespace

WaveSpec WaveSpec::from_components(double kx, double ky, double kz, double a_in,
                                   const complex4& e_in) {
    if (kz == 0.0) throw physics_error("WaveSpec: kz must be nonzero");
    if (!(a_in > 0.0)) throw physics_error("WaveSpec: a_in must be positive");
    WaveSpec w;
    w.kx = kx;
    w.ky = ky;
    w.kz = kz;
    w.k0 = std::sqrt(kx * kx + ky * ky + kz * kz);
    w.a_in = a_in;
    const double n = std::abs(eta_norm(e_in));
    if (!(n > 0.0)) throw physics_error("WaveSpec: polarization must have nonzero norm");
    const double s = 1.0 / std::sqrt(n);
    for (int i = 0; i < 4; ++i) w.e_in[i] = e_in[i] * s;
    return w;
}

double eikonal_phase(double t, double x, double y, double z, const WaveSpec& w,
                     const PhysicalContext& ctx) {
    const double c2 = ctx.c * ctx.c;
    const double kappa =
        w.kz * z * (1.0 - ctx.g * w.k0 * w.k0 * z / (2.0 * c2 * w.kz * w.kz));
    return ctx.c * w.k0 * t - w.kx * x - w.ky * y - kappa;
}

WaveVector wave_vector(double /*t*/, double /*x*/, double /*y*/, double z,
                       const WaveSpec& w, const PhysicalContext& ctx) {
    const double c2 = ctx.c * ctx.c;
    WaveVector k;
    k.K0 = w.k0;
    k.Kx = -w.kx;
    k.Ky = -w.ky;
    k.Kz = -w.kz * (1.0 - ctx.g * w.k0 * w.k0 * z / (c2 * w.kz * w.kz));
    return k;
}

double null_residual(const WaveVector& k, double z, const WaveSpec& w,
                     const PhysicalContext& ctx) {
    const double u2 = 2.0 * ctx.g * z / (ctx.c * ctx.c);
    const double contraction =
        k.K0 * k.K0 / (1.0 + u2) - k.Kx * k.Kx - k.Ky * k.Ky - k.Kz * k.Kz;
    return std::abs(contraction) / (w.k0 * w.k0);
}

double amplitude_deviation(double z, double t, const WaveSpec& w,
                           const DilatonParams& p, const PhysicalContext& ctx) {
    const double c2 = ctx.c * ctx.c;
    const double gravity_term = ctx.g * z / (2.0 * c2) *
                                (w.q_squared() / (w.kz * w.kz) + p.d_e * p.beta_S_bar);
    // (1 - omega k0/(c k_rho kz)) sin(k_rho z/2), written with the removable
    // singularity factored out: sin(x) - (k0/kz)(omega/c)(z/2) sinc(x).
    const double x = p.k_rho * z / 2.0;
    const double spatial =
        std::sin(x) - (w.k0 / w.kz) * (p.omega_rho / ctx.c) * (z / 2.0) * sinc(x);
    const double dilaton_term =
        p.d_e * p.rho0_bar * spatial *
        std::sin(p.omega_rho * t - p.k_rho * z / 2.0 + p.phi_rho);
    return gravity_term + dilaton_term;
}

double amplitude(double z, double t, const WaveSpec& w, const DilatonParams& p,
                 const PhysicalContext& ctx) {
    return w.a_in * (1.0 + amplitude_deviation(z, t, w, p, ctx));
}

complex4 polarization(double z, const WaveSpec& w, const PhysicalContext& ctx) {
    const double u = ctx.g * z / (ctx.c * ctx.c);
    const double ratio = w.k0 / w.kz;
    complex4 e = w.e_in;
    e[0] = w.e_in[0] * (1.0 - u) - w.e_in[3] * u * ratio;
    e[3] = w.e_in[3] - w.e_in[0] * u * ratio;
    return e;
}

std::complex<double> gauge_contraction(const WaveVector& k, const complex4& e) {
    return k.K0 * e[0] + k.Kx * e[1] + k.Ky * e[2] + k.Kz * e[3];
}

complex4 make_orthogonal_polarization(const complex4& e, const WaveSpec& w) {
    // Remove the time component excess so K_mu(0) e^mu = 0 (K_mu t^mu = k0),
    // then normalize to |e*_nu e^nu| = 1.
    const WaveVector k0{w.k0, -w.kx, -w.ky, -w.kz};
    const std::complex<double> c = gauge_contraction(k0, e);
    complex4 out = e;
    out[0] -= c / w.k0;
    const double n = std::abs(std::norm(out[0]) - std::norm(out[1]) -
                              std::norm(out[2]) - std::norm(out[3]));
    if (!(n > 0.0))
        throw physics_error("make_orthogonal_polarization: degenerate polarization");
    const double s = 1.0 / std::sqrt(n);
    for (auto& v : out) v *= s;
    return out;
}

TwoPhotonField two_photon_effective(double kR, double kB, double t, double z,
                                    const PhysicalContext& ctx) {
    if (!(kR > 0.0) || !(kB > 0.0))
        throw physics_error("two_photon_effective: wave numbers must be positive");
    TwoPhotonField f;
    f.delta_omega = ctx.c * (kB - kR);
    f.k_eff = kB + kR;
    f.phase = f.delta_omega * t -
              f.k_eff * z * (1.0 - ctx.g * z / (2.0 * ctx.c * ctx.c));
    return f;
}

EpsilonScale epsilon_scale(double lambda, double L) {
    if (!(lambda > 0.0) || !(L > 0.0))
        throw physics_error("epsilon_scale: lambda and L must be positive");
    EpsilonScale e;
    e.epsilon = lambda / L;
    e.geometrical_optics_ok = e.epsilon < 1e-2;
    return e;
}

FieldPoint field_point(double t, double x, double y, double z,
                       const WaveSpec& w, const DilatonParams& p,
                       const PhysicalContext& ctx) {
    FieldPoint fp;
    fp.phase = eikonal_phase(t, x, y, z, w, ctx);
    const WaveVector k = wave_vector(t, x, y, z, w, ctx);
    fp.K[0] = k.K0;
    fp.K[1] = k.Kx;
    fp.K[2] = k.Ky;
    fp.K[3] = k.Kz;
    fp.amplitude = amplitude(z, t, w, p, ctx);
    fp.polarization = polarization(z, w, ctx);
    return fp;
}

FieldGrid field_grid(const GridRegion& region, int nt, int nz, double L,
                     const WaveSpec& w, const DilatonParams& p,
                     const PhysicalContext& ctx) {
    if (nt < 2 || nz < 2)
        throw physics_error("field_grid: need at least 2 nodes per axis");
    if (!(region.t1 > region.t0) || !(region.z1 > region.z0))
        throw physics_error("field_grid: zero-sized region");
    if (!(L > 0.0)) throw physics_error("field_grid: scale L must be positive");

    FieldGrid grid;
    grid.nt = nt;
    grid.nz = nz;
    grid.L = L;
    grid.t.resize(nt);
    grid.z.resize(nz);
    const double dt = (region.t1 - region.t0) / (nt - 1);
    const double dz = (region.z1 - region.z0) / (nz - 1);
    for (int it = 0; it < nt; ++it) grid.t[it] = region.t0 + it * dt;
    for (int iz = 0; iz < nz; ++iz) grid.z[iz] = region.z0 + iz * dz;

    const std::size_t n = static_cast<std::size_t>(nt) * nz;
    grid.scaled_phase.resize(n);
    grid.amplitude_dev.resize(n);
    grid.K0_scaled.resize(n);
    grid.Kz_scaled.resize(n);

    for (int it = 0; it < nt; ++it) {
        for (int iz = 0; iz < nz; ++iz) {
            const double t = grid.t[it];
            const double z = grid.z[iz];
            const std::size_t i = grid.index(it, iz);
            grid.scaled_phase[i] =
                eikonal_phase(t, 0.0, 0.0, z, w, ctx) / (w.kz * L);
            grid.amplitude_dev[i] = amplitude_deviation(z, t, w, p, ctx);
            const WaveVector k = wave_vector(t, 0.0, 0.0, z, w, ctx);
            grid.K0_scaled[i] = k.K0 / w.kz;
            grid.Kz_scaled[i] = k.Kz / w.kz;
        }
    }
    return grid;
}

namespace {

// Pieces entering the transport residual; analytic where the solution is
// analytic, finite differences only where a derivative is being validated.
struct TransportPieces {
    double sqrt_g;   // sqrt(-det g) = sqrt(1 + 2 g z/c^2)
    double K_up0;    // contravariant K^0
    double K_upz;    // contravariant K^z
};

TransportPieces pieces_at(double z, const WaveSpec& w, const PhysicalContext& ctx) {
    const double u2 = 2.0 * ctx.g * z / (ctx.c * ctx.c);
    const WaveVector k = wave_vector(0.0, 0.0, 0.0, z, w, ctx);
    TransportPieces pc;
    pc.sqrt_g = std::sqrt(1.0 + u2);
    pc.K_up0 = k.K0 / (1.0 + u2);
    pc.K_upz = -k.Kz;
    return pc;
}

TransportResidual transport_residual_step(double t, double z, double h,
                                          const WaveSpec& w,
                                          const DilatonParams& p,
                                          const PhysicalContext& ctx) {
    const double c2 = ctx.c * ctx.c;
    const double ht = h / ctx.c;  // step in t for the x^0 = ct derivative

    const auto a = [&](double tt, double zz) {
        return amplitude(zz, tt, w, p, ctx);
    };
    // d_mu a by central differences (a depends on t and z only)
    const double da_d0 = (a(t + ht, z) - a(t - ht, z)) / (2.0 * h);
    const double da_dz = (a(t, z + h) - a(t, z - h)) / (2.0 * h);

    // Covariant divergence grad_mu K^mu = (1/sqrt(-g)) d_z (sqrt(-g) K^z);
    // the time part is static. Differenced with the same step.
    const auto sgKz = [&](double zz) {
        const TransportPieces pc = pieces_at(zz, w, ctx);
        return pc.sqrt_g * pc.K_upz;
    };
    const TransportPieces pc = pieces_at(z, w, ctx);
    const double div_K = (sgKz(z + h) - sgKz(z - h)) / (2.0 * h * pc.sqrt_g);

    // (d_mu rho) K^mu, analytic field derivatives
    const double arg = p.omega_rho * t - p.k_rho * z + p.phi_rho;
    const double drho_d0 = -(p.omega_rho / ctx.c) * p.rho0_bar * std::sin(arg);
    const double drho_dz =
        p.k_rho * p.rho0_bar * std::sin(arg) + p.beta_S_bar * ctx.g / c2;
    const double drho_K = drho_d0 * pc.K_up0 + drho_dz * pc.K_upz;

    const double a0 = a(t, z);
    TransportResidual r;
    r.residual = pc.K_up0 * da_d0 + pc.K_upz * da_dz +
                 0.5 * a0 * (div_K - p.d_e * drho_K);

    // Largest retained first-order term of the equation, as the relative
    // scale for tolerances. Gravity terms enter at a_in k0 g/c^2, the
    // oscillating dilaton at a_in k0 d_e rho0_bar max(omega/c, k_rho).
    const double osc_rate = std::fmax(p.omega_rho / ctx.c, p.k_rho);
    const double first_order =
        w.a_in * w.k0 *
        std::fmax(ctx.g / c2 * (1.0 + std::abs(p.d_e * p.beta_S_bar)),
                  std::abs(p.d_e) * p.rho0_bar * osc_rate);
    r.scale = std::fmax(first_order, w.a_in * w.k0 * w.k0 * 1e-300);
    return r;
}

}  // namespace

TransportResidual transport_residual(double t, double z, double h,
                                     const WaveSpec& w, const DilatonParams& p,
                                     const PhysicalContext& ctx) {
    if (!(h > 0.0)) throw physics_error("transport_residual: h must be positive");
    return transport_residual_step(t, z, h, w, p, ctx);
}

TransportResidual transport_residual_extrapolated(double t, double z, double h,
                                                  const WaveSpec& w,
                                                  const DilatonParams& p,
                                                  const PhysicalContext& ctx) {
    const TransportResidual coarse = transport_residual(t, z, h, w, p, ctx);
    const TransportResidual fine = transport_residual(t, z, h / 2.0, w, p, ctx);
    TransportResidual r;
    r.residual = (4.0 * fine.residual - coarse.residual) / 3.0;
    r.scale = fine.scale;
    return r;
}

}  // namespace dilaton::optics
