#include "dilaton/core.hpp"

#include <cmath>

namespace dilaton {

void PhysicalContext::validate() const {
    if (!(c > 0.0)) throw physics_error("PhysicalContext: c must be positive");
    if (!(hbar > 0.0)) throw physics_error("PhysicalContext: hbar must be positive");
    if (!(g >= 0.0)) throw physics_error("PhysicalContext: g must be non-negative");
}

void DilatonParams::validate() const {
    if (!(rho0_bar >= 0.0))
        throw physics_error("DilatonParams: rho0_bar must be non-negative");
    if (!(lambda_rho > 0.0))
        throw physics_error("DilatonParams: lambda_rho must be positive");
    if (!std::isfinite(k_rho) || k_rho < 0.0)
        throw physics_error("DilatonParams: k_rho must be finite and non-negative");
    if (!std::isfinite(omega_rho) || omega_rho < 0.0)
        throw physics_error("DilatonParams: omega_rho must be finite and non-negative");
}

double dispersion(double k_rho, double lambda_rho, const PhysicalContext& ctx) {
    if (k_rho < 0.0) throw physics_error("dispersion: negative k_rho");
    if (!(lambda_rho > 0.0)) throw physics_error("dispersion: lambda_rho must be positive");
    if (std::isinf(lambda_rho)) return ctx.c * k_rho;  // massless, exact
    return ctx.c * std::sqrt(k_rho * k_rho + 1.0 / (lambda_rho * lambda_rho));
}

DilatonParams DilatonParams::with_dispersion(double rho0_bar, double k_rho,
                                             double lambda_rho, double phi_rho,
                                             double beta_S_bar, double d_e,
                                             const PhysicalContext& ctx) {
    DilatonParams p;
    p.rho0_bar = rho0_bar;
    p.k_rho = k_rho;
    p.lambda_rho = lambda_rho;
    p.omega_rho = dispersion(k_rho, lambda_rho, ctx);
    p.phi_rho = phi_rho;
    p.beta_S_bar = beta_S_bar;
    p.d_e = d_e;
    p.validate();
    return p;
}

FieldSample dilaton_value(double t, double z, const DilatonParams& p,
                          const PhysicalContext& ctx) {
    FieldSample s;
    s.value = p.rho0_bar * std::cos(p.omega_rho * t - p.k_rho * z + p.phi_rho) +
              p.beta_S_bar * ctx.g * z / (ctx.c * ctx.c);
    // Spaceborne setups (g = 0) drop the sourced term and may run with any
    // Compton wavelength, so this is a flag rather than an error.
    s.light_dilaton_ok = !(p.lambda_rho < 10.0 * std::abs(z));
    return s;
}

double dilaton_gravitational_exact(double z, const DilatonParams& p,
                                   const PhysicalContext& ctx) {
    if (z < 0.0)
        throw physics_error("dilaton_gravitational_exact: z must be >= 0 (outside the source plane)");
    const double c2 = ctx.c * ctx.c;
    if (std::isinf(p.lambda_rho)) {
        // lambda * sin(x/lambda) -> x as lambda -> inf
        return p.beta_S_bar * ctx.g * (1.0 - ctx.g * z / (2.0 * c2)) * z / c2;
    }
    const double arg = (1.0 - ctx.g * z / (2.0 * c2)) * z / p.lambda_rho;
    return p.beta_S_bar * ctx.g * p.lambda_rho * std::sin(arg) / c2;
}

double klein_gordon_residual(const DilatonParams& p, const PhysicalContext& ctx,
                             const Grid2D& grid) {
    if (grid.nt < 3 || grid.nz < 3)
        throw physics_error("klein_gordon_residual: need at least 3 points per axis");
    if (!(grid.t1 > grid.t0) || !(grid.z1 > grid.z0))
        throw physics_error("klein_gordon_residual: degenerate grid extent");

    const double dt = (grid.t1 - grid.t0) / (grid.nt - 1);
    const double dz = (grid.z1 - grid.z0) / (grid.nz - 1);
    const double dx0 = ctx.c * dt;  // x^0 = c t
    const double inv_lambda_sq =
        std::isinf(p.lambda_rho) ? 0.0 : 1.0 / (p.lambda_rho * p.lambda_rho);

    const auto rho_h = [&](double t, double z) {
        return p.rho0_bar * std::cos(p.omega_rho * t - p.k_rho * z + p.phi_rho);
    };

    // Massive Klein-Gordon operator (d_0^2 - d_z^2 + 1/lambda^2), the sign
    // under which the plane wave with omega^2 = (ck)^2 + (c/lambda)^2 is a
    // solution.
    double max_residual = 0.0;
    for (int it = 1; it + 1 < grid.nt; ++it) {
        const double t = grid.t0 + it * dt;
        for (int iz = 1; iz + 1 < grid.nz; ++iz) {
            const double z = grid.z0 + iz * dz;
            const double center = rho_h(t, z);
            const double d2t = (rho_h(t + dt, z) - 2.0 * center + rho_h(t - dt, z)) / (dx0 * dx0);
            const double d2z = (rho_h(t, z + dz) - 2.0 * center + rho_h(t, z - dz)) / (dz * dz);
            const double residual = d2t - d2z + center * inv_lambda_sq;
            max_residual = std::fmax(max_residual, std::abs(residual));
        }
    }
    return max_residual;
}

}  // namespace dilaton
