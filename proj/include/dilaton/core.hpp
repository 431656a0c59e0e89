#pragma once

#include <limits>

#include "dilaton/math_util.hpp"

namespace dilaton {

// Shared physical constants plus the local gravitational acceleration.
// g = 0 is allowed and describes spaceborne (microgravity) scenarios.
struct PhysicalContext {
    double c = 299792458.0;         // speed of light [m/s]
    double hbar = 1.054571817e-34;  // reduced Planck constant [J s]
    double g = 9.81;                // gravitational acceleration [m/s^2]

    void validate() const;

    static PhysicalContext si(double g_value = 9.81) {
        PhysicalContext ctx;
        ctx.g = g_value;
        ctx.validate();
        return ctx;
    }
};

// Background dilaton field
//
//   rho(t,z) = rho0_bar cos(omega_rho t - k_rho z + phi_rho) + beta_S_bar g z / c^2
//
// and its couplings. lambda_rho is the reduced Compton wavelength; infinity
// means a massless dilaton with omega_rho = c k_rho exactly.
struct DilatonParams {
    double rho0_bar = 0.0;    // oscillation amplitude [dimensionless]
    double k_rho = 0.0;       // wave number [1/m]
    double omega_rho = 0.0;   // angular frequency [rad/s]
    double phi_rho = 0.0;     // initial phase [rad]
    double lambda_rho = std::numeric_limits<double>::infinity();  // [m]
    double beta_S_bar = 0.0;  // source-mass expansion coefficient
    double d_e = 0.0;         // EM coupling

    void validate() const;

    // Builds params with omega_rho fixed by the dispersion relation.
    static DilatonParams with_dispersion(double rho0_bar, double k_rho,
                                         double lambda_rho, double phi_rho,
                                         double beta_S_bar, double d_e,
                                         const PhysicalContext& ctx);
};

// omega_rho = c sqrt(k_rho^2 + 1/lambda_rho^2). lambda_rho = inf returns
// c*k_rho exactly (no sqrt round-off in the massless limit).
double dispersion(double k_rho, double lambda_rho, const PhysicalContext& ctx);

// Field value plus a validity flag for the light-dilaton assumption
// lambda_rho >> z under which the sourced term reduces to beta_S_bar g z/c^2.
struct FieldSample {
    double value = 0.0;
    bool light_dilaton_ok = true;
};

FieldSample dilaton_value(double t, double z, const DilatonParams& p,
                          const PhysicalContext& ctx);

// Pre-limit sourced field rho_g(z) = beta_S_bar g lambda_rho
// sin([1 - g z/(2c^2)] z/lambda_rho) / c^2, valid without lambda_rho >> z.
double dilaton_gravitational_exact(double z, const DilatonParams& p,
                                   const PhysicalContext& ctx);

// Uniform (t,z) sampling rectangle for the residual validator.
struct Grid2D {
    double t0 = 0.0, t1 = 1.0;
    int nt = 3;
    double z0 = 0.0, z1 = 1.0;
    int nz = 3;
};

// Max |(d^2_0 - d^2_z) rho_h - rho_h/lambda^2| over interior grid nodes,
// second-order central differences on the homogeneous (oscillating) part.
// Converges to zero quadratically in the spacing iff the dispersion relation
// holds.
double klein_gordon_residual(const DilatonParams& p, const PhysicalContext& ctx,
                             const Grid2D& grid);

}  // namespace dilaton
