#pragma once

#include <array>
#include <complex>
#include <vector>

#include "dilaton/core.hpp"

namespace dilaton::optics {

// Sign conventions, fixed here once and used by every routine below:
//   * metric signature (+,-,-,-), coordinates x^mu = (ct, x, y, z),
//     g_00 = 1 + 2 g z/c^2, spatial components -1;
//   * phase Phi = c k0 t - kx x - ky y - kappa(z) with
//     kappa(z) = kz z [1 - g k0^2 z / (2 c^2 kz^2)], kappa(0) = 0;
//   * covariant wave vector K_mu = d_mu Phi:
//       K_0 = k0, K_x = -kx, K_y = -ky,
//       K_z = -kz [1 - g k0^2 z / (c^2 kz^2)];
//   * contravariant components raise with the exact inverse metric,
//     K^0 = K_0 / (1 + 2 g z/c^2), K^j = -K_j.

using complex4 = std::array<std::complex<double>, 4>;

// Monochromatic beam constants. k0 is derived from (kx, ky, kz) so that
// k0^2 = q^2 + kz^2 holds by construction; kz < 0 describes downward
// propagation. The polarization is normalized to |e*_nu e^nu| = 1 at z = 0.
struct WaveSpec {
    double k0 = 0.0;
    double kx = 0.0;
    double ky = 0.0;
    double kz = 0.0;
    double a_in = 1.0;
    complex4 e_in{};

    double q_squared() const { return kx * kx + ky * ky; }

    static WaveSpec from_components(double kx, double ky, double kz,
                                    double a_in, const complex4& e_in);
};

// Local field data at one spacetime point.
struct FieldPoint {
    double phase = 0.0;      // Phi [rad]
    double K[4] = {0, 0, 0, 0};  // covariant K_mu [1/m]
    double amplitude = 0.0;  // a [arb.]
    complex4 polarization{};
};

double eikonal_phase(double t, double x, double y, double z, const WaveSpec& w,
                     const PhysicalContext& ctx);

struct WaveVector {
    double K0 = 0.0, Kx = 0.0, Ky = 0.0, Kz = 0.0;  // covariant components
};

WaveVector wave_vector(double t, double x, double y, double z,
                       const WaveSpec& w, const PhysicalContext& ctx);

// K_mu K^mu / k0^2 with the exact inverse metric; second order in g z/c^2.
double null_residual(const WaveVector& k, double z, const WaveSpec& w,
                     const PhysicalContext& ctx);

// a/a_in - 1; the dilaton piece is evaluated through the removable-
// singularity form sin(x) - (k0/kz)(omega z / 2c) sinc(x), x = k_rho z/2,
// which is finite for every k_rho including 0.
double amplitude_deviation(double z, double t, const WaveSpec& w,
                           const DilatonParams& p, const PhysicalContext& ctx);

double amplitude(double z, double t, const WaveSpec& w, const DilatonParams& p,
                 const PhysicalContext& ctx);

complex4 polarization(double z, const WaveSpec& w, const PhysicalContext& ctx);

// K_mu e^mu (plain index pairing, no metric).
std::complex<double> gauge_contraction(const WaveVector& k, const complex4& e);

// Projects e onto the subspace with K_mu(0) e^mu = 0, then normalizes.
complex4 make_orthogonal_polarization(const complex4& e, const WaveSpec& w);

struct TwoPhotonField {
    double delta_omega = 0.0;  // c (kB - kR) [rad/s]
    double k_eff = 0.0;        // kB + kR [1/m]
    double phase = 0.0;        // Phi_B - Phi_R at (t, z) [rad]
};

// Counterpropagating pair: blue (kB) upward, red (kR) downward, q = 0.
// Differential phase  delta_omega t - k_eff z [1 - g z/(2c^2)].
TwoPhotonField two_photon_effective(double kR, double kB, double t, double z,
                                    const PhysicalContext& ctx);

struct EpsilonScale {
    double epsilon = 0.0;
    bool geometrical_optics_ok = false;  // epsilon < 1e-2
};

EpsilonScale epsilon_scale(double lambda, double L);

// Row-major (t outer, z inner) sampled field data, scaled as in the usual
// spacetime density plots: Phi/(kz L), a/a_in - 1, K_0/kz, K_z/kz.
struct FieldGrid {
    std::vector<double> t;
    std::vector<double> z;
    std::vector<double> scaled_phase;
    std::vector<double> amplitude_dev;
    std::vector<double> K0_scaled;
    std::vector<double> Kz_scaled;
    int nt = 0;
    int nz = 0;
    double L = 0.0;

    std::size_t index(int it, int iz) const {
        return static_cast<std::size_t>(it) * static_cast<std::size_t>(nz) + iz;
    }
};

struct GridRegion {
    double t0 = 0.0, t1 = 0.0;
    double z0 = 0.0, z1 = 0.0;
};

FieldGrid field_grid(const GridRegion& region, int nt, int nz, double L,
                     const WaveSpec& w, const DilatonParams& p,
                     const PhysicalContext& ctx);

// Residual of the transport equation
//   K^mu d_mu a + (a/2) [grad_mu - (d_mu rho) d_e] K^mu = 0
// at (t, z), with d_mu a and the covariant divergence evaluated by central
// differences of step h (h in meters; the time step is h/c). The closed-form
// amplitude satisfies the equation to first order, so the residual converges
// quadratically in h down to the neglected second-order floor. `scale` is the
// largest retained first-order term, for relative tolerances.
struct TransportResidual {
    double residual = 0.0;
    double scale = 0.0;
};

TransportResidual transport_residual(double t, double z, double h,
                                     const WaveSpec& w, const DilatonParams& p,
                                     const PhysicalContext& ctx);

// Richardson-extrapolated variant, (4 R(h/2) - R(h))/3 on each difference.
TransportResidual transport_residual_extrapolated(double t, double z, double h,
                                                  const WaveSpec& w,
                                                  const DilatonParams& p,
                                                  const PhysicalContext& ctx);

FieldPoint field_point(double t, double x, double y, double z,
                       const WaveSpec& w, const DilatonParams& p,
                       const PhysicalContext& ctx);

}  // namespace dilaton::optics
