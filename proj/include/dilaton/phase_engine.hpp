#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dilaton/geometry.hpp"

namespace dilaton::engine {

using geometry::InterferometerSpec;

// First-order perturbations to the free-fall-plus-kicks Hamiltonian.
//   wave_vector_mod    hbar kick * g z^2/(2c^2) delta(t - t_n)
//   dilaton_linear     m g beta z
//   dilaton_oscillation m c^2 rho0 cos(omega_rho t - k_rho z + phi_rho)
//   fsl                finite-speed-of-light correction (Mach-Zehnder only)
enum class PerturbationTerm {
    wave_vector_mod,
    dilaton_linear,
    dilaton_oscillation,
    fsl,
};

const char* term_name(PerturbationTerm term);

struct PhaseBreakdown {
    double phi0 = 0.0;
    std::vector<std::pair<PerturbationTerm, double>> terms;
    double phi_fsl = 0.0;
    double total = 0.0;

    double term(PerturbationTerm kind) const;  // 0 if absent
};

// Flat name -> radians records of the breakdown.
std::string to_json(const PhaseBreakdown& breakdown);
std::string to_csv(const PhaseBreakdown& breakdown);  // header + one row

// Kick-sum phase of the unperturbed Hamiltonian for a closed geometry,
//   phi0 = sum_n [k_n^u z^u(t_n) - k_n^l z^l(t_n)] + laser phases,
// with pre-kick positions. Reduces to -k g T^2 for the Mach-Zehnder.
double phi0(const InterferometerSpec& spec);

// -(1/hbar) Int dt [H_term(z^u(t),t) - H_term(z^l(t),t)] along the
// unperturbed branches. Delta-function kinds collapse to discrete sums at
// the pulse times; continuous kinds integrate exactly over each parabolic
// segment (the oscillation term with g != 0 falls back to adaptive
// quadrature, the only case without an elementary antiderivative).
double term_phase(const InterferometerSpec& spec, PerturbationTerm term);

// phi_FSL = -3 k g T^2 v_T / c with v_T = v0 - g T + hbar k/m, the upper
// branch velocity just before the central pulse. Defined for the
// Mach-Zehnder geometry only.
double fsl_phase(const InterferometerSpec& spec);

// H_term(z, t) in joules for the continuous kinds (dilaton_linear,
// dilaton_oscillation); shared by the analytic path and the quadrature
// oracle, which integrate it independently.
double perturbation_hamiltonian(const InterferometerSpec& spec,
                                PerturbationTerm term, double z, double t);

PhaseBreakdown total_phase(const InterferometerSpec& spec,
                           std::span<const PerturbationTerm> terms);

}  // namespace dilaton::engine
