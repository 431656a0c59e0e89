#pragma once

#include <array>
#include <functional>

#include "dilaton/closed_forms.hpp"
#include "dilaton/phase_engine.hpp"

namespace dilaton::oracle {

using engine::PerturbationTerm;
using geometry::InterferometerSpec;

struct QuadratureConfig {
    double abs_tol = 1e-18;
    double rel_tol = 1e-12;
    long max_subdivisions = 1 << 20;
    // Round-off floor of the integrand per unit length: an interval whose
    // Simpson deviation is below this is accepted as converged-at-noise
    // instead of being subdivided forever. quad_term_phase fills it in from
    // the term's characteristic scales; 0 disables the floor.
    double noise_density = 0.0;

    void validate() const;
};

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    bool converged = true;
    long subdivisions = 0;
};

// Deterministic adaptive Simpson rule: midpoint bisection, left interval
// first, error accepted when |S_fine - S_coarse| <= 15 * local tolerance.
// No randomness, so identical inputs give bit-identical results.
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a,
                              double b, const QuadratureConfig& cfg);

// Independent evaluation of a continuous perturbation term by quadrature of
// -(1/hbar)[H_term(z^u(t),t) - H_term(z^l(t),t)] over each inter-pulse
// segment (segment boundaries coincide with pulse times, so delta-function
// contributions never enter). Continuous kinds only: dilaton_linear,
// dilaton_oscillation.
QuadResult quad_term_phase(const InterferometerSpec& spec, PerturbationTerm term,
                           const QuadratureConfig& cfg);

// Trapezoid-rule evaluation of phi_SA = sqrt((1/pi) Int_0^0..2pi dphi
// delta_phi^2) from dm_differential_phase samples; spectrally accurate for
// this smooth periodic integrand. n >= 16.
double phi_sa_numeric(const forms::DarkMatterPair& pair, int n);

// Central-difference gradient of f(x0, x1, x2, x3) with one Richardson
// level by default; pass richardson = false for the plain second-order
// stencil (used by convergence-order fits).
using ScalarField4 = std::function<double(double, double, double, double)>;

std::array<double, 4> finite_difference_gradient(const ScalarField4& f,
                                                 const std::array<double, 4>& x,
                                                 double h,
                                                 bool richardson = true);

}  // namespace dilaton::oracle
