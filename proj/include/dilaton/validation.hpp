#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dilaton/closed_forms.hpp"

namespace dilaton::validation {

using geometry::InterferometerSpec;

struct CheckRow {
    std::string check;
    std::string detail;
    double value = 0.0;
    double reference = 0.0;
    double deviation = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct Report {
    std::vector<CheckRow> rows;
    bool all_pass() const;
    std::string to_csv() const;
};

struct ValidationConfig {
    std::uint64_t seed = 20240915;
    int draws_triangulation = 50;
    int draws_k_reversal = 1000;
    int draws_dm_limits = 100;
    int draws_phi_sa = 100;
    int draws_closure = 100;
    int phi_sa_samples = 10000;
    double rel_tol = 1e-8;
    double abs_floor = 1e-30;  // [rad]
};

// Random Mach-Zehnder draw shared by the validation battery and tests:
// T, k, m log-uniform over [1e-3,10] s, [1e5,1e8] 1/m, [1e-26,1e-24] kg,
// |beta| <= 1e-6, z0 and v0 uniform in [-1,1], g alternating {0, 9.81}.
struct MzDraw {
    forms::SinglePhaseParams params;
    InterferometerSpec spec;
};

MzDraw draw_mz(std::uint64_t seed, int index);

struct EepDraw {
    forms::EepPair pair;
    double g = 9.81;
    double T = 1.0;
};

EepDraw draw_eep(std::uint64_t seed, int index);

forms::DarkMatterPair draw_dm_pair(std::uint64_t seed, int index);

// Engine / closed-form / oracle agreement, term by term, over random
// Mach-Zehnder draws. The continuous dilaton_linear term is triangulated
// against adaptive quadrature; the delta-function and FSL terms are exact
// sums checked engine against closed form.
Report triangulation(const ValidationConfig& cfg);

// (theta_+k - theta_-k)/2 against the closed five-term expression, plus
// argwise invariance of the k-free form under doubling of all kicks.
Report k_reversal_identity(const ValidationConfig& cfg);

// Vanishing signal amplitude for a massless dilaton (omega = c k_rho) and
// for vanishing dilaton recoil (k_rho = 0).
Report dm_limits(const ValidationConfig& cfg);

// phi_sa_numeric (trapezoid over phi_rho) against the closed amplitude.
Report phi_sa_definition(const ValidationConfig& cfg);

// Null condition scaling, gauge orthogonality, dilaton-independence of the
// phase, and transport-residual convergence.
Report optics_invariants();

// Exact Mach-Zehnder closure and trajectories against the symplectic-Euler
// time stepper at dt = 1e-6 T.
Report closure_kinematics(const ValidationConfig& cfg);

// Full battery in the order above.
Report run_all(const ValidationConfig& cfg);

// Independent time-stepping oracle: semi-implicit (symplectic) Euler with
// kicks applied between segments; n_steps per inter-pulse segment.
struct SteppedState {
    double z = 0.0;
    double v = 0.0;
};

SteppedState symplectic_euler_state(const InterferometerSpec& spec, bool upper,
                                    double t_query, long n_steps_per_segment);

}  // namespace dilaton::validation
