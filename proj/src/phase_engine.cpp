#include "dilaton/phase_engine.hpp"

#include <cmath>
#include <set>

#include "dilaton/csv.hpp"
#include "dilaton/oracle.hpp"

namespace dilaton::engine {

using geometry::BranchPair;

const char* term_name(PerturbationTerm term) {
    switch (term) {
        case PerturbationTerm::wave_vector_mod: return "wave_vector_mod";
        case PerturbationTerm::dilaton_linear: return "dilaton_linear";
        case PerturbationTerm::dilaton_oscillation: return "dilaton_oscillation";
        case PerturbationTerm::fsl: return "fsl";
    }
    throw physics_error("term_name: unknown perturbation term");
}

double PhaseBreakdown::term(PerturbationTerm kind) const {
    for (const auto& [k, v] : terms) {
        if (k == kind) return v;
    }
    return 0.0;
}

std::string to_json(const PhaseBreakdown& breakdown) {
    std::string out = "{\"phi0_rad\":" + csv::format_double(breakdown.phi0);
    for (const auto& [kind, value] : breakdown.terms) {
        out += std::string(",\"") + term_name(kind) + "_rad\":" +
               csv::format_double(value);
    }
    out += ",\"fsl_rad\":" + csv::format_double(breakdown.phi_fsl);
    out += ",\"total_rad\":" + csv::format_double(breakdown.total);
    out += "}";
    return out;
}

std::string to_csv(const PhaseBreakdown& breakdown) {
    std::vector<std::string> names{"phi0_rad"};
    std::vector<double> values{breakdown.phi0};
    for (const auto& [kind, value] : breakdown.terms) {
        names.push_back(std::string(term_name(kind)) + "_rad");
        values.push_back(value);
    }
    names.insert(names.end(), {"fsl_rad", "total_rad"});
    values.insert(values.end(), {breakdown.phi_fsl, breakdown.total});
    return csv::row(names) + csv::row_values(values);
}

namespace {

int kick_sign(double k) { return (k > 0.0) - (k < 0.0); }

void require_closed(const InterferometerSpec& spec, const char* who) {
    if (!geometry::is_closed(spec))
        throw physics_error(std::string(who) + ": interferometer is not closed in phase space");
}

// Int_0^D [cos(arg_u) - cos(arg_l)] dt over one inter-pulse segment with
// linear motion on both branches. The physical signal is the small remnant
// of the branch difference (suppressed by k_rho times the separation), so
// the difference is extracted analytically: with mean phase M(t) = M0 + m t
// and half-difference D(t) = D0 + d t (D0, d exact in the kick domain),
//   cos(arg_u) - cos(arg_l) = -2 sin(M) sin(D)
// and the integral splits into sin(D0)/cos(D0) times sums and stable
// differences of elementary sinc-cosine integrals.
double oscillation_segment_difference(double M0, double m_rate, double D0,
                                      double d_rate, double dt) {
    const double half = dt / 2.0;
    const double xm = m_rate * half;   // mean rate argument
    const double xd = d_rate * half;   // difference rate argument (small)
    const double Mc = M0 + xm;         // mean phase at segment midpoint

    // -2 sin(D0) * (C+ + C-)/2 with C+- = dt sinc(xm +- xd) sin(Mc +- xd)
    const double sinc_p = sinc(xm + xd);
    const double sinc_m = sinc(xm - xd);
    const double sum_part =
        -std::sin(D0) * dt *
        (sinc_p * std::sin(Mc + xd) + sinc_m * std::sin(Mc - xd));

    // -2 cos(D0) * (S- - S+)/2 with S+- = dt sinc(xm +- xd) cos(Mc +- xd);
    // the difference is expanded so every piece carries one small factor.
    const double diff_part =
        -std::cos(D0) * dt *
        ((sinc_p + sinc_m) * std::sin(Mc) * std::sin(xd) -
         sinc_diff(xm, xd) * std::cos(Mc) * std::cos(xd));

    return sum_part + diff_part;
}

double oscillation_phase_linear(const InterferometerSpec& spec) {
    const auto& d = spec.dilaton;
    const BranchPair branches = geometry::trajectories(spec);
    const auto seps = geometry::separation_segments(spec);
    const auto& upper = branches.upper.segments();
    const auto& lower = branches.lower.segments();

    double integral = 0.0;  // Int [cos(arg_u) - cos(arg_l)] dt
    for (std::size_t n = 0; n < seps.size(); ++n) {
        // Segment n starts at pulse n; index n+1 skips the zero-length
        // pre-kick lead segment of each branch trajectory.
        const auto& seg_u = upper[n + 1];
        const auto& seg_l = lower[n + 1];
        const double dt = seg_u.t_end - seg_u.t_start;
        if (dt == 0.0) continue;
        const double mean_z = 0.5 * (seg_u.z_start + seg_l.z_start);
        const double mean_v = 0.5 * (seg_u.v_start + seg_l.v_start);
        const double M0 = d.omega_rho * seg_u.t_start - d.k_rho * mean_z + d.phi_rho;
        const double m_rate = d.omega_rho - d.k_rho * mean_v;
        const double D0 = -d.k_rho * seps[n].dz_start / 2.0;
        const double d_rate = -d.k_rho * seps[n].dv / 2.0;
        integral += oscillation_segment_difference(M0, m_rate, D0, d_rate, dt);
    }
    const auto& s = spec.species;
    const double c = spec.ctx.c;
    return -(s.m * c * c * s.rho0 / spec.ctx.hbar) * integral;
}

double oscillation_phase_quadrature(const InterferometerSpec& spec) {
    oracle::QuadratureConfig cfg;
    cfg.rel_tol = 1e-13;
    const oracle::QuadResult r = oracle::quad_term_phase(
        spec, PerturbationTerm::dilaton_oscillation, cfg);
    if (!r.converged)
        throw std::runtime_error(
            "dilaton_oscillation: quadrature did not converge for g != 0 segment");
    return r.value;
}

}  // namespace

double perturbation_hamiltonian(const InterferometerSpec& spec,
                                PerturbationTerm term, double z, double t) {
    const auto& s = spec.species;
    const auto& d = spec.dilaton;
    const double c = spec.ctx.c;
    switch (term) {
        case PerturbationTerm::dilaton_linear:
            return s.m * spec.ctx.g * s.beta * z;
        case PerturbationTerm::dilaton_oscillation:
            return s.m * c * c * s.rho0 *
                   std::cos(d.omega_rho * t - d.k_rho * z + d.phi_rho);
        default:
            throw physics_error("perturbation_hamiltonian: not a continuous term");
    }
}

double phi0(const InterferometerSpec& spec) {
    spec.validate();
    require_closed(spec, "phi0");
    // Split z^s(t) = Z(t) + d^s(t) into the shared free fall Z = z0 + v0 t
    // - g t^2/2 and the kick-induced displacement d^s. The Z part collapses
    // to weighted kick sums (zero for closed geometries up to the g moment)
    // and the d part involves kicks and times only, so a g = 0 geometry
    // yields an exact floating-point zero instead of cancellation noise.
    const double inv_m = 1.0 / spec.species.m;
    const double hbar = spec.ctx.hbar;
    double kick_sum = 0.0;        // sum (k_u - k_l)
    double kick_t_sum = 0.0;      // sum (k_u - k_l) t_n
    double kick_t2_sum = 0.0;     // sum (k_u - k_l) t_n^2
    double cross_sum = 0.0;       // sum [k_u d_u(t_n) - k_l d_l(t_n)]
    double laser_sum = 0.0;
    double d_upper = 0.0, d_lower = 0.0;      // kick displacements, pre-kick
    double vd_upper = 0.0, vd_lower = 0.0;    // kick velocity sums
    double t_prev = spec.t_first();
    for (const auto& pulse : spec.pulses) {
        const double dt = pulse.t - t_prev;
        d_upper += vd_upper * dt;
        d_lower += vd_lower * dt;
        t_prev = pulse.t;

        const double dk = pulse.kick_upper - pulse.kick_lower;
        kick_sum += dk;
        kick_t_sum += dk * pulse.t;
        kick_t2_sum += dk * (pulse.t * pulse.t);
        cross_sum += pulse.kick_upper * d_upper - pulse.kick_lower * d_lower;
        laser_sum += pulse.laser_phase *
                     (kick_sign(pulse.kick_upper) - kick_sign(pulse.kick_lower));

        vd_upper += hbar * pulse.kick_upper * inv_m;
        vd_lower += hbar * pulse.kick_lower * inv_m;
    }
    return spec.z0 * kick_sum + spec.v0 * kick_t_sum -
           0.5 * spec.ctx.g * kick_t2_sum + cross_sum + laser_sum;
}

double fsl_phase(const InterferometerSpec& spec) {
    spec.validate();
    double T = 0.0;
    double k = 0.0;
    if (!geometry::is_mach_zehnder(spec, &T, &k))
        throw physics_error("fsl_phase: defined for the Mach-Zehnder geometry only");
    const double g = spec.ctx.g;
    const double c = spec.ctx.c;
    const double v_T = spec.v0 - g * T + spec.ctx.hbar * k / spec.species.m;
    return -(k * g * T * T) * 3.0 * (v_T / c);
}

double term_phase(const InterferometerSpec& spec, PerturbationTerm term) {
    spec.validate();
    require_closed(spec, "term_phase");
    const double g = spec.ctx.g;
    const double c2 = spec.ctx.c * spec.ctx.c;

    switch (term) {
        case PerturbationTerm::wave_vector_mod: {
            // -(1/hbar) Int V dt with V = +hbar kick g z^2/(2c^2) delta(t-t_n),
            // pre-kick positions.
            const BranchPair branches = geometry::trajectories(spec);
            double sum = 0.0;
            for (const auto& pulse : spec.pulses) {
                sum += pulse.kick_upper * sq(branches.upper.position(pulse.t)) -
                       pulse.kick_lower * sq(branches.lower.position(pulse.t));
            }
            return -g / (2.0 * c2) * sum;
        }
        case PerturbationTerm::dilaton_linear: {
            // -(m g beta/hbar) Int (z_u - z_l) dt; the separation is piecewise
            // linear, so each segment integrates exactly.
            double integral = 0.0;
            for (const auto& seg : geometry::separation_segments(spec)) {
                const double dt = seg.t_end - seg.t_start;
                integral += seg.dz_start * dt + 0.5 * seg.dv * dt * dt;
            }
            return -(spec.species.m * g * spec.species.beta / spec.ctx.hbar) *
                   integral;
        }
        case PerturbationTerm::dilaton_oscillation: {
            if (spec.species.rho0 == 0.0) return 0.0;
            if (g == 0.0) return oscillation_phase_linear(spec);
            // Quadratic phase (Fresnel) segments have no elementary
            // antiderivative; adaptive quadrature is the evaluation path.
            return oscillation_phase_quadrature(spec);
        }
        case PerturbationTerm::fsl:
            return fsl_phase(spec);
    }
    throw physics_error("term_phase: unknown perturbation term");
}

PhaseBreakdown total_phase(const InterferometerSpec& spec,
                           std::span<const PerturbationTerm> terms) {
    spec.validate();
    require_closed(spec, "total_phase");
    PhaseBreakdown breakdown;
    breakdown.phi0 = phi0(spec);
    double sum = breakdown.phi0;
    std::set<PerturbationTerm> seen;
    for (const PerturbationTerm term : terms) {
        if (!seen.insert(term).second)
            throw physics_error("total_phase: duplicate perturbation term");
        const double value = term_phase(spec, term);
        if (term == PerturbationTerm::fsl) {
            breakdown.phi_fsl = value;
        } else {
            breakdown.terms.emplace_back(term, value);
        }
        sum += value;
    }
    breakdown.total = sum;
    return breakdown;
}

}  // namespace dilaton::engine
