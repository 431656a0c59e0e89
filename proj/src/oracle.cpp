#include "dilaton/oracle.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace dilaton::oracle {

void QuadratureConfig::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
        throw physics_error("QuadratureConfig: tolerances must be positive");
    if (max_subdivisions < 1)
        throw physics_error("QuadratureConfig: max_subdivisions must be >= 1");
}

namespace {

double simpson(double fa, double fm, double fb, double h) {
    return h / 6.0 * (fa + 4.0 * fm + fb);
}

}  // namespace

QuadResult integrate_adaptive(const std::function<double(double)>& f, double a,
                              double b, const QuadratureConfig& cfg) {
    cfg.validate();
    QuadResult result;
    if (a == b) return result;

    // Crude magnitude scan fixes the scale for the relative tolerance.
    double f_max = 0.0;
    constexpr int kScanPoints = 33;
    for (int i = 0; i < kScanPoints; ++i) {
        const double x = a + (b - a) * i / (kScanPoints - 1);
        f_max = std::fmax(f_max, std::abs(f(x)));
    }
    const double total_length = std::abs(b - a);
    const double eps = std::fmax(cfg.abs_tol, cfg.rel_tol * f_max * total_length);

    struct Interval {
        double a, b, fa, fm, fb, coarse;
    };
    std::vector<Interval> stack;
    {
        const double m = 0.5 * (a + b);
        const double fa = f(a), fm = f(m), fb = f(b);
        stack.push_back({a, b, fa, fm, fb, simpson(fa, fm, fb, b - a)});
    }

    while (!stack.empty()) {
        const Interval iv = stack.back();
        stack.pop_back();
        const double m = 0.5 * (iv.a + iv.b);
        const double lm = 0.5 * (iv.a + m);
        const double rm = 0.5 * (m + iv.b);
        const double flm = f(lm);
        const double frm = f(rm);
        const double left = simpson(iv.fa, flm, iv.fm, m - iv.a);
        const double right = simpson(iv.fm, frm, iv.fb, iv.b - m);
        const double fine = left + right;
        const double deviation = fine - iv.coarse;
        const double len = std::abs(iv.b - iv.a);
        const double local_tol =
            std::fmax(eps * len / total_length, cfg.noise_density * len);

        if (std::abs(deviation) <= 15.0 * local_tol ||
            result.subdivisions >= cfg.max_subdivisions) {
            if (std::abs(deviation) > 15.0 * local_tol) result.converged = false;
            result.value += fine + deviation / 15.0;
            result.error_estimate += std::abs(deviation) / 15.0;
            continue;
        }
        ++result.subdivisions;
        // Right pushed first so the left half is processed next:
        // deterministic left-to-right accumulation order.
        stack.push_back({m, iv.b, iv.fm, frm, iv.fb, right});
        stack.push_back({iv.a, m, iv.fa, flm, iv.fm, left});
    }
    return result;
}

QuadResult quad_term_phase(const InterferometerSpec& spec, PerturbationTerm term,
                           const QuadratureConfig& cfg) {
    cfg.validate();
    spec.validate();
    if (term != PerturbationTerm::dilaton_linear &&
        term != PerturbationTerm::dilaton_oscillation)
        throw physics_error("quad_term_phase: continuous perturbation kinds only");
    if (!geometry::is_closed(spec))
        throw physics_error("quad_term_phase: interferometer is not closed in phase space");

    const geometry::BranchPair branches = geometry::trajectories(spec);
    const auto integrand = [&](double t) {
        const double hu = engine::perturbation_hamiltonian(
            spec, term, branches.upper.position(t), t);
        const double hl = engine::perturbation_hamiltonian(
            spec, term, branches.lower.position(t), t);
        return -(hu - hl) / spec.ctx.hbar;
    };

    // The integrand is a pointwise difference of nearly equal Hamiltonians,
    // so its jitter floor scales with the undifferenced magnitude, not with
    // the difference. Below that floor subdivision cannot help.
    QuadratureConfig local = cfg;
    {
        const auto& s = spec.species;
        const double c2 = spec.ctx.c * spec.ctx.c;
        const double big =
            term == PerturbationTerm::dilaton_linear
                ? std::abs(s.m * spec.ctx.g * s.beta) *
                      geometry::characteristic_scales(spec).z
                : std::abs(s.m * c2 * s.rho0) * 2.0;
        constexpr double eps_mach = 2.2e-16;
        local.noise_density =
            std::fmax(local.noise_density, 32.0 * eps_mach * big / spec.ctx.hbar);
    }

    // Segment boundaries coincide with pulse times, keeping the delta
    // contributions out of the continuous integrals.
    QuadResult total;
    for (std::size_t n = 0; n + 1 < spec.pulses.size(); ++n) {
        const QuadResult seg = integrate_adaptive(
            integrand, spec.pulses[n].t, spec.pulses[n + 1].t, local);
        total.value += seg.value;
        total.error_estimate += seg.error_estimate;
        total.converged = total.converged && seg.converged;
        total.subdivisions += seg.subdivisions;
    }
    return total;
}

double phi_sa_numeric(const forms::DarkMatterPair& pair, int n) {
    if (n < 16) throw physics_error("phi_sa_numeric: need at least 16 samples");
    forms::DarkMatterPair sample = pair;
    const double h = 2.0 * std::numbers::pi / n;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        sample.phi_rho = i * h;
        sum += sq(forms::dm_differential_phase(sample));
    }
    return std::sqrt(sum * h / std::numbers::pi);
}

std::array<double, 4> finite_difference_gradient(const ScalarField4& f,
                                                 const std::array<double, 4>& x,
                                                 double h, bool richardson) {
    if (!(h > 0.0)) throw physics_error("finite_difference_gradient: h must be positive");
    const auto central = [&](int axis, double step) {
        std::array<double, 4> hi = x, lo = x;
        hi[axis] += step;
        lo[axis] -= step;
        return (f(hi[0], hi[1], hi[2], hi[3]) - f(lo[0], lo[1], lo[2], lo[3])) /
               (2.0 * step);
    };
    std::array<double, 4> grad{};
    for (int axis = 0; axis < 4; ++axis) {
        if (richardson) {
            const double coarse = central(axis, h);
            const double fine = central(axis, h / 2.0);
            grad[axis] = (4.0 * fine - coarse) / 3.0;
        } else {
            grad[axis] = central(axis, h);
        }
    }
    return grad;
}

}  // namespace dilaton::oracle
