#include "dilaton/geometry.hpp"

#include <cmath>
#include <sstream>

#include "dilaton/csv.hpp"

namespace dilaton::geometry {

void Species::validate() const {
    if (!(m > 0.0)) throw physics_error("Species: mass must be positive");
    if (!std::isfinite(beta) || !std::isfinite(rho0))
        throw physics_error("Species: couplings must be finite");
}

void InterferometerSpec::validate() const {
    ctx.validate();
    species.validate();
    dilaton.validate();
    if (pulses.size() < 2)
        throw physics_error("InterferometerSpec: need at least 2 pulses");
    for (std::size_t i = 1; i < pulses.size(); ++i) {
        if (!(pulses[i].t > pulses[i - 1].t))
            throw physics_error("InterferometerSpec: pulse times must be strictly increasing");
    }
}

InterferometerSpec mach_zehnder(double T, double k, const Species& species,
                                double z0, double v0, const DilatonParams& dilaton,
                                const PhysicalContext& ctx, double t0) {
    if (!(T > 0.0)) throw physics_error("mach_zehnder: T must be positive");
    if (k == 0.0) throw physics_error("mach_zehnder: k must be nonzero");
    InterferometerSpec spec;
    spec.species = species;
    spec.z0 = z0;
    spec.v0 = v0;
    spec.dilaton = dilaton;
    spec.ctx = ctx;
    spec.pulses = {
        {t0, k, 0.0, 0.0},
        {t0 + T, -k, k, 0.0},
        {t0 + 2.0 * T, 0.0, -k, 0.0},
    };
    spec.validate();
    return spec;
}

BranchTrajectory::BranchTrajectory(std::vector<TrajectorySegment> segments,
                                   double g, double final_velocity)
    : segments_(std::move(segments)), g_(g), final_velocity_(final_velocity) {}

const TrajectorySegment& BranchTrajectory::segment_at(double t) const {
    if (t < segments_.front().t_start || t > segments_.back().t_end)
        throw physics_error("BranchTrajectory: query outside time domain");
    // Pre-kick convention: at an interior pulse time the earlier segment is
    // used, so segments are treated as (t_start, t_end].
    for (const auto& seg : segments_) {
        if (t <= seg.t_end) return seg;
    }
    return segments_.back();
}

double BranchTrajectory::position(double t) const {
    const TrajectorySegment& seg = segment_at(t);
    const double dt = t - seg.t_start;
    return seg.z_start + seg.v_start * dt - 0.5 * g_ * dt * dt;
}

double BranchTrajectory::velocity(double t) const {
    const TrajectorySegment& seg = segment_at(t);
    return seg.v_start - g_ * (t - seg.t_start);
}

namespace {

BranchTrajectory build_branch(const InterferometerSpec& spec, bool upper) {
    const double g = spec.ctx.g;
    const double inv_m = 1.0 / spec.species.m;
    double z = spec.z0;
    double v = spec.v0;
    std::vector<TrajectorySegment> segments;

    // Zero-length lead segment carries the pre-kick initial state at the
    // first pulse time, keeping the pre-kick reporting rule uniform.
    segments.push_back({spec.t_first(), spec.t_first(), z, v});

    for (std::size_t n = 0; n + 1 < spec.pulses.size(); ++n) {
        const PulseEvent& pulse = spec.pulses[n];
        const double kick = upper ? pulse.kick_upper : pulse.kick_lower;
        v += spec.ctx.hbar * kick * inv_m;
        segments.push_back({pulse.t, spec.pulses[n + 1].t, z, v});
        const double dt = spec.pulses[n + 1].t - pulse.t;
        z = z + v * dt - 0.5 * g * dt * dt;
        v -= g * dt;
    }
    const PulseEvent& last = spec.pulses.back();
    const double final_v =
        v + spec.ctx.hbar * (upper ? last.kick_upper : last.kick_lower) * inv_m;
    return BranchTrajectory(std::move(segments), g, final_v);
}

}  // namespace

BranchPair trajectories(const InterferometerSpec& spec) {
    spec.validate();
    return {build_branch(spec, true), build_branch(spec, false)};
}

std::vector<SeparationSegment> separation_segments(const InterferometerSpec& spec) {
    std::vector<SeparationSegment> segments;
    double dz = 0.0;
    double dv = 0.0;
    for (std::size_t n = 0; n + 1 < spec.pulses.size(); ++n) {
        const PulseEvent& pulse = spec.pulses[n];
        // Same expression as closure_check's final kick: power-of-two kick
        // patterns then cancel bit-exactly.
        dv += spec.ctx.hbar * (pulse.kick_upper - pulse.kick_lower) / spec.species.m;
        segments.push_back({pulse.t, spec.pulses[n + 1].t, dz, dv});
        dz += dv * (spec.pulses[n + 1].t - pulse.t);
    }
    return segments;
}

ClosureReport closure_check(const InterferometerSpec& spec) {
    spec.validate();
    const auto segments = separation_segments(spec);
    const PulseEvent& last = spec.pulses.back();
    ClosureReport report;
    report.dz_final =
        segments.back().dz_start +
        segments.back().dv * (segments.back().t_end - segments.back().t_start);
    report.dv_final = segments.back().dv + spec.ctx.hbar *
                          (last.kick_upper - last.kick_lower) / spec.species.m;
    return report;
}

CharacteristicScales characteristic_scales(const InterferometerSpec& spec) {
    const double T_tot = spec.t_last() - spec.t_first();
    double kick_speed = 0.0;
    for (const auto& pulse : spec.pulses) {
        kick_speed += std::abs(spec.ctx.hbar * pulse.kick_upper / spec.species.m);
        kick_speed += std::abs(spec.ctx.hbar * pulse.kick_lower / spec.species.m);
    }
    CharacteristicScales s;
    s.v = std::abs(spec.v0) + spec.ctx.g * T_tot + kick_speed;
    s.z = std::abs(spec.z0) + s.v * T_tot;
    return s;
}

bool is_closed(const InterferometerSpec& spec) {
    const ClosureReport report = closure_check(spec);
    const CharacteristicScales s = characteristic_scales(spec);
    return std::abs(report.dz_final) <= 1e-12 * s.z &&
           std::abs(report.dv_final) <= 1e-12 * s.v;
}

namespace {

bool nearly(double a, double b, double scale) {
    return std::abs(a - b) <= 1e-12 * scale;
}

}  // namespace

bool is_mach_zehnder(const InterferometerSpec& spec, double* T_out, double* k_out) {
    if (spec.pulses.size() != 3) return false;
    const double k = spec.pulses[0].kick_upper;
    if (k == 0.0) return false;
    const double dt1 = spec.pulses[1].t - spec.pulses[0].t;
    const double dt2 = spec.pulses[2].t - spec.pulses[1].t;
    const double ka = std::abs(k);
    if (!nearly(dt1, dt2, std::abs(dt1) + std::abs(dt2))) return false;
    if (!nearly(spec.pulses[0].kick_lower, 0.0, ka)) return false;
    if (!nearly(spec.pulses[1].kick_upper, -k, ka)) return false;
    if (!nearly(spec.pulses[1].kick_lower, k, ka)) return false;
    if (!nearly(spec.pulses[2].kick_upper, 0.0, ka)) return false;
    if (!nearly(spec.pulses[2].kick_lower, -k, ka)) return false;
    if (T_out) *T_out = dt1;
    if (k_out) *k_out = k;
    return true;
}

std::string pulse_table_csv(const InterferometerSpec& spec) {
    std::string out = "t_s,kick_upper_per_m,kick_lower_per_m,laser_phase_rad\n";
    for (const auto& pulse : spec.pulses) {
        out += csv::row_values({pulse.t, pulse.kick_upper, pulse.kick_lower,
                                pulse.laser_phase});
    }
    return out;
}

}  // namespace dilaton::geometry
