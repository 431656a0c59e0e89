#pragma once

#include <string>
#include <vector>

#include "dilaton/core.hpp"

namespace dilaton::geometry {

// Atomic species with its dilaton couplings: beta = beta_bar * beta_S_bar
// scales the gravitational acceleration to g(1+beta), rho0 = beta_bar *
// rho0_bar couples the mass to the oscillating background.
struct Species {
    double m = 0.0;     // mass [kg]
    double beta = 0.0;  // EEP-violation parameter
    double rho0 = 0.0;  // oscillating-dilaton coupling

    void validate() const;
};

// One instantaneous light pulse. The momentum transfer hbar*kick is branch
// dependent; laser_phase is imprinted with the kick direction and defaults
// to zero.
struct PulseEvent {
    double t = 0.0;           // [s]
    double kick_upper = 0.0;  // [1/m]
    double kick_lower = 0.0;  // [1/m]
    double laser_phase = 0.0; // [rad]
};

struct InterferometerSpec {
    Species species;
    double z0 = 0.0;  // initial position [m]
    double v0 = 0.0;  // initial velocity [m/s]
    std::vector<PulseEvent> pulses;
    DilatonParams dilaton;
    PhysicalContext ctx;

    void validate() const;  // >= 2 pulses, strictly increasing times
    double t_first() const { return pulses.front().t; }
    double t_last() const { return pulses.back().t; }
};

// pi/2 - pi - pi/2 sequence at t0, t0+T, t0+2T. Branch kick table:
// upper (+k, -k, 0), lower (0, +k, -k). For k > 0 the branch labeled upper
// is the one kicked upward first; k < 0 gives the mirrored geometry.
InterferometerSpec mach_zehnder(double T, double k, const Species& species,
                                double z0, double v0, const DilatonParams& dilaton,
                                const PhysicalContext& ctx, double t0 = 0.0);

// Kinematic state convention: at a pulse time the pre-kick state is
// reported; the velocity jump hbar*kick/m applies for t > t_n.
struct TrajectorySegment {
    double t_start = 0.0;
    double t_end = 0.0;
    double z_start = 0.0;
    double v_start = 0.0;
};

class BranchTrajectory {
  public:
    BranchTrajectory(std::vector<TrajectorySegment> segments, double g,
                     double final_velocity);

    double position(double t) const;
    double velocity(double t) const;  // pre-kick at pulse times

    // Post-all-kicks velocity at t_last; the closure-relevant one.
    double final_velocity() const { return final_velocity_; }

    const std::vector<TrajectorySegment>& segments() const { return segments_; }

  private:
    const TrajectorySegment& segment_at(double t) const;

    std::vector<TrajectorySegment> segments_;
    double g_ = 0.0;
    double final_velocity_ = 0.0;
};

struct BranchPair {
    BranchTrajectory upper;
    BranchTrajectory lower;
};

// Piecewise parabolas under zdot = v, vdot = -g with the branch kick jumps.
BranchPair trajectories(const InterferometerSpec& spec);

// Branch differences at the final pulse, post final kick. Computed in the
// difference domain where z0, v0 and g drop out algebraically, so a closed
// geometry yields exactly (0, 0) in floating point.
struct ClosureReport {
    double dz_final = 0.0;  // [m]
    double dv_final = 0.0;  // [m/s]
};

ClosureReport closure_check(const InterferometerSpec& spec);

// Whether the spec closes within 1e-12 of its characteristic scales.
bool is_closed(const InterferometerSpec& spec);

// Difference-domain state (upper minus lower) on each inter-pulse segment;
// piecewise linear in t since gravity cancels. Used by closure_check and by
// phase terms that only involve the branch separation.
struct SeparationSegment {
    double t_start = 0.0;
    double t_end = 0.0;
    double dz_start = 0.0;
    double dv = 0.0;
};

std::vector<SeparationSegment> separation_segments(const InterferometerSpec& spec);

// Characteristic position / velocity scales of the spec, for tolerances.
struct CharacteristicScales {
    double z = 0.0;
    double v = 0.0;
};

CharacteristicScales characteristic_scales(const InterferometerSpec& spec);

// True if the pulse table is a Mach-Zehnder: three equally spaced pulses
// with kicks (+k,-k,0)/(0,+k,-k) for a common k != 0.
bool is_mach_zehnder(const InterferometerSpec& spec, double* T_out = nullptr,
                     double* k_out = nullptr);

// Pulse table as CSV (t_s, kick_upper_per_m, kick_lower_per_m,
// laser_phase_rad) for debugging.
std::string pulse_table_csv(const InterferometerSpec& spec);

}  // namespace dilaton::geometry
