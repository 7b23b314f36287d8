#pragma once

#include <vector>

#include "absim/geometry.hpp"
#include "absim/vessel.hpp"

namespace absim {

struct LOSParams {
    double D_los = 100.0;                     // look-ahead distance, m
    double R_a = 30.0;                        // radius of acceptance, m
    double pass_angle_threshold = M_PI / 2.0; // rad
    double r_d_filter_tau = 2.0;              // time constant of the r_d low-pass, s
};

// Index of the waypoint being approached; the active segment is
// wp[active_idx-1] -> wp[active_idx]. Monotone non-decreasing over a run.
struct TrackState {
    std::size_t active_idx = 1;
};

struct LOSRef {
    double chi_d = 0.0; // rad, wrapped
    double U_d = 0.0;   // m/s
};

// Advances past waypoints that are captured (within R_a) or already behind
// the vessel relative to the segment direction. Never passes the last one.
TrackState update_active_waypoint(const Vec2& pos, const std::vector<Vec2>& wps,
                                  TrackState ts, const LOSParams& p);

// LOS steering law: chi_d = segment azimuth + atan(-e / D_los), with e the
// cross-track error, positive to port of the path direction.
LOSRef compute_los_ref(const VesselState& s, const std::vector<Vec2>& wps,
                       const std::vector<double>& speeds, const TrackState& ts,
                       const LOSParams& p);

// Signed cross-track error of a position against a segment.
double cross_track_error(const Vec2& pos, const Vec2& a, const Vec2& b);

// Course-to-heading conversion state: psi_d = chi_d, r_d from filtered
// finite differences of successive references.
struct HeadingRefState {
    double psi_d_prev = 0.0;
    double r_d = 0.0;
    bool initialized = false;
};

struct HeadingRef {
    double psi_d = 0.0;
    double r_d = 0.0;
};

HeadingRef heading_reference_from_course(double chi_d, double dt, HeadingRefState& state,
                                         const LOSParams& p);

} // namespace absim
