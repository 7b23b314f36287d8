#include "absim/guidance.hpp"

#include <algorithm>
#include <cmath>

namespace absim {

double cross_track_error(const Vec2& pos, const Vec2& a, const Vec2& b) {
    const Vec2 d = b - a;
    const double len = d.norm();
    if (len == 0.0) return distance(pos, a);
    // Positive to port: left of the path direction.
    return (d.x * (pos.y - a.y) - d.y * (pos.x - a.x)) / len;
}

TrackState update_active_waypoint(const Vec2& pos, const std::vector<Vec2>& wps,
                                  TrackState ts, const LOSParams& p) {
    if (ts.active_idx < 1) ts.active_idx = 1;
    while (ts.active_idx < wps.size() - 1) {
        const Vec2& wp = wps[ts.active_idx];
        if (distance(pos, wp) < p.R_a) {
            ++ts.active_idx;
            continue;
        }
        const Vec2 seg_dir = wp - wps[ts.active_idx - 1];
        const Vec2 beyond = pos - wp;
        const double seg_len = seg_dir.norm();
        const double beyond_len = beyond.norm();
        if (seg_len > 0.0 && beyond_len > 0.0) {
            const double cosang =
                std::clamp(seg_dir.dot(beyond) / (seg_len * beyond_len), -1.0, 1.0);
            if (std::acos(cosang) < p.pass_angle_threshold) {
                ++ts.active_idx; // waypoint is behind the vessel
                continue;
            }
        }
        break;
    }
    return ts;
}

LOSRef compute_los_ref(const VesselState& s, const std::vector<Vec2>& wps,
                       const std::vector<double>& speeds, const TrackState& ts,
                       const LOSParams& p) {
    const Vec2& a = wps[ts.active_idx - 1];
    const Vec2& b = wps[ts.active_idx];
    const double pi_p = std::atan2(b.y - a.y, b.x - a.x);
    const double e = cross_track_error({s.x, s.y}, a, b);

    LOSRef ref;
    ref.chi_d = wrap_angle(pi_p + std::atan(-e / p.D_los));
    ref.U_d = speeds.empty() ? 0.0
                             : speeds[std::min(ts.active_idx, speeds.size() - 1)];
    return ref;
}

HeadingRef heading_reference_from_course(double chi_d, double dt, HeadingRefState& state,
                                         const LOSParams& p) {
    const double psi_d = chi_d; // zero-sideslip assumption
    double raw = 0.0;
    if (state.initialized && dt > 0.0) {
        raw = wrap_angle(psi_d - state.psi_d_prev) / dt;
    }
    const double alpha = dt > 0.0 ? dt / (p.r_d_filter_tau + dt) : 1.0;
    state.r_d += alpha * (raw - state.r_d);
    state.psi_d_prev = psi_d;
    state.initialized = true;
    return {psi_d, state.r_d};
}

} // namespace absim
