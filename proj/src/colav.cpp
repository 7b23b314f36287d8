#include "absim/colav.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absim/errors.hpp"

namespace absim {

namespace {
constexpr double kDeg = M_PI / 180.0;
}

SbmpcParams SbmpcParams::defaults() {
    SbmpcParams p;
    for (int mag = 0; mag <= 90; mag += 15) {
        p.chi_offsets.push_back(mag * kDeg);
        if (mag > 0) p.chi_offsets.push_back(-mag * kDeg);
    }
    p.U_mults = {1.0, 0.5, 0.0};
    return p;
}

void SbmpcParams::validate() const {
    if (!(T > dt && dt > 0.0))
        throw Error(ErrorCode::ConfigError, "sbmpc requires T > dt > 0");
    if (!(T_chi > 0.0 && T_U > 0.0))
        throw Error(ErrorCode::ConfigError, "sbmpc time constants must be positive");
    auto has = [](const std::vector<double>& v, double x) {
        return std::any_of(v.begin(), v.end(), [&](double e) { return e == x; });
    };
    if (!has(chi_offsets, 0.0))
        throw Error(ErrorCode::ConfigError, "chi_offsets must contain 0");
    if (!has(U_mults, 1.0))
        throw Error(ErrorCode::ConfigError, "U_mults must contain 1.0");
    if (!(tuning.d_safe < tuning.d_close))
        throw Error(ErrorCode::ConfigError, "d_safe must be smaller than d_close");
}

PredictedTrajectory predict_ownship(const VesselState& s, double chi_cmd, double U_cmd,
                                    const SbmpcParams& p) {
    PredictedSample cur;
    cur.x = s.x;
    cur.y = s.y;
    cur.U = std::hypot(s.u, s.v);
    // Ground-track course; falls back to heading at rest.
    cur.chi = cur.U < kSpeedEpsilon
                  ? s.psi
                  : std::atan2(s.u * std::sin(s.psi) + s.v * std::cos(s.psi),
                               s.u * std::cos(s.psi) - s.v * std::sin(s.psi));

    const std::size_t steps = static_cast<std::size_t>(std::floor(p.T / p.dt));
    PredictedTrajectory traj;
    traj.reserve(steps + 1);
    traj.push_back(cur);
    for (std::size_t k = 0; k < steps; ++k) {
        PredictedSample next;
        next.x = cur.x + p.dt * cur.U * std::cos(cur.chi);
        next.y = cur.y + p.dt * cur.U * std::sin(cur.chi);
        next.chi = wrap_angle(cur.chi + p.dt * wrap_angle(chi_cmd - cur.chi) / p.T_chi);
        next.U = cur.U + p.dt * (U_cmd - cur.U) / p.T_U;
        traj.push_back(next);
        cur = next;
    }
    return traj;
}

PredictedTrajectory predict_obstacle(const ObstacleState& o, const SbmpcParams& p) {
    const std::size_t steps = static_cast<std::size_t>(std::floor(p.T / p.dt));
    PredictedTrajectory traj;
    traj.reserve(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) {
        PredictedSample s;
        s.x = o.x + o.speed * std::cos(o.course) * p.dt * static_cast<double>(k);
        s.y = o.y + o.speed * std::sin(o.course) * p.dt * static_cast<double>(k);
        s.chi = o.course;
        s.U = o.speed;
        traj.push_back(s);
    }
    return traj;
}

namespace {

enum class Encounter { None, HeadOn, CrossingGiveWay, Overtaking };

// Relative bearings signed like the course offsets: positive toward the
// give-way (starboard) side.
Encounter classify_encounter(const PredictedSample& own, const PredictedSample& obs) {
    const double b_own = wrap_angle(std::atan2(obs.y - own.y, obs.x - own.x) - own.chi);
    const double b_obs = wrap_angle(std::atan2(own.y - obs.y, own.x - obs.x) - obs.chi);
    const double sector = 22.5 * kDeg;

    if (std::abs(b_obs) >= 112.5 * kDeg) return Encounter::Overtaking;
    if (std::abs(b_own) <= sector && std::abs(b_obs) <= sector) return Encounter::HeadOn;
    if (b_own >= sector && b_own <= 112.5 * kDeg) return Encounter::CrossingGiveWay;
    return Encounter::None;
}

bool violates_colregs(Encounter enc, const ColavDecision& cand) {
    switch (enc) {
        case Encounter::HeadOn:
            return cand.chi_m < 0.0; // resolved to port
        case Encounter::CrossingGiveWay:
            return cand.chi_m <= 0.0 && cand.U_m >= 1.0; // not giving way
        default:
            return false;
    }
}

} // namespace

double scenario_cost(const PredictedTrajectory& own,
                     const std::vector<PredictedTrajectory>& obstacles,
                     const ColavDecision& cand, const ColavDecision& prev,
                     const SbmpcParams& p) {
    const SbmpcTuning& w = p.tuning;
    const double U_ref = std::max(own.empty() ? 0.0 : own.front().U, 0.5);

    double hazard = 0.0;
    for (const auto& obs : obstacles) {
        const std::size_t n = std::min(own.size(), obs.size());
        double worst = 0.0;
        double d_min = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < n; ++k) {
            const double dx = own[k].x - obs[k].x;
            const double dy = own[k].y - obs[k].y;
            const double d = std::max(std::hypot(dx, dy), 1e-6);
            d_min = std::min(d_min, d);
            if (d >= w.d_close) continue;
            const double rel_vx = own[k].U * std::cos(own[k].chi) - obs[k].U * std::cos(obs[k].chi);
            const double rel_vy = own[k].U * std::sin(own[k].chi) - obs[k].U * std::sin(obs[k].chi);
            const double C = 1.0 + std::hypot(rel_vx, rel_vy) / U_ref;
            const double R = w.q_col * (w.d_safe / d) * (w.d_safe / d);
            worst = std::max(worst, C * R);
        }
        // The rule penalty only matters for obstacles that actually get close.
        if (n > 0 && d_min < w.d_close &&
            violates_colregs(classify_encounter(own.front(), obs.front()), cand)) {
            worst += w.kappa_colregs;
        }
        hazard = std::max(hazard, worst);
    }

    const double k_chi = cand.chi_m < 0.0 ? w.k_chi_p : w.k_chi_s;
    double cost = hazard;
    cost += k_chi * cand.chi_m * cand.chi_m;
    cost += w.k_du * (1.0 - cand.U_m);
    cost += w.k_dchi * std::abs(cand.chi_m - prev.chi_m);
    return cost;
}

namespace {

// Canonical evaluation order: |chi| ascending, starboard (positive) first,
// then U multipliers descending.
std::vector<double> ordered_offsets(std::vector<double> offsets) {
    std::sort(offsets.begin(), offsets.end(), [](double a, double b) {
        const double ma = std::abs(a), mb = std::abs(b);
        if (ma != mb) return ma < mb;
        return a > b;
    });
    offsets.erase(std::unique(offsets.begin(), offsets.end()), offsets.end());
    return offsets;
}

bool tie_better(const ColavDecision& a, const ColavDecision& b) {
    const double ma = std::abs(a.chi_m), mb = std::abs(b.chi_m);
    if (ma != mb) return ma < mb;
    if (a.chi_m != b.chi_m) return a.chi_m > b.chi_m; // starboard over port
    return a.U_m > b.U_m;
}

} // namespace

ColavDecision run_sbmpc(const VesselState& s, double chi_d, double U_d,
                        const ColavDecision& prev, const std::vector<ObstacleState>& obstacles,
                        const SbmpcParams& p) {
    std::vector<PredictedTrajectory> obs_trajs;
    obs_trajs.reserve(obstacles.size());
    for (const auto& o : obstacles) obs_trajs.push_back(predict_obstacle(o, p));

    std::vector<double> mults = p.U_mults;
    std::sort(mults.begin(), mults.end(), std::greater<>());
    mults.erase(std::unique(mults.begin(), mults.end()), mults.end());

    ColavDecision best;
    double best_cost = std::numeric_limits<double>::infinity();
    bool first = true;
    for (double offset : ordered_offsets(p.chi_offsets)) {
        for (double mult : mults) {
            const ColavDecision cand{offset, mult};
            const auto own = predict_ownship(s, chi_d + offset, U_d * mult, p);
            const double cost = scenario_cost(own, obs_trajs, cand, prev, p);
            if (first || cost < best_cost ||
                (cost == best_cost && tie_better(cand, best))) {
                best = cand;
                best_cost = cost;
                first = false;
            }
        }
    }
    return best;
}

} // namespace absim
