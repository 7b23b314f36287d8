#pragma once

#include <vector>

#include "absim/vessel.hpp"

namespace absim {

// Cost weights of the scenario evaluation. The defaults are synthetic,
// scenario-configurable stand-ins; they are not calibrated values.
struct SbmpcTuning {
    double q_col = 100.0;        // collision weight
    double d_safe = 40.0;        // m
    double d_close = 200.0;      // m
    double kappa_colregs = 10.0; // rule-violation penalty
    double k_chi_p = 1.5;        // port course-deviation weight
    double k_chi_s = 1.0;        // starboard course-deviation weight
    double k_du = 2.0;           // speed-deviation weight
    // Kept below k_chi_s * (15 deg), otherwise stepping the offset back to
    // zero never pays off once a hazard clears.
    double k_dchi = 0.2;         // course-change-rate weight
};

// Candidate course offsets are signed with starboard positive; candidates
// are always evaluated ascending by magnitude, starboard before port,
// speed multipliers descending, so ties resolve identically everywhere.
struct SbmpcParams {
    double T = 300.0;  // prediction horizon, s
    double dt = 5.0;   // prediction sample time, s
    double T_chi = 15.0; // course time constant, s
    double T_U = 20.0;   // speed time constant, s
    std::vector<double> chi_offsets; // rad; defaults to +-{0..90} deg in 15 deg steps
    std::vector<double> U_mults;     // defaults to {1.0, 0.5, 0.0}
    SbmpcTuning tuning;

    static SbmpcParams defaults();
    void validate() const; // throws ConfigError on a broken invariant
};

struct ObstacleState {
    double x = 0.0;      // m
    double y = 0.0;      // m
    double course = 0.0; // rad
    double speed = 0.0;  // m/s
    double length = 0.0; // m
};

struct ColavDecision {
    double chi_m = 0.0; // rad, from chi_offsets
    double U_m = 1.0;   // from U_mults
};

struct PredictedSample {
    double x = 0.0;
    double y = 0.0;
    double chi = 0.0;
    double U = 0.0;
};
using PredictedTrajectory = std::vector<PredictedSample>;

// First-order course/speed response toward (chi_cmd, U_cmd), forward Euler
// at p.dt over p.T. The first sample is the current state projected to
// ground-track coordinates.
PredictedTrajectory predict_ownship(const VesselState& s, double chi_cmd, double U_cmd,
                                    const SbmpcParams& p);

PredictedTrajectory predict_obstacle(const ObstacleState& o, const SbmpcParams& p);

// Hazard term maxed over obstacles and samples plus maneuvering-effort
// terms; zero when no obstacle is in play and the candidate is (0, 1).
double scenario_cost(const PredictedTrajectory& own,
                     const std::vector<PredictedTrajectory>& obstacles,
                     const ColavDecision& cand, const ColavDecision& prev,
                     const SbmpcParams& p);

// Exhaustive search over the candidate grid; deterministic tie-break by
// smaller |chi_m|, then starboard over port, then larger U_m.
ColavDecision run_sbmpc(const VesselState& s, double chi_d, double U_d,
                        const ColavDecision& prev, const std::vector<ObstacleState>& obstacles,
                        const SbmpcParams& p);

} // namespace absim
