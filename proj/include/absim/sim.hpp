#pragma once

#include <optional>
#include <string>
#include <vector>

#include "absim/actuators.hpp"
#include "absim/chart.hpp"
#include "absim/colav.hpp"
#include "absim/control.hpp"
#include "absim/graph.hpp"
#include "absim/guidance.hpp"
#include "absim/metrics.hpp"
#include "absim/vessel.hpp"

namespace absim {

enum class TargetMode { ConstantVelocity, WaypointFollowing };

struct TargetConfig {
    ObstacleState initial;
    TargetMode mode = TargetMode::ConstantVelocity;
    std::vector<Vec2> waypoints; // for waypoint-following targets
};

// Exactly one of the two route forms is set: a chart query or an explicit
// waypoint list in local meters.
struct RouteSpec {
    std::optional<Vec2> start; // chart coordinates (degrees lon/lat)
    std::optional<Vec2> goal;
    double min_depth = 0.0;
    std::vector<Vec2> waypoints;

    bool uses_chart() const { return start.has_value(); }
};

struct SimSettings {
    double dt = 0.5;            // s
    std::size_t max_steps = 10000;
    double v_ref = 3.0;         // m/s, nominal speed for the metrics
    Vec2 current{0.0, 0.0};     // m/s, advects the pose
    double water_depth = 0.0;   // m; 0 means deep water (no correction)
    unsigned seed = 0;          // reserved; the pipeline is deterministic
};

enum class ControllerType { Pid, Mpc };

struct ScenarioConfig {
    std::string name;
    std::string chart_json_path;     // one of the two, or neither for
    std::string chart_shapefile_dir; // explicit-waypoint scenarios
    RouteSpec route;

    ShipParams ship;
    HullDerivatives hull;
    PropellerParams propeller;
    RudderParams rudder;
    // R0' correction vs h/T_d, linearly interpolated; empty = no correction.
    std::vector<std::pair<double, double>> shallow_multiplier;

    LOSParams guidance;
    double nominal_speed = 3.0; // m/s, per-waypoint broadcast

    ControllerType controller = ControllerType::Pid;
    PidParams pid;
    MpcParams mpc;

    bool colav_enabled = false;
    SbmpcParams sbmpc = SbmpcParams::defaults();
    std::vector<TargetConfig> targets;

    SimSettings sim;
    std::optional<VesselState> initial_state; // defaults to the route start

    void validate() const; // throws ConfigError
};

struct TargetLogState {
    double x = 0.0, y = 0.0, course = 0.0, speed = 0.0;
};

struct SimRecord {
    double t = 0.0;
    VesselState state;
    double chi_d = 0.0;
    ColavDecision colav;
    double psi_d = 0.0;
    double r_d = 0.0;
    double delta_c = 0.0; // commanded rudder
    double delta = 0.0;   // actual rudder after the servo
    Forces hull;          // X_H, Y_H, N_H
    double X_P = 0.0;
    Forces rudder;        // X_R, Y_R, N_R
    std::vector<TargetLogState> targets;
};

enum class SimOutcome { Reached, MaxSteps, Fault };
const char* to_string(SimOutcome outcome);

struct SimLog {
    std::vector<SimRecord> records;
    SimOutcome outcome = SimOutcome::MaxSteps;
    double dt = 0.0;
};

struct SimResult {
    SimLog log;
    MetricsReport metrics;
    PlannedRoute route;             // planned (or explicit) waypoints + depths
    std::vector<Vec2> waypoints;    // the list handed to guidance
    std::optional<ChartFeatureSet> chart;
};

// Steady-state u <-> n_P pairs at delta = 0; commanded speeds map to shaft
// speeds through linear interpolation.
class SpeedRpmTable {
public:
    SpeedRpmTable() = default;
    SpeedRpmTable(const ShipParams& ship, const PropellerParams& prop, double u_max,
                  std::size_t samples = 33);
    double rpm_for_speed(double u_cmd) const;
    bool empty() const { return speeds_.empty(); }

private:
    std::vector<double> speeds_;
    std::vector<double> rpms_;
};

double shallow_water_multiplier(const std::vector<std::pair<double, double>>& table,
                                double h_over_T);

// Advances every target one dt under its motion mode. Waypoint followers
// steer with the LOS law through the colav predictor's kinematics.
struct TargetRuntime {
    TargetConfig cfg;
    ObstacleState state;
    TrackState track;
};
void step_targets(std::vector<TargetRuntime>& targets, double dt, const LOSParams& los);

// Runs the full guidance -> colav -> control -> actuator -> model loop.
SimResult run_scenario(const ScenarioConfig& cfg);

} // namespace absim
