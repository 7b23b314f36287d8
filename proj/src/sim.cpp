#include "absim/sim.hpp"

#include <algorithm>
#include <cmath>

#include "absim/errors.hpp"
#include "absim/logging.hpp"

namespace absim {

const char* to_string(SimOutcome outcome) {
    switch (outcome) {
        case SimOutcome::Reached: return "reached";
        case SimOutcome::MaxSteps: return "max_steps";
        case SimOutcome::Fault: return "fault";
    }
    return "?";
}

void ScenarioConfig::validate() const {
    if (sim.dt <= 0.0) throw Error(ErrorCode::ConfigError, "sim.dt must be positive");
    if (sim.max_steps < 1) throw Error(ErrorCode::ConfigError, "sim.max_steps must be >= 1");
    const bool chart_route = route.start.has_value() && route.goal.has_value();
    const bool wp_route = !route.waypoints.empty();
    if (chart_route == wp_route)
        throw Error(ErrorCode::ConfigError,
                    "route must give either start/goal or an explicit waypoint list");
    if (chart_route && chart_json_path.empty() && chart_shapefile_dir.empty())
        throw Error(ErrorCode::ConfigError, "start/goal routing requires a chart source");
    if (wp_route && route.waypoints.size() < 2)
        throw Error(ErrorCode::ConfigError, "waypoint routes need at least 2 points");
    if (ship.m <= 0.0 || ship.I_z <= 0.0 || ship.L <= 0.0 || ship.T_d <= 0.0 || ship.rho <= 0.0)
        throw Error(ErrorCode::ConfigError, "ship mass, inertia, L, T_d and rho must be positive");
    if (ship.m_x < 0.0 || ship.m_y < 0.0 || ship.J_z < 0.0)
        throw Error(ErrorCode::ConfigError, "added masses must be non-negative");
    if (propeller.D_P <= 0.0) throw Error(ErrorCode::ConfigError, "propeller diameter must be positive");
    if (propeller.n_P < 0.0) throw Error(ErrorCode::ConfigError, "reverse thrust is not modeled: n_P >= 0");
    if (propeller.t_ded < 0.0 || propeller.t_ded >= 1.0 || propeller.w_P < 0.0 || propeller.w_P >= 1.0)
        throw Error(ErrorCode::ConfigError, "thrust deduction and wake fraction must lie in [0, 1)");
    if (rudder.A_R <= 0.0 || rudder.Lambda <= 0.0)
        throw Error(ErrorCode::ConfigError, "rudder area and aspect ratio must be positive");
    if (rudder.delta_max <= 0.0 || rudder.delta_rate_max <= 0.0)
        throw Error(ErrorCode::ConfigError, "rudder authority and rate limits must be positive");
    if (guidance.D_los <= 0.0 || guidance.R_a <= 0.0)
        throw Error(ErrorCode::ConfigError, "guidance D_los and R_a must be positive");
    if (guidance.pass_angle_threshold <= 0.0 || guidance.pass_angle_threshold > M_PI)
        throw Error(ErrorCode::ConfigError, "pass_angle_threshold must lie in (0, pi]");
    if (nominal_speed <= 0.0) throw Error(ErrorCode::ConfigError, "nominal_speed must be positive");
    if (sim.v_ref <= 0.0) throw Error(ErrorCode::ConfigError, "sim.v_ref must be positive");
    if (controller == ControllerType::Pid && pid.K_p <= 0.0)
        throw Error(ErrorCode::ConfigError, "pid.K_p must be positive");
    if (controller == ControllerType::Mpc) {
        if (mpc.N < 1 || mpc.T_s <= 0.0)
            throw Error(ErrorCode::ConfigError, "mpc horizon and sampling time must be positive");
        if (mpc.nomoto_T <= 0.0)
            throw Error(ErrorCode::ConfigError, "mpc.nomoto_T must be positive");
    }
    if (colav_enabled) sbmpc.validate();
    for (const auto& t : targets) {
        if (t.initial.speed < 0.0)
            throw Error(ErrorCode::ConfigError, "target speed must be non-negative");
        if (t.mode == TargetMode::WaypointFollowing && t.waypoints.size() < 2)
            throw Error(ErrorCode::ConfigError, "waypoint-following targets need >= 2 waypoints");
    }
}

double shallow_water_multiplier(const std::vector<std::pair<double, double>>& table,
                                double h_over_T) {
    if (table.empty()) return 1.0;
    if (h_over_T <= table.front().first) return table.front().second;
    for (std::size_t i = 1; i < table.size(); ++i) {
        if (h_over_T <= table[i].first) {
            const auto& [x0, y0] = table[i - 1];
            const auto& [x1, y1] = table[i];
            const double t = (h_over_T - x0) / (x1 - x0);
            return y0 + t * (y1 - y0);
        }
    }
    return table.back().second;
}

SpeedRpmTable::SpeedRpmTable(const ShipParams& ship, const PropellerParams& prop, double u_max,
                             std::size_t samples) {
    // Thrust balance at delta = 0, v = r = 0:
    //   (1-t) rho n^2 D^4 K_T(J) = 0.5 rho L T u^2 R0'
    // One positive root of an upward parabola in n; bisect after bracketing.
    const double resist_coeff = 0.5 * ship.rho * ship.L * ship.T_d * ship.R0_prime;
    samples = std::max<std::size_t>(samples, 2);
    speeds_.reserve(samples);
    rpms_.reserve(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        const double u = u_max * double(i) / double(samples - 1);
        const double resistance = resist_coeff * u * u;
        PropellerParams p = prop;
        auto balance = [&](double n) {
            p.n_P = n;
            return propeller_thrust(u, p, ship.rho) - resistance;
        };
        double lo = 0.0, hi = 1.0;
        while (balance(hi) < 0.0 && hi < 1e6) hi *= 2.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (balance(mid) < 0.0 ? lo : hi) = mid;
        }
        speeds_.push_back(u);
        rpms_.push_back(u == 0.0 ? 0.0 : 0.5 * (lo + hi));
    }
}

double SpeedRpmTable::rpm_for_speed(double u_cmd) const {
    if (speeds_.empty()) return 0.0;
    if (u_cmd <= speeds_.front()) return rpms_.front();
    if (u_cmd >= speeds_.back()) return rpms_.back();
    const auto it = std::upper_bound(speeds_.begin(), speeds_.end(), u_cmd);
    const std::size_t i = std::size_t(it - speeds_.begin());
    const double t = (u_cmd - speeds_[i - 1]) / (speeds_[i] - speeds_[i - 1]);
    return rpms_[i - 1] + t * (rpms_[i] - rpms_[i - 1]);
}

void step_targets(std::vector<TargetRuntime>& targets, double dt, const LOSParams& los) {
    for (auto& t : targets) {
        ObstacleState& s = t.state;
        if (t.cfg.mode == TargetMode::WaypointFollowing) {
            t.track = update_active_waypoint({s.x, s.y}, t.cfg.waypoints, t.track, los);
            VesselState proxy;
            proxy.x = s.x;
            proxy.y = s.y;
            proxy.psi = s.course;
            proxy.u = s.speed;
            const LOSRef ref =
                compute_los_ref(proxy, t.cfg.waypoints, {s.speed}, t.track, los);
            // Pure-kinematic follower: the LOS course applies instantly, so
            // the cross-track error shrinks monotonically.
            s.course = ref.chi_d;
        }
        s.x += s.speed * std::cos(s.course) * dt;
        s.y += s.speed * std::sin(s.course) * dt;
    }
}

namespace {

PlannedRoute plan_from_chart(const ChartFeatureSet& chart, const RouteSpec& route,
                             const LOSParams& /*los*/) {
    const auto cleaned = clean_waterway_axes(chart.layer("wtwaxs").lines, 0.5);
    NavGraph g;
    try {
        g = build_graph(cleaned, 1.0);
    } catch (const Error& e) {
        throw Error(ErrorCode::PlanningError, e.what());
    }
    g = connect_components(std::move(g));
    g = assign_depths(std::move(g), chart.layer("depare"));

    const Projection& proj = chart.projection();
    const Vec2 p1 = proj.valid() ? proj.to_local(route.start->x, route.start->y) : *route.start;
    const Vec2 p2 = proj.valid() ? proj.to_local(route.goal->x, route.goal->y) : *route.goal;

    PlannedRoute planned;
    try {
        planned = plan_path(g, p1, p2, route.min_depth);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::NoRoute || e.code() == ErrorCode::EmptyGraph)
            throw Error(ErrorCode::PlanningError, e.what());
        throw;
    }
    return refine_path(planned, 0.5, 5);
}

} // namespace

SimResult run_scenario(const ScenarioConfig& cfg) {
    cfg.validate();

    SimResult result;

    // Map stage: chart and waypoints.
    if (!cfg.chart_json_path.empty() || !cfg.chart_shapefile_dir.empty()) {
        try {
            result.chart = cfg.chart_json_path.empty()
                               ? load_chart_directory(cfg.chart_shapefile_dir)
                               : load_chart_json_file(cfg.chart_json_path);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::IoError || e.code() == ErrorCode::SchemaError ||
                e.code() == ErrorCode::GeometryError || e.code() == ErrorCode::BadMagic ||
                e.code() == ErrorCode::TruncatedFile || e.code() == ErrorCode::UnsupportedShapeType ||
                e.code() == ErrorCode::RecordCountMismatch || e.code() == ErrorCode::ChartError)
                throw Error(ErrorCode::ChartError, e.what());
            throw;
        }
    }

    if (cfg.route.uses_chart()) {
        if (!result.chart)
            throw Error(ErrorCode::ChartError, "start/goal routing requires a chart");
        result.route = plan_from_chart(*result.chart, cfg.route, cfg.guidance);
        result.waypoints = result.route.path_points;
    } else {
        result.route.path_points = cfg.route.waypoints;
        result.route.path_depths.assign(cfg.route.waypoints.size(), 0.0);
        result.waypoints = cfg.route.waypoints;
    }
    if (result.waypoints.size() < 2)
        throw Error(ErrorCode::PlanningError, "route collapsed to fewer than 2 waypoints");

    // Shallow-water resistance correction is applied once per scenario.
    ShipParams ship = cfg.ship;
    if (cfg.sim.water_depth > 0.0 && !cfg.shallow_multiplier.empty()) {
        ship.R0_prime *= shallow_water_multiplier(cfg.shallow_multiplier,
                                                  cfg.sim.water_depth / ship.T_d);
    }

    const std::vector<Vec2>& wps = result.waypoints;
    const std::vector<double> speeds(wps.size(), cfg.nominal_speed);

    VesselState state;
    if (cfg.initial_state) {
        state = *cfg.initial_state;
    } else {
        state.x = wps.front().x;
        state.y = wps.front().y;
        state.psi = std::atan2(wps[1].y - wps[0].y, wps[1].x - wps[0].x);
        state.u = cfg.nominal_speed;
    }

    const SpeedRpmTable rpm_table(ship, cfg.propeller,
                                  std::max(1.5 * cfg.nominal_speed, 0.1));

    TrackState track;
    HeadingRefState heading_ref;
    PidParams pid_state = cfg.pid;
    std::vector<double> mpc_warm;
    ColavDecision prev_decision;
    double delta_actual = 0.0;

    std::vector<TargetRuntime> targets;
    targets.reserve(cfg.targets.size());
    for (const auto& t : cfg.targets) targets.push_back({t, t.initial, TrackState{}});

    SimLog& log = result.log;
    log.dt = cfg.sim.dt;
    log.outcome = SimOutcome::MaxSteps;

    const double dt = cfg.sim.dt;
    for (std::size_t k = 0; k < cfg.sim.max_steps; ++k) {
        SimRecord rec;
        rec.t = double(k) * dt;
        rec.state = state;

        // (1) guidance
        track = update_active_waypoint({state.x, state.y}, wps, track, cfg.guidance);
        const LOSRef los = compute_los_ref(state, wps, speeds, track, cfg.guidance);
        rec.chi_d = los.chi_d;

        // (2) collision avoidance
        ColavDecision decision; // (0, 1.0) when disabled
        if (cfg.colav_enabled) {
            std::vector<ObstacleState> obstacles;
            obstacles.reserve(targets.size());
            for (const auto& t : targets) obstacles.push_back(t.state);
            decision = run_sbmpc(state, los.chi_d, los.U_d, prev_decision, obstacles, cfg.sbmpc);
        }
        rec.colav = decision;
        const double chi_cmd = wrap_angle(los.chi_d + decision.chi_m);
        const double U_cmd = los.U_d * decision.U_m;

        // (3) course to heading reference
        const HeadingRef ref = heading_reference_from_course(chi_cmd, dt, heading_ref, cfg.guidance);
        rec.psi_d = ref.psi_d;
        rec.r_d = ref.r_d;

        // (4) rudder command
        double delta_c = 0.0;
        if (cfg.controller == ControllerType::Pid) {
            const PidResult res = pid_step(state.psi, ref.psi_d, pid_state, cfg.rudder.delta_max);
            delta_c = res.delta_c;
            pid_state = res.state;
        } else {
            MpcParams mp = cfg.mpc;
            if (mp.deltaMAX <= 0.0) mp.deltaMAX = cfg.rudder.delta_max;
            const MpcSolution sol =
                mpc_solve({state.r, state.psi}, {ref.r_d, ref.psi_d}, mpc_warm, mp);
            delta_c = sol.delta_c;
            mpc_warm.assign(sol.delta_seq.begin() + 1, sol.delta_seq.end());
            mpc_warm.push_back(sol.delta_seq.back());
        }
        rec.delta_c = delta_c;

        // (5) steering gear
        delta_actual = rudder_servo(delta_actual, delta_c, dt, cfg.rudder);
        rec.delta = delta_actual;

        // (6) force set with commands frozen for this step
        PropellerParams prop = cfg.propeller;
        prop.n_P = rpm_table.rpm_for_speed(U_cmd);
        const double frozen_delta = delta_actual;
        auto force_model = [&](const VesselState& s) {
            const Forces h = hull_forces(s, ship, cfg.hull);
            const double xp = propeller_thrust(s.u, prop, ship.rho);
            const Forces r = rudder_forces(s, frozen_delta, prop, cfg.rudder, ship.rho, ship.L);
            return Forces{h.X + xp + r.X, h.Y + r.Y, h.N + r.N};
        };
        rec.hull = hull_forces(state, ship, cfg.hull);
        rec.X_P = propeller_thrust(state.u, prop, ship.rho);
        rec.rudder = rudder_forces(state, frozen_delta, prop, cfg.rudder, ship.rho, ship.L);

        rec.targets.reserve(targets.size());
        for (const auto& t : targets)
            rec.targets.push_back({t.state.x, t.state.y, t.state.course, t.state.speed});

        // (7) integrate
        bool faulted = false;
        try {
            state = integrate_step(state, force_model, ship, dt, cfg.sim.current);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NonFiniteState) throw;
            log_error(std::string("model fault: ") + e.what());
            faulted = true;
        }

        // (8) targets advance on the same time base
        step_targets(targets, dt, cfg.guidance);

        // (9) record
        log.records.push_back(std::move(rec));
        prev_decision = decision;

        if (faulted) {
            log.outcome = SimOutcome::Fault;
            break;
        }
        if (distance({state.x, state.y}, wps.back()) < cfg.guidance.R_a) {
            log.outcome = SimOutcome::Reached;
            break;
        }
    }

    // Metrics over the recorded run.
    if (log.records.size() >= 2) {
        std::vector<Vec2> positions;
        std::vector<double> psi, psi_d;
        positions.reserve(log.records.size());
        for (const auto& r : log.records) {
            positions.push_back({r.state.x, r.state.y});
            psi.push_back(r.state.psi);
            psi_d.push_back(r.psi_d);
        }
        result.metrics.D_nominal = nominal_distance(wps);
        result.metrics.T_nominal = nominal_time(result.metrics.D_nominal, cfg.sim.v_ref);
        result.metrics.D_actual = actual_distance(positions);
        result.metrics.T_actual = actual_time(log.records.size(), dt);
        const HeadingErrorTotals tot = cumulative_heading_error(psi, psi_d, dt);
        result.metrics.psi_e_c_signed = tot.signed_sum;
        result.metrics.psi_e_c_abs = tot.abs_sum;
        result.metrics.CXTE = cxte(positions, wps, dt);
    }
    return result;
}

} // namespace absim
