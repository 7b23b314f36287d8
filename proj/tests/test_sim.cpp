#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "absim/errors.hpp"
#include "absim/scenario.hpp"
#include "absim/sim.hpp"

using namespace absim;

namespace {

std::string scenario_path(const std::string& name) {
    return std::string(ABSIM_SCENARIO_DIR) + "/scenarios/" + name;
}

bool records_identical(const SimRecord& a, const SimRecord& b) {
    bool same = a.t == b.t && a.state.x == b.state.x && a.state.y == b.state.y &&
                a.state.psi == b.state.psi && a.state.u == b.state.u && a.state.v == b.state.v &&
                a.state.r == b.state.r && a.chi_d == b.chi_d && a.colav.chi_m == b.colav.chi_m &&
                a.colav.U_m == b.colav.U_m && a.psi_d == b.psi_d && a.r_d == b.r_d &&
                a.delta_c == b.delta_c && a.delta == b.delta && a.hull.X == b.hull.X &&
                a.hull.Y == b.hull.Y && a.hull.N == b.hull.N && a.X_P == b.X_P &&
                a.rudder.X == b.rudder.X && a.rudder.Y == b.rudder.Y && a.rudder.N == b.rudder.N &&
                a.targets.size() == b.targets.size();
    if (!same) return false;
    for (std::size_t i = 0; i < a.targets.size(); ++i) {
        if (a.targets[i].x != b.targets[i].x || a.targets[i].y != b.targets[i].y ||
            a.targets[i].course != b.targets[i].course || a.targets[i].speed != b.targets[i].speed)
            return false;
    }
    return true;
}

bool logs_identical(const SimLog& a, const SimLog& b) {
    if (a.outcome != b.outcome || a.records.size() != b.records.size()) return false;
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        if (!records_identical(a.records[i], b.records[i])) return false;
    }
    return true;
}

} // namespace

TEST_CASE("straight route ends reached with sane metrics") {
    const auto cfg = load_scenario_file(scenario_path("straight_route.json"));
    const SimResult res = run_scenario(cfg);
    CHECK(res.log.outcome == SimOutcome::Reached);
    CHECK(res.metrics.D_nominal == doctest::Approx(800.0));
    CHECK(res.metrics.D_actual >= res.metrics.D_nominal - cfg.guidance.R_a - 1.0);
    CHECK(res.metrics.T_actual > 0.0);
    CHECK(std::isfinite(res.metrics.CXTE));
    CHECK(res.metrics.CXTE < 1.0); // never leaves the line
    // T_actual >= T_nominal minus the early cutoff inside R_a.
    CHECK(res.metrics.T_actual >= res.metrics.T_nominal - cfg.guidance.R_a / cfg.sim.v_ref - 1.0);
}

TEST_CASE("max_steps = 1 stops after a single logged step") {
    auto cfg = load_scenario_file(scenario_path("straight_route.json"));
    cfg.sim.max_steps = 1;
    const SimResult res = run_scenario(cfg);
    CHECK(res.log.outcome == SimOutcome::MaxSteps);
    CHECK(res.log.records.size() == 1);
}

TEST_CASE("two runs of the same scenario are bit-identical") {
    const auto cfg = load_scenario_file(scenario_path("chart_route.json"));
    const SimResult a = run_scenario(cfg);
    const SimResult b = run_scenario(cfg);
    CHECK(a.log.outcome == SimOutcome::Reached);
    CHECK(logs_identical(a.log, b.log));
}

TEST_CASE("colav enabled with zero targets equals colav disabled") {
    auto cfg = load_scenario_file(scenario_path("straight_route.json"));
    cfg.colav_enabled = false;
    const SimResult off = run_scenario(cfg);
    cfg.colav_enabled = true;
    cfg.targets.clear();
    const SimResult on = run_scenario(cfg);
    CHECK(logs_identical(off.log, on.log));
}

TEST_CASE("head-on scenario avoids the target and still reaches the goal") {
    const auto cfg = load_scenario_file(scenario_path("headon_colav.json"));
    const SimResult res = run_scenario(cfg);
    CHECK(res.log.outcome == SimOutcome::Reached);

    double min_sep = std::numeric_limits<double>::infinity();
    bool maneuvered = false;
    for (const auto& rec : res.log.records) {
        REQUIRE(rec.targets.size() == 1);
        min_sep = std::min(min_sep, std::hypot(rec.state.x - rec.targets[0].x,
                                               rec.state.y - rec.targets[0].y));
        if (rec.colav.chi_m != 0.0) maneuvered = true;
    }
    CHECK(maneuvered);
    CHECK(min_sep > cfg.sbmpc.tuning.d_safe);
    // First applied modification turns starboard.
    for (const auto& rec : res.log.records) {
        if (rec.colav.chi_m != 0.0) {
            CHECK(rec.colav.chi_m > 0.0);
            break;
        }
    }
}

TEST_CASE("crossing scenario gives way and keeps clear") {
    const auto cfg = load_scenario_file(scenario_path("crossing_colav.json"));
    const SimResult res = run_scenario(cfg);
    CHECK(res.log.outcome == SimOutcome::Reached);
    double min_sep = std::numeric_limits<double>::infinity();
    for (const auto& rec : res.log.records) {
        min_sep = std::min(min_sep, std::hypot(rec.state.x - rec.targets[0].x,
                                               rec.state.y - rec.targets[0].y));
    }
    CHECK(min_sep > cfg.sbmpc.tuning.d_safe);
}

TEST_CASE("loop order: logged commands replay from the logged states") {
    const auto cfg = load_scenario_file(scenario_path("straight_route.json"));
    const SimResult res = run_scenario(cfg);

    const std::vector<Vec2>& wps = res.waypoints;
    const std::vector<double> speeds(wps.size(), cfg.nominal_speed);
    TrackState track;
    HeadingRefState href;
    PidParams pid_state = cfg.pid;

    for (const auto& rec : res.log.records) {
        track = update_active_waypoint({rec.state.x, rec.state.y}, wps, track, cfg.guidance);
        const LOSRef ref = compute_los_ref(rec.state, wps, speeds, track, cfg.guidance);
        CHECK(ref.chi_d == rec.chi_d);

        const double chi_cmd = wrap_angle(ref.chi_d + rec.colav.chi_m);
        const HeadingRef h = heading_reference_from_course(chi_cmd, cfg.sim.dt, href, cfg.guidance);
        CHECK(h.psi_d == rec.psi_d);
        CHECK(h.r_d == rec.r_d);

        const PidResult pid = pid_step(rec.state.psi, h.psi_d, pid_state, cfg.rudder.delta_max);
        CHECK(pid.delta_c == rec.delta_c);
        pid_state = pid.state;
    }
}

TEST_CASE("speed-rpm table reproduces the thrust balance") {
    const auto cfg = load_scenario_file(scenario_path("straight_route.json"));
    ShipParams ship = cfg.ship;
    ship.R0_prime *=
        shallow_water_multiplier(cfg.shallow_multiplier, cfg.sim.water_depth / ship.T_d);
    const SpeedRpmTable table(ship, cfg.propeller, 4.5);

    for (double u : {0.5, 1.0, 2.0, 3.0, 4.0}) {
        PropellerParams prop = cfg.propeller;
        prop.n_P = table.rpm_for_speed(u);
        const double thrust = propeller_thrust(u, prop, ship.rho);
        const double resistance = 0.5 * ship.rho * ship.L * ship.T_d * u * u * ship.R0_prime;
        CHECK(thrust == doctest::Approx(resistance).epsilon(5e-3));
    }
    CHECK(table.rpm_for_speed(0.0) == 0.0);
    CHECK(table.rpm_for_speed(-1.0) == 0.0);
}

TEST_CASE("shallow water multiplier interpolates and clamps") {
    const std::vector<std::pair<double, double>> t = {{1.2, 1.8}, {2.0, 1.25}, {5.0, 1.0}};
    CHECK(shallow_water_multiplier(t, 1.0) == 1.8);   // clamped low
    CHECK(shallow_water_multiplier(t, 10.0) == 1.0);  // clamped high
    CHECK(shallow_water_multiplier(t, 1.2) == 1.8);
    CHECK(shallow_water_multiplier(t, 1.6) == doctest::Approx(1.8 + 0.5 * (1.25 - 1.8)));
    CHECK(shallow_water_multiplier({}, 2.0) == 1.0);
}

TEST_CASE("step_targets: constant velocity and waypoint following") {
    LOSParams los;
    los.D_los = 50.0;
    los.R_a = 10.0;

    std::vector<TargetRuntime> targets;
    TargetConfig cv;
    cv.initial = {0.0, 0.0, 0.0, 2.0, 20.0};
    targets.push_back({cv, cv.initial, TrackState{}});

    TargetConfig still;
    still.initial = {5.0, 5.0, 1.0, 0.0, 20.0};
    targets.push_back({still, still.initial, TrackState{}});

    step_targets(targets, 0.5, los);
    CHECK(targets[0].state.x == doctest::Approx(1.0));
    CHECK(targets[0].state.y == doctest::Approx(0.0));
    CHECK(targets[1].state.x == 5.0);
    CHECK(targets[1].state.y == 5.0);

    // Waypoint follower: cross-track error to its leg is non-increasing.
    TargetConfig wf;
    wf.mode = TargetMode::WaypointFollowing;
    wf.waypoints = {{0, 0}, {600, 0}};
    wf.initial = {0.0, 40.0, 0.0, 3.0, 20.0};
    std::vector<TargetRuntime> follower = {{wf, wf.initial, TrackState{}}};
    double prev = 40.0;
    for (int k = 0; k < 400; ++k) {
        step_targets(follower, 0.5, los);
        const double e = std::abs(follower[0].state.y);
        CHECK(e <= prev + 1e-9);
        prev = e;
    }
    CHECK(prev < 5.0);
}

TEST_CASE("planning error propagates for impossible depth") {
    const auto cfg = load_scenario_file(scenario_path("impossible_depth.json"));
    try {
        run_scenario(cfg);
        FAIL("expected PlanningError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::PlanningError);
    }
}

TEST_CASE("missing chart file surfaces as ChartError") {
    auto cfg = load_scenario_file(scenario_path("chart_route.json"));
    cfg.chart_json_path = "/nonexistent/nowhere.json";
    try {
        run_scenario(cfg);
        FAIL("expected ChartError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ChartError);
    }
}

TEST_CASE("scenario validation rejects broken configs") {
    auto valid = load_scenario_file(scenario_path("straight_route.json"));
    CHECK_NOTHROW(valid.validate());

    auto bad = valid;
    bad.sim.dt = 0.0;
    CHECK_THROWS_AS(bad.validate(), Error);

    bad = valid;
    bad.route.waypoints.clear(); // no route form at all
    CHECK_THROWS_AS(bad.validate(), Error);

    bad = valid;
    bad.route.start = Vec2{0, 0}; // both route forms at once
    bad.route.goal = Vec2{1, 1};
    CHECK_THROWS_AS(bad.validate(), Error);

    bad = valid;
    bad.propeller.n_P = -1.0;
    CHECK_THROWS_AS(bad.validate(), Error);

    bad = valid;
    bad.rudder.delta_max = 0.0;
    CHECK_THROWS_AS(bad.validate(), Error);

    bad = valid;
    bad.nominal_speed = 0.0;
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("scenario parser enforces version and route forms") {
    CHECK_THROWS_AS(parse_scenario_json(R"({"version": 2})", ""), Error);
    CHECK_THROWS_AS(parse_scenario_json("not json", ""), Error);
    try {
        parse_scenario_json(R"({"version": 1})", "");
        FAIL("expected ConfigError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ConfigError);
    }
}

TEST_CASE("current advects the trajectory") {
    auto cfg = load_scenario_file(scenario_path("straight_route.json"));
    cfg.sim.current = {0.0, 0.2}; // pushes north while tracking an east line
    const SimResult res = run_scenario(cfg);
    CHECK(res.log.outcome == SimOutcome::Reached);
    // The vessel must crab: nonzero heading against the current.
    double max_abs_psi = 0.0;
    for (const auto& rec : res.log.records)
        max_abs_psi = std::max(max_abs_psi, std::abs(rec.state.psi));
    CHECK(max_abs_psi > 0.01);
    // LOS keeps the track bounded despite the push.
    CHECK(res.metrics.CXTE / res.metrics.T_actual < 10.0);
}
