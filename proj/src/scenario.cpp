#include "absim/scenario.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "absim/errors.hpp"

namespace absim {

namespace {

using json = nlohmann::json;

namespace fs = std::filesystem;

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ConfigError, path + ": " + e.what());
    }
}

std::string resolve(const std::string& base_dir, const std::string& path) {
    fs::path p(path);
    if (p.is_absolute() || base_dir.empty()) return path;
    return (fs::path(base_dir) / p).string();
}

Vec2 read_vec2(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 2)
        throw Error(ErrorCode::ConfigError, std::string(what) + " must be [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<Vec2> read_points(const json& j, const char* what) {
    std::vector<Vec2> pts;
    for (const auto& p : j) pts.push_back(read_vec2(p, what));
    return pts;
}

void read_ship_section(const json& j, ScenarioConfig& cfg) {
    const json& params = j.at("params");
    cfg.ship.m = params.at("m").get<double>();
    cfg.ship.m_x = params.at("m_x").get<double>();
    cfg.ship.m_y = params.at("m_y").get<double>();
    cfg.ship.I_z = params.at("I_z").get<double>();
    cfg.ship.J_z = params.at("J_z").get<double>();
    cfg.ship.x_G = params.value("x_G", 0.0);
    cfg.ship.L = params.at("L").get<double>();
    cfg.ship.T_d = params.at("T_d").get<double>();
    cfg.ship.rho = params.value("rho", 1000.0);
    cfg.ship.R0_prime = params.at("R0_prime").get<double>();

    const json& hull = j.at("hull_derivatives");
    auto d = [&](const char* key) { return hull.at(key).get<double>(); };
    cfg.hull.X_bb = d("X_bb");
    cfg.hull.X_br = d("X_br");
    cfg.hull.X_rr = d("X_rr");
    cfg.hull.X_bbbb = d("X_bbbb");
    cfg.hull.Y_b = d("Y_b");
    cfg.hull.Y_r = d("Y_r");
    cfg.hull.Y_bbb = d("Y_bbb");
    cfg.hull.Y_bbr = d("Y_bbr");
    cfg.hull.Y_brr = d("Y_brr");
    cfg.hull.Y_rrr = d("Y_rrr");
    cfg.hull.N_b = d("N_b");
    cfg.hull.N_r = d("N_r");
    cfg.hull.N_bbb = d("N_bbb");
    cfg.hull.N_bbr = d("N_bbr");
    cfg.hull.N_brr = d("N_brr");
    cfg.hull.N_rrr = d("N_rrr");

    const json& prop = j.at("propeller");
    cfg.propeller.D_P = prop.at("D_P").get<double>();
    cfg.propeller.t_ded = prop.at("t_ded").get<double>();
    cfg.propeller.n_P = prop.value("n_P", 0.0);
    cfg.propeller.w_P = prop.value("w_P", 0.2);
    const auto& kt = prop.at("kt_coeffs");
    if (!kt.is_array() || kt.size() != 3)
        throw Error(ErrorCode::ConfigError, "kt_coeffs must be [k0, k1, k2]");
    cfg.propeller.k0 = kt[0].get<double>();
    cfg.propeller.k1 = kt[1].get<double>();
    cfg.propeller.k2 = kt[2].get<double>();

    const json& rud = j.at("rudder");
    cfg.rudder.A_R = rud.at("A_R").get<double>();
    cfg.rudder.Lambda = rud.at("Lambda").get<double>();
    cfg.rudder.x_R = rud.at("x_R").get<double>();
    cfg.rudder.x_H = rud.at("x_H").get<double>();
    cfg.rudder.t_R = rud.at("t_R").get<double>();
    cfg.rudder.a_H = rud.at("a_H").get<double>();
    cfg.rudder.gamma_R = rud.value("gamma_R", 0.4);
    cfg.rudder.l_R_prime = rud.value("l_R_prime", 0.0);
    cfg.rudder.eps_ratio = rud.value("eps_ratio", 1.09);
    cfg.rudder.kappa = rud.value("kappa", 0.5);
    cfg.rudder.delta_max = rud.at("delta_max").get<double>();
    cfg.rudder.delta_rate_max = rud.at("delta_rate_max").get<double>();

    if (j.contains("shallow_multiplier")) {
        for (const auto& row : j.at("shallow_multiplier")) {
            cfg.shallow_multiplier.emplace_back(row.at(0).get<double>(), row.at(1).get<double>());
        }
    }
}

} // namespace

ScenarioConfig parse_scenario_json(const std::string& text, const std::string& base_dir) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ConfigError, e.what());
    }

    if (doc.value("version", 0) != 1)
        throw Error(ErrorCode::ConfigError, "scenario version must be 1");

    ScenarioConfig cfg;
    cfg.name = doc.value("name", "scenario");

    if (doc.contains("chart") && !doc.at("chart").is_null()) {
        const json& chart = doc.at("chart");
        if (chart.contains("json")) {
            cfg.chart_json_path = resolve(base_dir, chart.at("json").get<std::string>());
        } else if (chart.contains("shapefile_dir")) {
            cfg.chart_shapefile_dir = resolve(base_dir, chart.at("shapefile_dir").get<std::string>());
        } else {
            throw Error(ErrorCode::ConfigError, "chart must give json or shapefile_dir");
        }
    }

    if (!doc.contains("route")) throw Error(ErrorCode::ConfigError, "missing route");
    const json& route = doc.at("route");
    if (route.contains("waypoints")) {
        cfg.route.waypoints = read_points(route.at("waypoints"), "waypoint");
    }
    if (route.contains("start") || route.contains("goal")) {
        if (!route.contains("start") || !route.contains("goal"))
            throw Error(ErrorCode::ConfigError, "start/goal routes need both points");
        cfg.route.start = read_vec2(route.at("start"), "route.start");
        cfg.route.goal = read_vec2(route.at("goal"), "route.goal");
        cfg.route.min_depth = route.value("min_depth", 0.0);
    }

    if (!doc.contains("ship")) throw Error(ErrorCode::ConfigError, "missing ship section");
    if (doc.at("ship").is_string()) {
        const std::string ship_path = resolve(base_dir, doc.at("ship").get<std::string>());
        read_ship_section(load_json(ship_path), cfg);
    } else {
        read_ship_section(doc.at("ship"), cfg);
    }

    if (doc.contains("guidance")) {
        const json& g = doc.at("guidance");
        cfg.guidance.D_los = g.value("D_los", cfg.guidance.D_los);
        cfg.guidance.R_a = g.value("R_a", cfg.guidance.R_a);
        cfg.guidance.pass_angle_threshold =
            g.value("pass_angle_threshold", cfg.guidance.pass_angle_threshold);
        cfg.guidance.r_d_filter_tau = g.value("r_d_filter_tau", cfg.guidance.r_d_filter_tau);
        cfg.nominal_speed = g.value("nominal_speed", cfg.nominal_speed);
    }

    if (doc.contains("controller")) {
        const json& c = doc.at("controller");
        const std::string type = c.value("type", "pid");
        if (type == "pid") cfg.controller = ControllerType::Pid;
        else if (type == "mpc") cfg.controller = ControllerType::Mpc;
        else throw Error(ErrorCode::ConfigError, "controller.type must be pid or mpc");

        if (c.contains("pid")) {
            const json& p = c.at("pid");
            cfg.pid.K_p = p.value("K_p", cfg.pid.K_p);
            cfg.pid.inv_T_i = p.value("inv_T_i", cfg.pid.inv_T_i);
            cfg.pid.T_d = p.value("T_d", cfg.pid.T_d);
            cfg.pid.integral_limit = p.value("integral_limit", cfg.pid.integral_limit);
        }
        if (c.contains("mpc")) {
            const json& m = c.at("mpc");
            cfg.mpc.T_s = m.value("T_s", cfg.mpc.T_s);
            cfg.mpc.N = m.value("N", cfg.mpc.N);
            cfg.mpc.headingGain = m.value("headingGain", cfg.mpc.headingGain);
            cfg.mpc.rateGain = m.value("rateGain", cfg.mpc.rateGain);
            cfg.mpc.rudderGain = m.value("rudderGain", cfg.mpc.rudderGain);
            cfg.mpc.max_iter = m.value("max_iter", cfg.mpc.max_iter);
            cfg.mpc.deltaMAX = m.value("deltaMAX", 0.0); // 0: inherit rudder delta_max
            cfg.mpc.nomoto_K = m.value("nomoto_K", cfg.mpc.nomoto_K);
            cfg.mpc.nomoto_T = m.value("nomoto_T", cfg.mpc.nomoto_T);
            cfg.mpc.r_max = m.value("r_max", cfg.mpc.r_max);
            cfg.mpc.r_penalty = m.value("r_penalty", cfg.mpc.r_penalty);
        }
    }

    if (doc.contains("colav")) {
        const json& c = doc.at("colav");
        cfg.colav_enabled = c.value("enabled", false);
        if (c.contains("sbmpc")) {
            const json& s = c.at("sbmpc");
            cfg.sbmpc.T = s.value("T", cfg.sbmpc.T);
            cfg.sbmpc.dt = s.value("dt", cfg.sbmpc.dt);
            cfg.sbmpc.T_chi = s.value("T_chi", cfg.sbmpc.T_chi);
            cfg.sbmpc.T_U = s.value("T_U", cfg.sbmpc.T_U);
            if (s.contains("chi_offsets")) {
                cfg.sbmpc.chi_offsets.clear();
                for (const auto& v : s.at("chi_offsets"))
                    cfg.sbmpc.chi_offsets.push_back(v.get<double>());
            }
            if (s.contains("U_mults")) {
                cfg.sbmpc.U_mults.clear();
                for (const auto& v : s.at("U_mults")) cfg.sbmpc.U_mults.push_back(v.get<double>());
            }
            if (s.contains("tuning")) {
                const json& t = s.at("tuning");
                SbmpcTuning& w = cfg.sbmpc.tuning;
                w.q_col = t.value("q_col", w.q_col);
                w.d_safe = t.value("d_safe", w.d_safe);
                w.d_close = t.value("d_close", w.d_close);
                w.kappa_colregs = t.value("kappa_colregs", w.kappa_colregs);
                w.k_chi_p = t.value("k_chi_p", w.k_chi_p);
                w.k_chi_s = t.value("k_chi_s", w.k_chi_s);
                w.k_du = t.value("k_du", w.k_du);
                w.k_dchi = t.value("k_dchi", w.k_dchi);
            }
        }
        if (c.contains("targets")) {
            for (const auto& t : c.at("targets")) {
                TargetConfig target;
                target.initial.x = t.at("x").get<double>();
                target.initial.y = t.at("y").get<double>();
                target.initial.course = t.at("course").get<double>();
                target.initial.speed = t.at("speed").get<double>();
                target.initial.length = t.value("length", 20.0);
                const std::string mode = t.value("mode", "constant");
                if (mode == "constant") {
                    target.mode = TargetMode::ConstantVelocity;
                } else if (mode == "waypoints") {
                    target.mode = TargetMode::WaypointFollowing;
                    target.waypoints = read_points(t.at("waypoints"), "target waypoint");
                } else {
                    throw Error(ErrorCode::ConfigError, "target mode must be constant or waypoints");
                }
                cfg.targets.push_back(std::move(target));
            }
        }
    }

    if (doc.contains("sim")) {
        const json& s = doc.at("sim");
        cfg.sim.dt = s.value("dt", cfg.sim.dt);
        cfg.sim.max_steps = s.value("max_steps", cfg.sim.max_steps);
        cfg.sim.v_ref = s.value("v_ref", cfg.sim.v_ref);
        if (s.contains("current")) cfg.sim.current = read_vec2(s.at("current"), "sim.current");
        cfg.sim.water_depth = s.value("water_depth", cfg.sim.water_depth);
        cfg.sim.seed = s.value("seed", cfg.sim.seed);
    }

    if (doc.contains("initial_state")) {
        const json& s = doc.at("initial_state");
        VesselState st;
        st.x = s.value("x", 0.0);
        st.y = s.value("y", 0.0);
        st.psi = s.value("psi", 0.0);
        st.u = s.value("u", 0.0);
        st.v = s.value("v", 0.0);
        st.r = s.value("r", 0.0);
        cfg.initial_state = st;
    }

    cfg.validate();
    return cfg;
}

ScenarioConfig load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_scenario_json(text, fs::path(path).parent_path().string());
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::IoError, "cannot write " + tmp);
        out.write(content.data(), std::streamsize(content.size()));
        if (!out) throw Error(ErrorCode::IoError, "short write to " + tmp);
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw Error(ErrorCode::IoError, "rename to " + path + " failed: " + ec.message());
}

namespace {

// Fixed 9-significant-digit formatting keeps diffs reproducible.
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

} // namespace

std::string trajectory_csv_header(std::size_t target_count) {
    std::string h =
        "t,x,y,psi,u,v,r,chi_d,chi_m,U_m,psi_d,r_d,delta_c,delta,"
        "X_H,Y_H,N_H,X_P,X_R,Y_R,N_R";
    for (std::size_t i = 0; i < target_count; ++i) {
        const std::string n = std::to_string(i);
        h += ",tgt" + n + "_x,tgt" + n + "_y,tgt" + n + "_course,tgt" + n + "_speed";
    }
    return h;
}

void write_trajectory_csv(const std::string& path, const SimLog& log) {
    const std::size_t targets = log.records.empty() ? 0 : log.records.front().targets.size();
    std::string out = trajectory_csv_header(targets) + "\n";
    for (const auto& r : log.records) {
        out += fmt(r.t);
        for (double v : {r.state.x, r.state.y, r.state.psi, r.state.u, r.state.v, r.state.r,
                         r.chi_d, r.colav.chi_m, r.colav.U_m, r.psi_d, r.r_d, r.delta_c, r.delta,
                         r.hull.X, r.hull.Y, r.hull.N, r.X_P, r.rudder.X, r.rudder.Y, r.rudder.N}) {
            out += ',';
            out += fmt(v);
        }
        for (const auto& t : r.targets) {
            for (double v : {t.x, t.y, t.course, t.speed}) {
                out += ',';
                out += fmt(v);
            }
        }
        out += '\n';
    }
    write_file_atomic(path, out);
}

void write_metrics_json(const std::string& path, const MetricsReport& m, SimOutcome outcome) {
    json doc;
    doc["D_nominal"] = m.D_nominal;
    doc["T_nominal"] = m.T_nominal;
    doc["D_actual"] = m.D_actual;
    doc["T_actual"] = m.T_actual;
    doc["psi_e_c_signed"] = m.psi_e_c_signed;
    doc["psi_e_c_abs"] = m.psi_e_c_abs;
    doc["CXTE"] = m.CXTE;
    doc["outcome"] = to_string(outcome);
    write_file_atomic(path, doc.dump(2) + "\n");
}

void write_route_geojson(const std::string& path, const PlannedRoute& route,
                         const Projection& proj) {
    json coords = json::array();
    for (const auto& p : route.path_points) {
        if (proj.valid()) {
            double lon, lat;
            proj.to_geographic(p, lon, lat);
            coords.push_back({lon, lat});
        } else {
            coords.push_back({p.x, p.y});
        }
    }
    json doc = {
        {"type", "Feature"},
        {"geometry", {{"type", "LineString"}, {"coordinates", coords}}},
        {"properties",
         {{"depths", route.path_depths}, {"crs", proj.valid() ? "wgs84" : "local-meters"}}},
    };
    write_file_atomic(path, doc.dump(2) + "\n");
}

} // namespace absim
