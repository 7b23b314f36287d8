#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "absim/actuators.hpp"
#include "absim/chart.hpp"
#include "absim/colav.hpp"
#include "absim/control.hpp"
#include "absim/errors.hpp"
#include "absim/graph.hpp"
#include "absim/guidance.hpp"
#include "absim/metrics.hpp"
#include "absim/scenario.hpp"
#include "absim/sim.hpp"
#include "absim/vessel.hpp"

namespace py = pybind11;
using namespace absim;

namespace {

py::dict metrics_dict(const MetricsReport& m, SimOutcome outcome) {
    py::dict d;
    d["D_nominal"] = m.D_nominal;
    d["T_nominal"] = m.T_nominal;
    d["D_actual"] = m.D_actual;
    d["T_actual"] = m.T_actual;
    d["psi_e_c_signed"] = m.psi_e_c_signed;
    d["psi_e_c_abs"] = m.psi_e_c_abs;
    d["CXTE"] = m.CXTE;
    d["outcome"] = std::string(to_string(outcome));
    return d;
}

py::dict run_scenario_file(const std::string& path) {
    const ScenarioConfig cfg = load_scenario_file(path);
    const SimResult result = run_scenario(cfg);

    py::list t, x, y, psi, u, v, r, delta;
    for (const auto& rec : result.log.records) {
        t.append(rec.t);
        x.append(rec.state.x);
        y.append(rec.state.y);
        psi.append(rec.state.psi);
        u.append(rec.state.u);
        v.append(rec.state.v);
        r.append(rec.state.r);
        delta.append(rec.delta);
    }
    py::dict out;
    out["outcome"] = std::string(to_string(result.log.outcome));
    out["metrics"] = metrics_dict(result.metrics, result.log.outcome);
    out["t"] = t;
    out["x"] = x;
    out["y"] = y;
    out["psi"] = psi;
    out["u"] = u;
    out["v"] = v;
    out["r"] = r;
    out["delta"] = delta;
    py::list wx, wy;
    for (const auto& wp : result.waypoints) {
        wx.append(wp.x);
        wy.append(wp.y);
    }
    out["waypoints_x"] = wx;
    out["waypoints_y"] = wy;
    return out;
}

py::dict plan_route_from_chart(const std::string& chart_json_path, double start_lon,
                               double start_lat, double goal_lon, double goal_lat,
                               double min_depth) {
    const ChartFeatureSet chart = load_chart_json_file(chart_json_path);
    const auto cleaned = clean_waterway_axes(chart.layer("wtwaxs").lines, 0.5);
    auto graph = connect_components(build_graph(cleaned, 1.0));
    graph = assign_depths(std::move(graph), chart.layer("depare"));
    const Vec2 p1 = chart.projection().to_local(start_lon, start_lat);
    const Vec2 p2 = chart.projection().to_local(goal_lon, goal_lat);
    const PlannedRoute route = refine_path(plan_path(graph, p1, p2, min_depth), 0.5, 5);

    py::list xs, ys;
    for (const auto& p : route.path_points) {
        xs.append(p.x);
        ys.append(p.y);
    }
    py::dict out;
    out["x"] = xs;
    out["y"] = ys;
    out["depths"] = route.path_depths;
    return out;
}

} // namespace

PYBIND11_MODULE(_absim, m) {
    m.doc() = "Inland-vessel guidance, navigation and control simulation core";

    py::register_exception<Error>(m, "AbsimError");

    py::class_<VesselState>(m, "VesselState")
        .def(py::init<>())
        .def_readwrite("x", &VesselState::x)
        .def_readwrite("y", &VesselState::y)
        .def_readwrite("psi", &VesselState::psi)
        .def_readwrite("u", &VesselState::u)
        .def_readwrite("v", &VesselState::v)
        .def_readwrite("r", &VesselState::r);

    py::class_<ShipParams>(m, "ShipParams")
        .def(py::init<>())
        .def_readwrite("m", &ShipParams::m)
        .def_readwrite("m_x", &ShipParams::m_x)
        .def_readwrite("m_y", &ShipParams::m_y)
        .def_readwrite("I_z", &ShipParams::I_z)
        .def_readwrite("J_z", &ShipParams::J_z)
        .def_readwrite("x_G", &ShipParams::x_G)
        .def_readwrite("L", &ShipParams::L)
        .def_readwrite("T_d", &ShipParams::T_d)
        .def_readwrite("rho", &ShipParams::rho)
        .def_readwrite("R0_prime", &ShipParams::R0_prime);

    py::class_<HullDerivatives>(m, "HullDerivatives")
        .def(py::init<>())
        .def_readwrite("X_bb", &HullDerivatives::X_bb)
        .def_readwrite("X_br", &HullDerivatives::X_br)
        .def_readwrite("X_rr", &HullDerivatives::X_rr)
        .def_readwrite("X_bbbb", &HullDerivatives::X_bbbb)
        .def_readwrite("Y_b", &HullDerivatives::Y_b)
        .def_readwrite("Y_r", &HullDerivatives::Y_r)
        .def_readwrite("Y_bbb", &HullDerivatives::Y_bbb)
        .def_readwrite("Y_bbr", &HullDerivatives::Y_bbr)
        .def_readwrite("Y_brr", &HullDerivatives::Y_brr)
        .def_readwrite("Y_rrr", &HullDerivatives::Y_rrr)
        .def_readwrite("N_b", &HullDerivatives::N_b)
        .def_readwrite("N_r", &HullDerivatives::N_r)
        .def_readwrite("N_bbb", &HullDerivatives::N_bbb)
        .def_readwrite("N_bbr", &HullDerivatives::N_bbr)
        .def_readwrite("N_brr", &HullDerivatives::N_brr)
        .def_readwrite("N_rrr", &HullDerivatives::N_rrr);

    py::class_<Forces>(m, "Forces")
        .def(py::init<>())
        .def_readwrite("X", &Forces::X)
        .def_readwrite("Y", &Forces::Y)
        .def_readwrite("N", &Forces::N);

    py::class_<DerivedKinematics>(m, "DerivedKinematics")
        .def_readonly("U", &DerivedKinematics::U)
        .def_readonly("beta_m", &DerivedKinematics::beta_m)
        .def_readonly("r_prime", &DerivedKinematics::r_prime);

    m.def("derived_kinematics", &derived_kinematics);
    m.def("hull_forces", &hull_forces);
    m.def("rigid_body_accelerations", [](const Forces& f, const VesselState& s, const ShipParams& p) {
        const Accelerations a = rigid_body_accelerations(f, s, p);
        return py::make_tuple(a.du, a.dv, a.dr);
    });

    py::class_<PropellerParams>(m, "PropellerParams")
        .def(py::init<>())
        .def_readwrite("D_P", &PropellerParams::D_P)
        .def_readwrite("t_ded", &PropellerParams::t_ded)
        .def_readwrite("n_P", &PropellerParams::n_P)
        .def_readwrite("w_P", &PropellerParams::w_P)
        .def_readwrite("k0", &PropellerParams::k0)
        .def_readwrite("k1", &PropellerParams::k1)
        .def_readwrite("k2", &PropellerParams::k2);

    m.def("propeller_thrust", &propeller_thrust);

    py::class_<PidParams>(m, "PidParams")
        .def(py::init<>())
        .def_readwrite("K_p", &PidParams::K_p)
        .def_readwrite("inv_T_i", &PidParams::inv_T_i)
        .def_readwrite("T_d", &PidParams::T_d)
        .def_readwrite("integral_limit", &PidParams::integral_limit);

    m.def("pid_step", [](double psi, double psi_d, const PidParams& p, double delta_max) {
        const PidResult res = pid_step(psi, psi_d, p, delta_max);
        return py::make_tuple(res.delta_c, res.state);
    });

    py::class_<MpcParams>(m, "MpcParams")
        .def(py::init<>())
        .def_readwrite("T_s", &MpcParams::T_s)
        .def_readwrite("N", &MpcParams::N)
        .def_readwrite("headingGain", &MpcParams::headingGain)
        .def_readwrite("rateGain", &MpcParams::rateGain)
        .def_readwrite("rudderGain", &MpcParams::rudderGain)
        .def_readwrite("max_iter", &MpcParams::max_iter)
        .def_readwrite("deltaMAX", &MpcParams::deltaMAX)
        .def_readwrite("nomoto_K", &MpcParams::nomoto_K)
        .def_readwrite("nomoto_T", &MpcParams::nomoto_T);

    m.def("mpc_solve", [](double r, double psi, double r_d, double psi_d,
                          const std::vector<double>& warm, const MpcParams& p) {
        const MpcSolution sol = mpc_solve({r, psi}, {r_d, psi_d}, warm, p);
        return py::make_tuple(sol.delta_c, sol.delta_seq, sol.cost);
    });

    py::class_<ObstacleState>(m, "ObstacleState")
        .def(py::init<>())
        .def_readwrite("x", &ObstacleState::x)
        .def_readwrite("y", &ObstacleState::y)
        .def_readwrite("course", &ObstacleState::course)
        .def_readwrite("speed", &ObstacleState::speed)
        .def_readwrite("length", &ObstacleState::length);

    py::class_<SbmpcParams>(m, "SbmpcParams")
        .def(py::init(&SbmpcParams::defaults))
        .def_readwrite("T", &SbmpcParams::T)
        .def_readwrite("dt", &SbmpcParams::dt)
        .def_readwrite("T_chi", &SbmpcParams::T_chi)
        .def_readwrite("T_U", &SbmpcParams::T_U)
        .def_readwrite("chi_offsets", &SbmpcParams::chi_offsets)
        .def_readwrite("U_mults", &SbmpcParams::U_mults);

    m.def("run_sbmpc", [](const VesselState& s, double chi_d, double U_d,
                          const std::vector<ObstacleState>& obstacles, const SbmpcParams& p) {
        const ColavDecision d = run_sbmpc(s, chi_d, U_d, {}, obstacles, p);
        return py::make_tuple(d.chi_m, d.U_m);
    });

    m.def("nominal_distance", [](const std::vector<std::pair<double, double>>& wps) {
        std::vector<Vec2> pts;
        for (const auto& [x, y] : wps) pts.push_back({x, y});
        return nominal_distance(pts);
    });
    m.def("nominal_time", &nominal_time);

    m.def("plan_route", &plan_route_from_chart, py::arg("chart_json_path"), py::arg("start_lon"),
          py::arg("start_lat"), py::arg("goal_lon"), py::arg("goal_lat"),
          py::arg("min_depth") = 0.0);
    m.def("run_scenario_file", &run_scenario_file, py::arg("path"));
}
