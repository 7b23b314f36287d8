#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "absim/errors.hpp"
#include "absim/logging.hpp"
#include "absim/render.hpp"
#include "absim/scenario.hpp"
#include "absim/sim.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitScenarioError = 1;
constexpr int kExitPlanningError = 2;
constexpr int kExitModelFault = 3;

int classify(const absim::Error& e) {
    switch (e.code()) {
        case absim::ErrorCode::NoRoute:
        case absim::ErrorCode::EmptyGraph:
        case absim::ErrorCode::EmptyChart:
        case absim::ErrorCode::PlanningError:
            return kExitPlanningError;
        case absim::ErrorCode::NonFiniteState:
        case absim::ErrorCode::ModelFault:
            return kExitModelFault;
        default:
            return kExitScenarioError;
    }
}

int run_command(const std::string& scenario_path, std::string out_dir, bool render, bool quiet) {
    const absim::ScenarioConfig cfg = absim::load_scenario_file(scenario_path);

    if (out_dir.empty()) out_dir = fs::path(scenario_path).stem().string() + "_out";
    fs::create_directories(out_dir);

    const absim::SimResult result = absim::run_scenario(cfg);

    const fs::path base(out_dir);
    absim::write_trajectory_csv((base / "trajectory.csv").string(), result.log);
    absim::write_metrics_json((base / "metrics.json").string(), result.metrics,
                              result.log.outcome);
    const absim::Projection proj =
        result.chart ? result.chart->projection() : absim::Projection();
    absim::write_route_geojson((base / "route.geojson").string(), result.route, proj);
    if (render) {
        const absim::ChartFeatureSet empty_chart;
        absim::write_file_atomic(
            (base / "render.svg").string(),
            absim::render_svg(result.chart ? *result.chart : empty_chart, result.route,
                              result.log));
    }

    if (!quiet) {
        std::printf("outcome: %s\n", absim::to_string(result.log.outcome));
        std::printf("steps: %zu (T_actual %.9g s)\n", result.log.records.size(),
                    result.metrics.T_actual);
        std::printf("D_nominal %.9g m, D_actual %.9g m, CXTE %.9g m s\n",
                    result.metrics.D_nominal, result.metrics.D_actual, result.metrics.CXTE);
        std::printf("outputs: %s\n", out_dir.c_str());
    }
    return result.log.outcome == absim::SimOutcome::Fault ? kExitModelFault : kExitOk;
}

int plan_command(const std::string& scenario_path, const std::string& out_path) {
    const absim::ScenarioConfig cfg = absim::load_scenario_file(scenario_path);

    absim::PlannedRoute route;
    absim::Projection proj;
    if (cfg.route.uses_chart()) {
        const absim::ChartFeatureSet chart =
            cfg.chart_json_path.empty() ? absim::load_chart_directory(cfg.chart_shapefile_dir)
                                        : absim::load_chart_json_file(cfg.chart_json_path);
        proj = chart.projection();
        const auto cleaned = absim::clean_waterway_axes(chart.layer("wtwaxs").lines, 0.5);
        auto graph = absim::connect_components(absim::build_graph(cleaned, 1.0));
        graph = absim::assign_depths(std::move(graph), chart.layer("depare"));
        const absim::Vec2 p1 = proj.to_local(cfg.route.start->x, cfg.route.start->y);
        const absim::Vec2 p2 = proj.to_local(cfg.route.goal->x, cfg.route.goal->y);
        route = absim::refine_path(absim::plan_path(graph, p1, p2, cfg.route.min_depth), 0.5, 5);
    } else {
        route.path_points = cfg.route.waypoints;
        route.path_depths.assign(cfg.route.waypoints.size(), 0.0);
    }

    absim::write_route_geojson(out_path, route, proj);
    std::printf("route: %zu points -> %s\n", route.path_points.size(), out_path.c_str());
    return kExitOk;
}

int validate_command(const std::string& scenario_path) {
    absim::load_scenario_file(scenario_path); // throws on any violation
    std::printf("%s: ok\n", scenario_path.c_str());
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Inland-vessel guidance, navigation and control simulator"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_dir;
    std::string route_out = "route.geojson";
    bool render = true;
    bool quiet = false;

    CLI::App* run = app.add_subcommand("run", "Run a scenario and write the output set");
    run->add_option("scenario", scenario_path, "Scenario JSON file")->required();
    run->add_option("--out", out_dir, "Output directory (default: <scenario>_out)");
    run->add_flag("--render,!--no-render", render, "Write the SVG map render (default: on)");
    run->add_flag("--quiet", quiet, "Suppress the summary on stdout");

    CLI::App* plan = app.add_subcommand("plan", "Plan the route only and write GeoJSON");
    plan->add_option("scenario", scenario_path, "Scenario JSON file")->required();
    plan->add_option("--out", route_out, "Route output path");

    CLI::App* validate = app.add_subcommand("validate", "Check a scenario file without running");
    validate->add_option("scenario", scenario_path, "Scenario JSON file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return run_command(scenario_path, out_dir, render, quiet);
        if (plan->parsed()) return plan_command(scenario_path, route_out);
        if (validate->parsed()) return validate_command(scenario_path);
    } catch (const absim::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return classify(e);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitScenarioError;
    }
    return kExitOk;
}
