#include "absim/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace absim {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

class SvgCanvas {
public:
    SvgCanvas(const BBox& world, double width_px) : world_(world) {
        const double w = std::max(world_.xmax - world_.xmin, 1.0);
        const double h = std::max(world_.ymax - world_.ymin, 1.0);
        scale_ = width_px / w;
        width_ = width_px;
        height_ = h * scale_;
    }

    std::string open() const {
        return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width_) +
               "\" height=\"" + num(height_) + "\" viewBox=\"0 0 " + num(width_) + " " +
               num(height_) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"#f4f1ea\"/>\n";
    }

    // Chart y grows north; SVG y grows down.
    std::string pt(const Vec2& p) const {
        return num((p.x - world_.xmin) * scale_) + "," + num((world_.ymax - p.y) * scale_);
    }

    std::string polyline(const Polyline& line, const std::string& style) const {
        if (line.size() < 2) return {};
        std::string s = "<polyline fill=\"none\" " + style + " points=\"";
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (i) s += ' ';
            s += pt(line[i]);
        }
        s += "\"/>\n";
        return s;
    }

    std::string polygon(const std::vector<Ring>& rings, const std::string& style) const {
        std::string s = "<path " + style + " fill-rule=\"evenodd\" d=\"";
        for (const auto& ring : rings) {
            if (ring.size() < 3) continue;
            for (std::size_t i = 0; i < ring.size(); ++i) {
                s += (i == 0) ? "M" : "L";
                s += pt(ring[i]);
                s += ' ';
            }
            s += "Z ";
        }
        s += "\"/>\n";
        return s;
    }

    std::string circle(const Vec2& c, double r_px, const std::string& style) const {
        const auto p = pt(c);
        const auto comma = p.find(',');
        return "<circle cx=\"" + p.substr(0, comma) + "\" cy=\"" + p.substr(comma + 1) +
               "\" r=\"" + num(r_px) + "\" " + style + "/>\n";
    }

private:
    BBox world_;
    double scale_ = 1.0;
    double width_ = 0.0;
    double height_ = 0.0;
};

std::string depth_fill(double depth) {
    // Deeper water, darker blue; clamp the ramp at 10 m.
    const double t = std::clamp(depth / 10.0, 0.0, 1.0);
    const int r = int(198 - 120 * t);
    const int g = int(222 - 100 * t);
    const int b = 255;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fill=\"#%02x%02x%02x\"", r, g, b);
    return buf;
}

} // namespace

std::string render_svg(const ChartFeatureSet& chart, const PlannedRoute& route,
                       const SimLog& log) {
    BBox world;
    bool seeded = false;
    auto grow = [&](const BBox& b) {
        if (!seeded) { world = b; seeded = true; }
        else world.expand(b);
    };
    const BBox chart_bounds = chart.bounds();
    if (chart_bounds.xmin != chart_bounds.xmax || chart_bounds.ymin != chart_bounds.ymax)
        grow(chart_bounds);
    if (!route.path_points.empty()) grow(BBox::of(route.path_points));
    if (!log.records.empty()) {
        Polyline traj;
        for (const auto& rec : log.records) traj.push_back({rec.state.x, rec.state.y});
        grow(BBox::of(traj));
    }
    if (!seeded) world = {0, 0, 1, 1};
    // 5 % margin
    const double mx = std::max((world.xmax - world.xmin) * 0.05, 1.0);
    const double my = std::max((world.ymax - world.ymin) * 0.05, 1.0);
    world.xmin -= mx;
    world.xmax += mx;
    world.ymin -= my;
    world.ymax += my;

    SvgCanvas canvas(world, 1000.0);
    std::string svg = canvas.open();

    if (chart.has_class("lndare")) {
        for (const auto& poly : chart.layer("lndare").polygons)
            svg += canvas.polygon(poly.rings, "fill=\"#d9cfa8\" stroke=\"#b6a877\" stroke-width=\"1\"");
    }
    if (chart.has_class("depare")) {
        for (const auto& poly : chart.layer("depare").polygons)
            svg += canvas.polygon(poly.rings,
                                  depth_fill(poly.info.depth) + " stroke=\"#7a92ad\" stroke-width=\"0.5\"");
    }
    if (chart.has_class("bridge")) {
        for (const auto& poly : chart.layer("bridge").polygons)
            svg += canvas.polygon(poly.rings, "fill=\"#8a8a8a\" stroke=\"#5a5a5a\" stroke-width=\"1\"");
    }
    if (chart.has_class("wtwaxs")) {
        for (const auto& line : chart.layer("wtwaxs").lines)
            svg += canvas.polyline(line.points,
                                   "stroke=\"#5d7fa3\" stroke-width=\"1\" stroke-dasharray=\"6,4\"");
    }

    svg += canvas.polyline(route.path_points, "stroke=\"#111111\" stroke-width=\"1.5\"");

    if (!log.records.empty()) {
        Polyline own;
        for (const auto& rec : log.records) own.push_back({rec.state.x, rec.state.y});
        svg += canvas.polyline(own, "stroke=\"#1f7a33\" stroke-width=\"2\"");

        const std::size_t target_count = log.records.front().targets.size();
        for (std::size_t ti = 0; ti < target_count; ++ti) {
            Polyline traj;
            for (const auto& rec : log.records)
                traj.push_back({rec.targets[ti].x, rec.targets[ti].y});
            svg += canvas.polyline(traj, "stroke=\"#c0392b\" stroke-width=\"1.5\"");
        }
    }

    if (!route.path_points.empty()) {
        svg += canvas.circle(route.path_points.front(), 6.0,
                             "fill=\"#2ecc40\" stroke=\"#0f5c1f\" stroke-width=\"2\"");
        svg += canvas.circle(route.path_points.back(), 6.0,
                             "fill=\"#ff4136\" stroke=\"#7a1f1a\" stroke-width=\"2\"");
        for (const auto& wp : route.path_points)
            svg += canvas.circle(wp, 2.0, "fill=\"#222222\"");
    }

    svg += "</svg>\n";
    return svg;
}

} // namespace absim
