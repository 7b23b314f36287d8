#pragma once

#include <vector>

#include "absim/chart.hpp"
#include "absim/geometry.hpp"

namespace absim {

struct NavEdge {
    std::size_t a = 0;
    std::size_t b = 0;
    double length = 0.0; // arc length of the polyline, m
    Polyline polyline;   // runs a -> b
    double depth = 0.0;  // m, assigned by assign_depths
    std::string region;  // metadata of the source segment
    bool synthetic = false; // added by connect_components
};

struct NavGraph {
    std::vector<Vec2> nodes;
    std::vector<NavEdge> edges;
    std::vector<double> node_depths;

    std::vector<std::vector<std::size_t>> adjacency() const; // edge indices per node
    std::size_t nearest_node(const Vec2& p) const;
};

struct PlannedRoute {
    std::vector<Vec2> path_points;
    std::vector<double> path_depths;
};

// Snaps segment endpoints onto shared nodes within merge_tol and emits one
// edge per segment. Throws EmptyChart when there is nothing to build from.
NavGraph build_graph(const std::vector<LineEntity>& segments, double merge_tol);

// Repeatedly joins the two closest components with a straight synthetic
// edge until one component remains.
NavGraph connect_components(NavGraph g);

std::size_t count_components(const NavGraph& g);

// Boundary-inclusive containment against a chart polygon.
bool point_in_polygon(const Vec2& p, const PolygonEntity& poly);

// Region -> boundingbox -> polygon hierarchical lookup; overlapping
// matches resolve to the minimum depth, no match means depth 0.
NavGraph assign_depths(NavGraph g, const ChartLayer& depare_layer);

// Depth-constrained Dijkstra between the nodes nearest the two given
// points. Ties resolve to the lexicographically smallest node sequence.
PlannedRoute plan_path(const NavGraph& g, const Vec2& given_point1, const Vec2& given_point2,
                       double min_depth);

// Shortest node sequence (not expanded to edge polylines); exposed for the
// planner tests.
std::vector<std::size_t> shortest_node_path(const NavGraph& g, std::size_t start,
                                            std::size_t goal, double min_depth);

// Duplicate removal followed by centered moving-average smoothing with
// pinned endpoints; depths re-sampled from the nearest original point.
PlannedRoute refine_path(const PlannedRoute& route, double dup_tol, int window);

} // namespace absim
