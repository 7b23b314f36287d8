#include "absim/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>

#include "absim/errors.hpp"

namespace absim {

std::vector<std::vector<std::size_t>> NavGraph::adjacency() const {
    std::vector<std::vector<std::size_t>> adj(nodes.size());
    for (std::size_t ei = 0; ei < edges.size(); ++ei) {
        adj[edges[ei].a].push_back(ei);
        adj[edges[ei].b].push_back(ei);
    }
    return adj;
}

std::size_t NavGraph::nearest_node(const Vec2& p) const {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double d = distance(p, nodes[i]);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

NavGraph build_graph(const std::vector<LineEntity>& segments, double merge_tol) {
    if (segments.empty()) throw Error(ErrorCode::EmptyChart, "no waterway segments");

    NavGraph g;
    auto snap = [&](const Vec2& p) -> std::size_t {
        for (std::size_t i = 0; i < g.nodes.size(); ++i) {
            if (distance(g.nodes[i], p) < merge_tol) return i;
        }
        g.nodes.push_back(p);
        return g.nodes.size() - 1;
    };

    for (const auto& seg : segments) {
        if (seg.points.size() < 2) continue;
        NavEdge e;
        e.a = snap(seg.points.front());
        e.b = snap(seg.points.back());
        e.polyline = seg.points;
        e.length = polyline_length(seg.points);
        e.region = seg.region;

        const bool dup = std::any_of(g.edges.begin(), g.edges.end(), [&](const NavEdge& o) {
            const bool same_pair = (o.a == e.a && o.b == e.b) || (o.a == e.b && o.b == e.a);
            return same_pair && std::abs(o.length - e.length) < merge_tol;
        });
        if (!dup) g.edges.push_back(std::move(e));
    }
    if (g.nodes.empty()) throw Error(ErrorCode::EmptyChart, "no usable segments");
    g.node_depths.assign(g.nodes.size(), 0.0);
    return g;
}

namespace {

std::vector<std::size_t> component_labels(const NavGraph& g) {
    std::vector<std::size_t> label(g.nodes.size(), SIZE_MAX);
    const auto adj = g.adjacency();
    std::size_t next = 0;
    for (std::size_t start = 0; start < g.nodes.size(); ++start) {
        if (label[start] != SIZE_MAX) continue;
        std::queue<std::size_t> frontier;
        frontier.push(start);
        label[start] = next;
        while (!frontier.empty()) {
            const std::size_t n = frontier.front();
            frontier.pop();
            for (std::size_t ei : adj[n]) {
                const std::size_t other = g.edges[ei].a == n ? g.edges[ei].b : g.edges[ei].a;
                if (label[other] == SIZE_MAX) {
                    label[other] = next;
                    frontier.push(other);
                }
            }
        }
        ++next;
    }
    return label;
}

} // namespace

std::size_t count_components(const NavGraph& g) {
    if (g.nodes.empty()) return 0;
    const auto labels = component_labels(g);
    return *std::max_element(labels.begin(), labels.end()) + 1;
}

NavGraph connect_components(NavGraph g) {
    if (g.nodes.empty()) return g;
    while (true) {
        const auto labels = component_labels(g);
        const std::size_t ncomp = *std::max_element(labels.begin(), labels.end()) + 1;
        if (ncomp <= 1) break;

        double best_d = std::numeric_limits<double>::infinity();
        std::size_t best_i = 0, best_j = 0;
        for (std::size_t i = 0; i < g.nodes.size(); ++i) {
            for (std::size_t j = i + 1; j < g.nodes.size(); ++j) {
                if (labels[i] == labels[j]) continue;
                const double d = distance(g.nodes[i], g.nodes[j]);
                if (d < best_d) { // strict: ties keep the lowest (i, j)
                    best_d = d;
                    best_i = i;
                    best_j = j;
                }
            }
        }
        NavEdge e;
        e.a = best_i;
        e.b = best_j;
        e.length = best_d;
        e.polyline = {g.nodes[best_i], g.nodes[best_j]};
        e.synthetic = true;
        g.edges.push_back(std::move(e));
    }
    return g;
}

bool point_in_polygon(const Vec2& p, const PolygonEntity& poly) {
    return point_in_rings(p, poly.rings);
}

namespace {

// Hierarchical depth query: polygons of the hinted region first; only if
// none of them contains the point does the search widen to the rest.
double depth_at(const Vec2& p, const ChartLayer& depare, const std::string& region_hint) {
    double best = std::numeric_limits<double>::infinity();
    bool found = false;
    auto scan = [&](bool match_region) {
        for (const auto& poly : depare.polygons) {
            const bool in_region = !region_hint.empty() && poly.info.region == region_hint;
            if (match_region != in_region) continue;
            if (!poly.info.boundingbox.contains(p)) continue;
            if (!point_in_polygon(p, poly)) continue;
            best = std::min(best, poly.info.depth);
            found = true;
        }
    };
    scan(true);
    if (!found) scan(false);
    // Graph depths never go negative, whatever a chart attribute claims.
    return found ? std::max(best, 0.0) : 0.0;
}

} // namespace

NavGraph assign_depths(NavGraph g, const ChartLayer& depare_layer) {
    // Region hint for a node: region of its first incident edge.
    std::vector<std::string> node_hint(g.nodes.size());
    for (auto it = g.edges.rbegin(); it != g.edges.rend(); ++it) {
        node_hint[it->a] = it->region;
        node_hint[it->b] = it->region;
    }
    g.node_depths.assign(g.nodes.size(), 0.0);
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        g.node_depths[i] = depth_at(g.nodes[i], depare_layer, node_hint[i]);
    }
    for (auto& e : g.edges) {
        const Vec2 mid = (g.nodes[e.a] + g.nodes[e.b]) * 0.5;
        const double mid_depth = depth_at(mid, depare_layer, e.region);
        e.depth = std::min({g.node_depths[e.a], g.node_depths[e.b], mid_depth});
    }
    return g;
}

std::vector<std::size_t> shortest_node_path(const NavGraph& g, std::size_t start,
                                            std::size_t goal, double min_depth) {
    if (g.nodes.empty()) throw Error(ErrorCode::EmptyGraph, "graph has no nodes");

    const auto adj = g.adjacency();
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(g.nodes.size(), inf);
    std::vector<std::size_t> parent(g.nodes.size(), SIZE_MAX);
    std::vector<bool> settled(g.nodes.size(), false);

    auto path_to = [&](std::size_t n) {
        std::vector<std::size_t> path;
        for (std::size_t cur = n; cur != SIZE_MAX; cur = parent[cur]) path.push_back(cur);
        std::reverse(path.begin(), path.end());
        return path;
    };

    using Entry = std::pair<double, std::size_t>; // (dist, node): lowest index pops first on ties
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> pq;
    dist[start] = 0.0;
    pq.emplace(0.0, start);

    while (!pq.empty()) {
        const auto [d, n] = pq.top();
        pq.pop();
        if (settled[n] || d > dist[n]) continue;
        settled[n] = true;
        if (n == goal) break;

        for (std::size_t ei : adj[n]) {
            const NavEdge& e = g.edges[ei];
            if (e.depth < min_depth) continue;
            const std::size_t other = e.a == n ? e.b : e.a;
            if (settled[other]) continue;
            const double nd = dist[n] + e.length;
            bool improve = nd < dist[other];
            if (!improve && nd == dist[other] && parent[other] != n) {
                // Exact cost tie: prefer the lexicographically smaller path.
                auto cand = path_to(n);
                cand.push_back(other);
                improve = cand < path_to(other);
            }
            if (improve) {
                dist[other] = nd;
                parent[other] = n;
                pq.emplace(nd, other);
            }
        }
    }

    if (dist[goal] == inf)
        throw Error(ErrorCode::NoRoute, "depth filter disconnects start from goal");
    return path_to(goal);
}

PlannedRoute plan_path(const NavGraph& g, const Vec2& given_point1, const Vec2& given_point2,
                       double min_depth) {
    if (g.nodes.empty()) throw Error(ErrorCode::EmptyGraph, "graph has no nodes");
    const std::size_t start = g.nearest_node(given_point1);
    const std::size_t goal = g.nearest_node(given_point2);
    const auto nodes = shortest_node_path(g, start, goal, min_depth);

    const auto adj = g.adjacency();
    PlannedRoute route;
    auto push_point = [&](const Vec2& p, double depth) {
        if (!route.path_points.empty() && route.path_points.back() == p) return;
        route.path_points.push_back(p);
        route.path_depths.push_back(depth);
    };

    if (nodes.size() == 1) {
        push_point(g.nodes[nodes[0]], g.node_depths[nodes[0]]);
        return route;
    }

    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        const std::size_t a = nodes[i];
        const std::size_t b = nodes[i + 1];
        // The shortest qualifying edge between this node pair.
        const NavEdge* best = nullptr;
        for (std::size_t ei : adj[a]) {
            const NavEdge& e = g.edges[ei];
            if (e.depth < min_depth) continue;
            const std::size_t other = e.a == a ? e.b : e.a;
            if (other != b) continue;
            if (!best || e.length < best->length) best = &e;
        }
        Polyline pl = best->polyline;
        if (best->a != a) std::reverse(pl.begin(), pl.end());
        for (const auto& p : pl) push_point(p, best->depth);
    }
    return route;
}

PlannedRoute refine_path(const PlannedRoute& route, double dup_tol, int window) {
    PlannedRoute dedup;
    for (std::size_t i = 0; i < route.path_points.size(); ++i) {
        if (!dedup.path_points.empty() &&
            distance(dedup.path_points.back(), route.path_points[i]) < dup_tol) {
            continue;
        }
        dedup.path_points.push_back(route.path_points[i]);
        dedup.path_depths.push_back(route.path_depths[i]);
    }
    // The endpoint survives even when it fell inside the last cluster.
    if (!route.path_points.empty() && dedup.path_points.size() >= 2 &&
        !(dedup.path_points.back() == route.path_points.back())) {
        dedup.path_points.back() = route.path_points.back();
        dedup.path_depths.back() = route.path_depths.back();
    }

    const std::size_t n = dedup.path_points.size();
    if (window <= 1 || n <= 2) return dedup;

    const int half = (window - 1) / 2;
    PlannedRoute out = dedup;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        // Shrink the window symmetrically near the ends.
        const int reach = std::min<int>({half, int(i), int(n - 1 - i)});
        Vec2 sum{0.0, 0.0};
        int count = 0;
        for (int k = -reach; k <= reach; ++k) {
            sum = sum + dedup.path_points[std::size_t(int(i) + k)];
            ++count;
        }
        out.path_points[i] = sum * (1.0 / count);
    }

    // Depths re-sampled from the nearest original point.
    for (std::size_t i = 0; i < out.path_points.size(); ++i) {
        double best_d = std::numeric_limits<double>::infinity();
        double depth = 0.0;
        for (std::size_t j = 0; j < route.path_points.size(); ++j) {
            const double d = distance(out.path_points[i], route.path_points[j]);
            if (d < best_d) {
                best_d = d;
                depth = route.path_depths[j];
            }
        }
        out.path_depths[i] = depth;
    }
    return out;
}

} // namespace absim
