#include "absim/geometry.hpp"

#include <algorithm>
#include <limits>

namespace absim {

BBox BBox::of(const std::vector<Vec2>& pts) {
    BBox b;
    if (pts.empty()) return b;
    b.xmin = b.xmax = pts.front().x;
    b.ymin = b.ymax = pts.front().y;
    for (const auto& p : pts) {
        b.xmin = std::min(b.xmin, p.x);
        b.xmax = std::max(b.xmax, p.x);
        b.ymin = std::min(b.ymin, p.y);
        b.ymax = std::max(b.ymax, p.y);
    }
    return b;
}

void BBox::expand(const BBox& o) {
    xmin = std::min(xmin, o.xmin);
    xmax = std::max(xmax, o.xmax);
    ymin = std::min(ymin, o.ymin);
    ymax = std::max(ymax, o.ymax);
}

double wrap_angle(double a) {
    constexpr double two_pi = 2.0 * M_PI;
    a = std::fmod(a, two_pi);
    if (a <= -M_PI) a += two_pi;
    else if (a > M_PI) a -= two_pi;
    return a;
}

double polyline_length(const Polyline& line) {
    double len = 0.0;
    for (std::size_t i = 1; i < line.size(); ++i) len += distance(line[i - 1], line[i]);
    return len;
}

namespace {

bool on_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const Vec2 ap = p - a;
    const double cross = ab.cross(ap);
    if (cross != 0.0) return false;
    const double dot = ap.dot(ab);
    return dot >= 0.0 && dot <= ab.dot(ab);
}

// Signed winding contribution of one ring.
int winding_number(const Vec2& p, const Ring& ring) {
    int wn = 0;
    for (std::size_t i = 1; i < ring.size(); ++i) {
        const Vec2& a = ring[i - 1];
        const Vec2& b = ring[i];
        if (a.y <= p.y) {
            if (b.y > p.y && (b - a).cross(p - a) > 0.0) ++wn;
        } else {
            if (b.y <= p.y && (b - a).cross(p - a) < 0.0) --wn;
        }
    }
    return wn;
}

} // namespace

bool point_in_rings(const Vec2& p, const std::vector<Ring>& rings) {
    // Boundary counts as inside regardless of ring role.
    for (const auto& ring : rings) {
        for (std::size_t i = 1; i < ring.size(); ++i) {
            if (on_segment(p, ring[i - 1], ring[i])) return true;
        }
    }
    int crossings = 0;
    for (const auto& ring : rings) crossings += std::abs(winding_number(p, ring)) % 2;
    return crossings % 2 == 1;
}

ClosestPoint closest_point_on_polyline(const Vec2& p, const Polyline& line) {
    ClosestPoint best;
    best.dist = std::numeric_limits<double>::infinity();
    if (line.empty()) return best;
    if (line.size() == 1) return {line.front(), distance(p, line.front()), 0};

    for (std::size_t i = 1; i < line.size(); ++i) {
        const Vec2& a = line[i - 1];
        const Vec2& b = line[i];
        const Vec2 ab = b - a;
        const double len2 = ab.dot(ab);
        double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        const Vec2 q = a + ab * t;
        const double d = distance(p, q);
        if (d < best.dist) { // strict: ties stay with the earlier segment
            best.point = q;
            best.dist = d;
            best.segment = i - 1;
        }
    }
    return best;
}

Projection::Projection(double lon0_deg, double lat0_deg)
    : lon0_(lon0_deg), lat0_(lat0_deg), cos_lat0_(std::cos(lat0_deg * M_PI / 180.0)), valid_(true) {}

Vec2 Projection::to_local(double lon_deg, double lat_deg) const {
    const double k = M_PI / 180.0;
    return {kEarthRadius * (lon_deg - lon0_) * k * cos_lat0_, kEarthRadius * (lat_deg - lat0_) * k};
}

void Projection::to_geographic(const Vec2& local, double& lon_deg, double& lat_deg) const {
    const double k = 180.0 / M_PI;
    lon_deg = lon0_ + local.x / (kEarthRadius * cos_lat0_) * k;
    lat_deg = lat0_ + local.y / kEarthRadius * k;
}

} // namespace absim
