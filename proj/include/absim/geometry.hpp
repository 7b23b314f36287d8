#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace absim {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }

    bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }
};

using Polyline = std::vector<Vec2>;
using Ring = std::vector<Vec2>; // closed: front() == back()

struct BBox {
    double xmin = 0.0, ymin = 0.0, xmax = 0.0, ymax = 0.0;

    bool contains(const Vec2& p) const {
        return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
    }
    static BBox of(const std::vector<Vec2>& pts);
    void expand(const BBox& o);
};

inline double distance(const Vec2& a, const Vec2& b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

double polyline_length(const Polyline& line);

// Boundary-inclusive point-in-polygon over a set of rings, winding-number
// based with even-odd semantics across rings (holes subtract).
bool point_in_rings(const Vec2& p, const std::vector<Ring>& rings);

// Closest point on a polyline; ties resolved to the earlier segment.
struct ClosestPoint {
    Vec2 point;
    double dist = 0.0;
    std::size_t segment = 0;
};
ClosestPoint closest_point_on_polyline(const Vec2& p, const Polyline& line);

// Equirectangular tangent-plane projection about (lon0, lat0), degrees in,
// meters out. Adequate for charts spanning a few kilometres.
class Projection {
public:
    Projection() = default;
    Projection(double lon0_deg, double lat0_deg);

    Vec2 to_local(double lon_deg, double lat_deg) const;
    void to_geographic(const Vec2& local, double& lon_deg, double& lat_deg) const;

    double lon0() const { return lon0_; }
    double lat0() const { return lat0_; }
    bool valid() const { return valid_; }

    static constexpr double kEarthRadius = 6371000.0;

private:
    double lon0_ = 0.0;
    double lat0_ = 0.0;
    double cos_lat0_ = 1.0;
    bool valid_ = false;
};

} // namespace absim
