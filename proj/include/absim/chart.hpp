#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "absim/geometry.hpp"

namespace absim {

using AttrValue = std::variant<double, std::string>;
using AttrTable = std::map<std::string, AttrValue>;

enum class GeometryKind { Point, Polyline, Polygon };

// One record as read from a chart source, geometry already in local meters.
struct RawFeature {
    GeometryKind kind = GeometryKind::Point;
    std::vector<std::vector<Vec2>> parts; // rings for polygons, parts for polylines
    AttrTable attributes;
};

// Per-polygon attribute record of a chart layer.
struct FeatureInfo {
    double depth = 0.0; // resolved via SOUACC-then-VERDAT precedence
    std::optional<double> souacc;
    std::optional<double> verdat;
    BBox boundingbox;
    std::string region;
    AttrTable extra; // unrecognized attributes, preserved verbatim
};

struct PolygonEntity {
    std::vector<Ring> rings;
    FeatureInfo info;
};

struct LineEntity {
    Polyline points;
    std::string region;
};

struct ChartLayer {
    std::vector<Vec2> points;
    std::vector<LineEntity> lines;
    std::vector<PolygonEntity> polygons;
};

// Categorized chart memory: one layer per registered feature class.
class ChartFeatureSet {
public:
    ChartFeatureSet();

    static const std::vector<std::string>& default_classes(); // depare, wtwaxs, bridge, lndare

    void register_class(const std::string& name);
    bool has_class(const std::string& name) const;

    ChartLayer& layer(const std::string& name);
    const ChartLayer& layer(const std::string& name) const;
    const std::map<std::string, ChartLayer>& layers() const { return layers_; }

    const Projection& projection() const { return projection_; }
    void set_projection(const Projection& p) { projection_ = p; }

    BBox bounds() const;

private:
    std::map<std::string, ChartLayer> layers_;
    Projection projection_;
};

// ESRI shapefile + dBASE pair decoded into raw features. Only 2-D Point,
// PolyLine and Polygon shapes are supported; null records are skipped.
std::vector<RawFeature> parse_shapefile(std::span<const std::uint8_t> shp_bytes,
                                        std::span<const std::uint8_t> dbf_bytes,
                                        const Projection& proj);

// The JSON chart format (feature collection, degrees lon/lat). When the
// document carries an "origin" entry that projection is reused; otherwise
// the tangent point is the mean of all coordinates.
struct JsonChart {
    std::vector<std::pair<std::string, RawFeature>> features; // (class, feature)
    Projection projection;
};
JsonChart parse_chart_json(const std::string& text);

std::string write_chart_json(const ChartFeatureSet& chart);

// Routes classified features into the chart memory. Depth attributes are
// resolved SOUACC first, then VERDAT; a depare polygon with neither gets
// depth 0 (non-navigable) and a warning.
ChartFeatureSet build_chart_memory(
    const std::vector<std::pair<std::string, RawFeature>>& features,
    const std::vector<std::string>& extra_classes = {});

// Drops consecutive vertices closer than epsilon (keeping the first) and
// splits parts into standalone segments; parts left with fewer than two
// vertices disappear.
std::vector<LineEntity> clean_waterway_axes(const std::vector<LineEntity>& lines, double epsilon);

// Convenience loader: all *.shp/*.dbf pairs in a directory (class = stem)
// or a chart JSON file, depending on the path.
ChartFeatureSet load_chart_directory(const std::string& dir);
ChartFeatureSet load_chart_json_file(const std::string& path);

} // namespace absim
