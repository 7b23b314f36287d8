#include "absim/chart.hpp"

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "absim/errors.hpp"
#include "absim/logging.hpp"

namespace absim {

namespace {

using json = nlohmann::json;

// --- binary helpers (shapefile is mixed-endian by design) ---

class Cursor {
public:
    Cursor(std::span<const std::uint8_t> data, ErrorCode on_overrun)
        : data_(data), on_overrun_(on_overrun) {}

    std::size_t pos() const { return pos_; }
    std::size_t size() const { return data_.size(); }
    bool exhausted() const { return pos_ >= data_.size(); }

    void seek(std::size_t pos) { pos_ = pos; }

    void require(std::size_t n) const {
        if (pos_ + n > data_.size())
            throw Error(on_overrun_, "declared length exceeds buffer");
    }

    std::uint32_t u32_be() {
        require(4);
        std::uint32_t v = (std::uint32_t(data_[pos_]) << 24) | (std::uint32_t(data_[pos_ + 1]) << 16) |
                          (std::uint32_t(data_[pos_ + 2]) << 8) | std::uint32_t(data_[pos_ + 3]);
        pos_ += 4;
        return v;
    }

    std::uint32_t u32_le() {
        require(4);
        std::uint32_t v = std::uint32_t(data_[pos_]) | (std::uint32_t(data_[pos_ + 1]) << 8) |
                          (std::uint32_t(data_[pos_ + 2]) << 16) | (std::uint32_t(data_[pos_ + 3]) << 24);
        pos_ += 4;
        return v;
    }

    std::uint16_t u16_le() {
        require(2);
        std::uint16_t v = std::uint16_t(data_[pos_] | (data_[pos_ + 1] << 8));
        pos_ += 2;
        return v;
    }

    std::uint8_t u8() {
        require(1);
        return data_[pos_++];
    }

    double f64_le() {
        require(8);
        std::uint64_t v = 0;
        for (int i = 7; i >= 0; --i) v = (v << 8) | data_[pos_ + std::size_t(i)];
        pos_ += 8;
        double d;
        std::memcpy(&d, &v, 8);
        return d;
    }

    std::string bytes(std::size_t n) {
        require(n);
        std::string s(reinterpret_cast<const char*>(data_.data() + pos_), n);
        pos_ += n;
        return s;
    }

private:
    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
    ErrorCode on_overrun_;
};

constexpr std::uint32_t kShapefileMagic = 9994;
constexpr int kShapeNull = 0;
constexpr int kShapePoint = 1;
constexpr int kShapePolyLine = 3;
constexpr int kShapePolygon = 5;

bool supported_shape_type(int t) {
    return t == kShapeNull || t == kShapePoint || t == kShapePolyLine || t == kShapePolygon;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\0", 0, 3);
    if (b == std::string::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\0", std::string::npos, 3);
    return s.substr(b, e - b + 1);
}

struct DbfColumn {
    std::string name;
    char type = 'C';
    std::size_t length = 0;
};

std::vector<AttrTable> parse_dbf(std::span<const std::uint8_t> bytes) {
    Cursor c(bytes, ErrorCode::TruncatedFile);
    c.u8();              // version
    c.bytes(3);          // last-update date
    const std::uint32_t record_count = c.u32_le();
    const std::uint16_t header_size = c.u16_le();
    const std::uint16_t record_size = c.u16_le();
    c.bytes(20);

    std::vector<DbfColumn> columns;
    while (true) {
        c.require(1);
        if (bytes[c.pos()] == 0x0D) break;
        DbfColumn col;
        col.name = trim(c.bytes(11));
        col.type = static_cast<char>(c.u8());
        c.bytes(4);
        col.length = c.u8();
        c.bytes(15);
        columns.push_back(std::move(col));
        if (c.pos() >= header_size) throw Error(ErrorCode::TruncatedFile, "dbf field table overruns header");
    }

    std::vector<AttrTable> records;
    records.reserve(record_count);
    for (std::uint32_t i = 0; i < record_count; ++i) {
        c.seek(header_size + std::size_t(i) * record_size);
        c.require(record_size);
        c.u8(); // deletion flag; ignored, the shp side has no such notion
        AttrTable attrs;
        for (const auto& col : columns) {
            const std::string raw = c.bytes(col.length);
            const std::string value = trim(raw);
            if (value.empty()) continue;
            if (col.type == 'N' || col.type == 'F') {
                try {
                    attrs[col.name] = std::stod(value);
                } catch (const std::exception&) {
                    attrs[col.name] = value;
                }
            } else {
                attrs[col.name] = value; // C and anything exotic kept as text
            }
        }
        records.push_back(std::move(attrs));
    }
    return records;
}

std::vector<std::vector<Vec2>> read_parts(Cursor& c, const Projection& proj, bool close_rings) {
    c.f64_le(); // record box, unused
    c.f64_le();
    c.f64_le();
    c.f64_le();
    const std::uint32_t num_parts = c.u32_le();
    const std::uint32_t num_points = c.u32_le();
    std::vector<std::uint32_t> starts(num_parts);
    for (auto& s : starts) s = c.u32_le();

    std::vector<Vec2> pts;
    pts.reserve(num_points);
    for (std::uint32_t i = 0; i < num_points; ++i) {
        const double lon = c.f64_le();
        const double lat = c.f64_le();
        pts.push_back(proj.to_local(lon, lat));
    }

    std::vector<std::vector<Vec2>> parts;
    for (std::uint32_t pi = 0; pi < num_parts; ++pi) {
        const std::uint32_t begin = starts[pi];
        const std::uint32_t end = pi + 1 < num_parts ? starts[pi + 1] : num_points;
        if (begin > end || end > num_points)
            throw Error(ErrorCode::TruncatedFile, "part index overruns point array");
        std::vector<Vec2> part(pts.begin() + begin, pts.begin() + end);
        if (close_rings && part.size() >= 3 && !(part.front() == part.back())) {
            log_debug("closing an unclosed polygon ring");
            part.push_back(part.front());
        }
        parts.push_back(std::move(part));
    }
    return parts;
}

Projection projection_from_json(const json& doc) {
    if (doc.contains("origin")) {
        const auto& o = doc.at("origin");
        if (!o.is_array() || o.size() != 2)
            throw Error(ErrorCode::SchemaError, "origin must be [lon, lat]");
        return Projection(o[0].get<double>(), o[1].get<double>());
    }
    // Tangent point at the mean of all coordinates.
    double lon_sum = 0.0, lat_sum = 0.0;
    std::size_t n = 0;
    for (const auto& f : doc.at("features")) {
        if (!f.contains("geometry")) continue;
        const auto& g = f.at("geometry");
        for (const char* key : {"rings", "parts"}) {
            if (!g.contains(key)) continue;
            for (const auto& part : g.at(key)) {
                for (const auto& pt : part) {
                    lon_sum += pt.at(0).get<double>();
                    lat_sum += pt.at(1).get<double>();
                    ++n;
                }
            }
        }
        if (g.contains("point")) {
            lon_sum += g.at("point").at(0).get<double>();
            lat_sum += g.at("point").at(1).get<double>();
            ++n;
        }
    }
    if (n == 0) return Projection(0.0, 0.0);
    return Projection(lon_sum / double(n), lat_sum / double(n));
}

AttrTable attrs_from_json(const json& a) {
    AttrTable out;
    for (auto it = a.begin(); it != a.end(); ++it) {
        if (it.value().is_number()) out[it.key()] = it.value().get<double>();
        else if (it.value().is_string()) out[it.key()] = it.value().get<std::string>();
        else throw Error(ErrorCode::SchemaError, "attribute values must be numbers or strings");
    }
    return out;
}

std::optional<double> numeric_attr(const AttrTable& attrs, const std::string& key) {
    auto it = attrs.find(key);
    if (it == attrs.end()) return std::nullopt;
    if (const double* d = std::get_if<double>(&it->second)) return *d;
    try {
        return std::stod(std::get<std::string>(it->second));
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

std::string string_attr(const AttrTable& attrs, const std::string& key) {
    auto it = attrs.find(key);
    if (it == attrs.end()) return {};
    if (const std::string* s = std::get_if<std::string>(&it->second)) return *s;
    return std::to_string(std::get<double>(it->second));
}

} // namespace

ChartFeatureSet::ChartFeatureSet() {
    for (const auto& name : default_classes()) layers_[name] = {};
}

const std::vector<std::string>& ChartFeatureSet::default_classes() {
    static const std::vector<std::string> names = {"depare", "wtwaxs", "bridge", "lndare"};
    return names;
}

void ChartFeatureSet::register_class(const std::string& name) { layers_.try_emplace(name); }

bool ChartFeatureSet::has_class(const std::string& name) const { return layers_.count(name) > 0; }

ChartLayer& ChartFeatureSet::layer(const std::string& name) {
    auto it = layers_.find(name);
    if (it == layers_.end()) throw Error(ErrorCode::UnknownClass, name);
    return it->second;
}

const ChartLayer& ChartFeatureSet::layer(const std::string& name) const {
    auto it = layers_.find(name);
    if (it == layers_.end()) throw Error(ErrorCode::UnknownClass, name);
    return it->second;
}

BBox ChartFeatureSet::bounds() const {
    BBox box;
    bool first = true;
    auto add = [&](const BBox& b) {
        if (first) { box = b; first = false; }
        else box.expand(b);
    };
    for (const auto& [name, layer] : layers_) {
        if (!layer.points.empty()) add(BBox::of(layer.points));
        for (const auto& line : layer.lines) add(BBox::of(line.points));
        for (const auto& poly : layer.polygons)
            for (const auto& ring : poly.rings) add(BBox::of(ring));
    }
    return box;
}

std::vector<RawFeature> parse_shapefile(std::span<const std::uint8_t> shp_bytes,
                                        std::span<const std::uint8_t> dbf_bytes,
                                        const Projection& proj) {
    Cursor c(shp_bytes, ErrorCode::TruncatedFile);
    if (c.u32_be() != kShapefileMagic)
        throw Error(ErrorCode::BadMagic, "shp file code is not 9994");
    c.seek(24);
    const std::size_t declared_bytes = std::size_t(c.u32_be()) * 2;
    if (declared_bytes > shp_bytes.size())
        throw Error(ErrorCode::TruncatedFile, "shp declared length exceeds buffer");
    c.seek(28);
    c.u32_le(); // version
    const int file_shape_type = int(c.u32_le());
    if (!supported_shape_type(file_shape_type))
        throw Error(ErrorCode::UnsupportedShapeType,
                    "shape type " + std::to_string(file_shape_type));

    std::vector<RawFeature> features;
    c.seek(100);
    while (c.pos() + 8 <= declared_bytes) {
        c.u32_be(); // record number
        const std::size_t content_words = c.u32_be();
        const std::size_t content_end = c.pos() + content_words * 2;
        if (content_end > shp_bytes.size())
            throw Error(ErrorCode::TruncatedFile, "record content exceeds buffer");

        const int shape_type = int(c.u32_le());
        if (!supported_shape_type(shape_type))
            throw Error(ErrorCode::UnsupportedShapeType,
                        "shape type " + std::to_string(shape_type));

        if (shape_type == kShapeNull) {
            c.seek(content_end);
            continue;
        }

        RawFeature f;
        switch (shape_type) {
            case kShapePoint: {
                f.kind = GeometryKind::Point;
                const double lon = c.f64_le();
                const double lat = c.f64_le();
                f.parts.push_back({proj.to_local(lon, lat)});
                break;
            }
            case kShapePolyLine:
                f.kind = GeometryKind::Polyline;
                f.parts = read_parts(c, proj, false);
                break;
            case kShapePolygon:
                f.kind = GeometryKind::Polygon;
                f.parts = read_parts(c, proj, true);
                break;
        }
        features.push_back(std::move(f));
        c.seek(content_end);
    }

    const auto attrs = parse_dbf(dbf_bytes);
    // Null shapes are skipped above but still occupy dbf rows only when the
    // writer emitted them; compare against the full shp record count.
    if (attrs.size() != features.size())
        throw Error(ErrorCode::RecordCountMismatch,
                    "shp has " + std::to_string(features.size()) + " records, dbf has " +
                        std::to_string(attrs.size()));
    for (std::size_t i = 0; i < features.size(); ++i) features[i].attributes = attrs[i];
    return features;
}

JsonChart parse_chart_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::SchemaError, e.what());
    }
    if (!doc.contains("features") || !doc.at("features").is_array())
        throw Error(ErrorCode::SchemaError, "missing features array");

    JsonChart out;
    out.projection = projection_from_json(doc);

    for (const auto& f : doc.at("features")) {
        if (!f.contains("class")) throw Error(ErrorCode::SchemaError, "feature missing class");
        if (!f.contains("geometry")) throw Error(ErrorCode::SchemaError, "feature missing geometry");
        if (!f.contains("attributes"))
            throw Error(ErrorCode::SchemaError, "feature missing attributes");

        const auto& g = f.at("geometry");
        const std::string kind = g.value("kind", "");
        RawFeature feat;
        feat.attributes = attrs_from_json(f.at("attributes"));

        auto read_coords = [&](const json& part) {
            std::vector<Vec2> pts;
            for (const auto& pt : part)
                pts.push_back(out.projection.to_local(pt.at(0).get<double>(), pt.at(1).get<double>()));
            return pts;
        };

        if (kind == "point") {
            feat.kind = GeometryKind::Point;
            if (!g.contains("point")) throw Error(ErrorCode::SchemaError, "point geometry needs point");
            feat.parts.push_back(
                {out.projection.to_local(g.at("point").at(0).get<double>(), g.at("point").at(1).get<double>())});
        } else if (kind == "polyline") {
            feat.kind = GeometryKind::Polyline;
            if (!g.contains("parts")) throw Error(ErrorCode::SchemaError, "polyline geometry needs parts");
            for (const auto& part : g.at("parts")) {
                auto pts = read_coords(part);
                if (pts.size() < 2) throw Error(ErrorCode::GeometryError, "polyline part with < 2 vertices");
                feat.parts.push_back(std::move(pts));
            }
        } else if (kind == "polygon") {
            feat.kind = GeometryKind::Polygon;
            if (!g.contains("rings")) throw Error(ErrorCode::SchemaError, "polygon geometry needs rings");
            for (const auto& ring : g.at("rings")) {
                auto pts = read_coords(ring);
                if (pts.size() < 4) throw Error(ErrorCode::GeometryError, "polygon ring with < 4 vertices");
                if (!(pts.front() == pts.back()))
                    throw Error(ErrorCode::GeometryError, "polygon ring is not closed");
                feat.parts.push_back(std::move(pts));
            }
        } else {
            throw Error(ErrorCode::SchemaError, "unknown geometry kind '" + kind + "'");
        }
        out.features.emplace_back(f.at("class").get<std::string>(), std::move(feat));
    }
    return out;
}

ChartFeatureSet build_chart_memory(
    const std::vector<std::pair<std::string, RawFeature>>& features,
    const std::vector<std::string>& extra_classes) {
    ChartFeatureSet chart;
    for (const auto& name : extra_classes) chart.register_class(name);

    for (const auto& [class_name, feature] : features) {
        if (!chart.has_class(class_name))
            throw Error(ErrorCode::UnknownClass, "unregistered class '" + class_name + "'");
        ChartLayer& layer = chart.layer(class_name);

        switch (feature.kind) {
            case GeometryKind::Point:
                for (const auto& part : feature.parts)
                    layer.points.insert(layer.points.end(), part.begin(), part.end());
                break;
            case GeometryKind::Polyline: {
                std::string region = string_attr(feature.attributes, "region");
                if (region.empty()) region = string_attr(feature.attributes, "sourcefile");
                for (const auto& part : feature.parts) layer.lines.push_back({part, region});
                break;
            }
            case GeometryKind::Polygon: {
                PolygonEntity poly;
                poly.rings = feature.parts;

                FeatureInfo& info = poly.info;
                info.souacc = numeric_attr(feature.attributes, "SOUACC");
                info.verdat = numeric_attr(feature.attributes, "VERDAT");
                info.region = string_attr(feature.attributes, "region");
                if (info.region.empty()) info.region = string_attr(feature.attributes, "sourcefile");

                if (info.souacc) {
                    info.depth = *info.souacc;
                } else if (info.verdat) {
                    info.depth = *info.verdat;
                } else {
                    info.depth = 0.0;
                    if (class_name == "depare")
                        log_warn("depare polygon without SOUACC or VERDAT; depth set to 0 (non-navigable)");
                }

                std::vector<Vec2> all;
                for (const auto& ring : poly.rings) all.insert(all.end(), ring.begin(), ring.end());
                info.boundingbox = BBox::of(all);

                for (const auto& [key, value] : feature.attributes) {
                    if (key == "SOUACC" || key == "VERDAT" || key == "region" || key == "sourcefile")
                        continue;
                    info.extra[key] = value;
                }
                layer.polygons.push_back(std::move(poly));
                break;
            }
        }
    }
    return chart;
}

std::vector<LineEntity> clean_waterway_axes(const std::vector<LineEntity>& lines, double epsilon) {
    std::vector<LineEntity> segments;
    for (const auto& line : lines) {
        Polyline kept;
        for (const auto& p : line.points) {
            if (kept.empty() || distance(kept.back(), p) >= epsilon) kept.push_back(p);
        }
        if (kept.size() >= 2) segments.push_back({std::move(kept), line.region});
    }
    return segments;
}

std::string write_chart_json(const ChartFeatureSet& chart) {
    json doc;
    doc["origin"] = {chart.projection().lon0(), chart.projection().lat0()};
    json features = json::array();

    const Projection& proj = chart.projection();
    auto coords = [&](const std::vector<Vec2>& pts) {
        json arr = json::array();
        for (const auto& p : pts) {
            double lon, lat;
            proj.to_geographic(p, lon, lat);
            arr.push_back({lon, lat});
        }
        return arr;
    };
    auto attr_json = [](const AttrTable& attrs) {
        json a = json::object();
        for (const auto& [k, v] : attrs) {
            if (const double* d = std::get_if<double>(&v)) a[k] = *d;
            else a[k] = std::get<std::string>(v);
        }
        return a;
    };

    for (const auto& [name, layer] : chart.layers()) {
        for (const auto& p : layer.points) {
            double lon, lat;
            proj.to_geographic(p, lon, lat);
            features.push_back({{"class", name},
                                {"geometry", {{"kind", "point"}, {"point", {lon, lat}}}},
                                {"attributes", json::object()}});
        }
        for (const auto& line : layer.lines) {
            json attrs = json::object();
            if (!line.region.empty()) attrs["region"] = line.region;
            features.push_back({{"class", name},
                                {"geometry", {{"kind", "polyline"}, {"parts", json::array({coords(line.points)})}}},
                                {"attributes", attrs}});
        }
        for (const auto& poly : layer.polygons) {
            json rings = json::array();
            for (const auto& ring : poly.rings) rings.push_back(coords(ring));
            AttrTable attrs = poly.info.extra;
            if (poly.info.souacc) attrs["SOUACC"] = *poly.info.souacc;
            if (poly.info.verdat) attrs["VERDAT"] = *poly.info.verdat;
            if (!poly.info.region.empty()) attrs["region"] = poly.info.region;
            features.push_back({{"class", name},
                                {"geometry", {{"kind", "polygon"}, {"rings", rings}}},
                                {"attributes", attr_json(attrs)}});
        }
    }
    doc["features"] = std::move(features);
    return doc.dump(2);
}

namespace {

std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

ChartFeatureSet load_chart_directory(const std::string& dir) {
    namespace fs = std::filesystem;
    std::vector<fs::path> shp_files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() == ".shp") shp_files.push_back(entry.path());
    }
    std::sort(shp_files.begin(), shp_files.end());
    if (shp_files.empty()) throw Error(ErrorCode::ChartError, "no .shp files in " + dir);

    // One shared tangent point: center of the combined header boxes.
    double lon_min = 0, lon_max = 0, lat_min = 0, lat_max = 0;
    bool first = true;
    for (const auto& path : shp_files) {
        const auto bytes = read_file_bytes(path.string());
        Cursor c(bytes, ErrorCode::TruncatedFile);
        c.seek(36);
        const double xmin = c.f64_le(), ymin = c.f64_le(), xmax = c.f64_le(), ymax = c.f64_le();
        if (first) {
            lon_min = xmin; lat_min = ymin; lon_max = xmax; lat_max = ymax;
            first = false;
        } else {
            lon_min = std::min(lon_min, xmin);
            lat_min = std::min(lat_min, ymin);
            lon_max = std::max(lon_max, xmax);
            lat_max = std::max(lat_max, ymax);
        }
    }
    const Projection proj((lon_min + lon_max) / 2.0, (lat_min + lat_max) / 2.0);

    std::vector<std::pair<std::string, RawFeature>> features;
    std::vector<std::string> extra_classes;
    for (const auto& path : shp_files) {
        const std::string stem = path.stem().string();
        fs::path dbf = path;
        dbf.replace_extension(".dbf");
        if (!fs::exists(dbf))
            throw Error(ErrorCode::ChartError, "missing dbf for " + path.string());

        const auto shp_bytes = read_file_bytes(path.string());
        const auto dbf_bytes = read_file_bytes(dbf.string());
        auto feats = parse_shapefile(shp_bytes, dbf_bytes, proj);
        const bool known = std::find(ChartFeatureSet::default_classes().begin(),
                                     ChartFeatureSet::default_classes().end(),
                                     stem) != ChartFeatureSet::default_classes().end();
        if (!known) extra_classes.push_back(stem);
        for (auto& f : feats) {
            if (!f.attributes.count("sourcefile")) f.attributes["sourcefile"] = stem;
            features.emplace_back(stem, std::move(f));
        }
    }
    ChartFeatureSet chart = build_chart_memory(features, extra_classes);
    chart.set_projection(proj);
    return chart;
}

ChartFeatureSet load_chart_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    JsonChart parsed = parse_chart_json(text);

    std::vector<std::string> extra_classes;
    for (const auto& [name, feature] : parsed.features) {
        const auto& defaults = ChartFeatureSet::default_classes();
        if (std::find(defaults.begin(), defaults.end(), name) == defaults.end())
            extra_classes.push_back(name);
    }
    ChartFeatureSet chart = build_chart_memory(parsed.features, extra_classes);
    chart.set_projection(parsed.projection);
    return chart;
}

} // namespace absim
