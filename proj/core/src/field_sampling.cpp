#include "blueberry/field_sampling.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>

#include <nlohmann/json.hpp>

#include "blueberry/errors.hpp"

namespace blueberry {

namespace {

constexpr double kEarthRadiusM = 6371000.0;
constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kMaxProjectionRangeM = 10000.0;

GpsPoint centroid(const FieldSpec& field) {
    GpsPoint c;
    for (const auto& corner : field.corners) {
        c.lat_deg += corner.lat_deg / 4.0;
        c.lon_deg += corner.lon_deg / 4.0;
    }
    return c;
}

double cross(Point2D o, Point2D a, Point2D b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

Point2D project_about(GpsPoint origin, GpsPoint gps) {
    const double x = kEarthRadiusM * (gps.lon_deg - origin.lon_deg) * kDegToRad *
                     std::cos(origin.lat_deg * kDegToRad);
    const double y = kEarthRadiusM * (gps.lat_deg - origin.lat_deg) * kDegToRad;
    return {x, y};
}

std::array<Point2D, 4> projected_corners(const FieldSpec& field) {
    const GpsPoint origin = centroid(field);
    std::array<Point2D, 4> out;
    for (std::size_t i = 0; i < 4; ++i) out[i] = project_about(origin, field.corners[i]);
    return out;
}

// splitmix64 finalizer; the basis of the per-cell counter RNG.
std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Uniform in the open interval (0,1); never hits either endpoint.
double unit_open(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t cell_stream(std::uint64_t seed, int m, int n) {
    std::uint64_t k = mix64(seed);
    k = mix64(k ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(m)));
    k = mix64(k ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(n)));
    return k;
}

}  // namespace

void validate(const FieldSpec& field) {
    for (const auto& corner : field.corners) {
        if (!std::isfinite(corner.lat_deg) || !std::isfinite(corner.lon_deg) ||
            std::abs(corner.lat_deg) > 90.0 || std::abs(corner.lon_deg) > 180.0) {
            throw SchemaError("field corner out of GPS range");
        }
    }
    if (!(field.row_direction_deg >= 0.0 && field.row_direction_deg < 180.0)) {
        throw SchemaError("row_direction_deg must lie in [0, 180)");
    }
    if (!(field.area_acres > 0.0)) {
        throw SchemaError("area_acres must be positive");
    }
    if (field.bush_count < 1) {
        throw SchemaError("bush_count must be positive");
    }
    const auto pts = projected_corners(field);
    for (std::size_t i = 0; i < 4; ++i) {
        const double c = cross(pts[i], pts[(i + 1) % 4], pts[(i + 2) % 4]);
        if (c <= 0.0) {
            throw SchemaError(
                "corners must form a strictly convex quadrilateral in counterclockwise order");
        }
    }
}

FieldSpec load_field_spec(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError("field spec " + path.string() + ": " + e.what());
    }
    try {
        FieldSpec field;
        field.name = doc.value("name", path.stem().string());
        const auto& corners = doc.at("corners");
        if (!corners.is_array() || corners.size() != 4) {
            throw SchemaError("field spec must list exactly 4 corners");
        }
        for (std::size_t i = 0; i < 4; ++i) {
            field.corners[i] = {corners[i].at("lat").get<double>(),
                                corners[i].at("lon").get<double>()};
        }
        field.row_direction_deg = doc.at("row_direction_deg").get<double>();
        field.area_acres = doc.at("area_acres").get<double>();
        field.bush_count = doc.at("bush_count").get<long long>();
        validate(field);
        return field;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError("field spec " + path.string() + ": " + e.what());
    }
}

Point2D project_to_local(const FieldSpec& field, GpsPoint gps) {
    const Point2D p = project_about(centroid(field), gps);
    if (std::hypot(p.x, p.y) > kMaxProjectionRangeM) {
        throw Error("point is more than 10 km from the field centroid; projection invalid");
    }
    return p;
}

GpsPoint project_to_gps(const FieldSpec& field, Point2D local) {
    const GpsPoint origin = centroid(field);
    GpsPoint gps;
    gps.lat_deg = origin.lat_deg + local.y / (kEarthRadiusM * kDegToRad);
    gps.lon_deg =
        origin.lon_deg + local.x / (kEarthRadiusM * kDegToRad * std::cos(origin.lat_deg * kDegToRad));
    return gps;
}

Point2D local_to_row_frame(const FieldSpec& field, Point2D local) {
    const double d = field.row_direction_deg * kDegToRad;
    const double sd = std::sin(d), cd = std::cos(d);
    return {local.x * sd + local.y * cd, -local.x * cd + local.y * sd};
}

Point2D row_frame_to_local(const FieldSpec& field, Point2D rf) {
    const double d = field.row_direction_deg * kDegToRad;
    const double sd = std::sin(d), cd = std::cos(d);
    return {rf.x * sd - rf.y * cd, rf.x * cd + rf.y * sd};
}

GridSpec parse_grid_spec(std::string_view text) {
    const std::size_t sep = text.find('x');
    GridSpec grid;
    const auto parse_part = [&](std::string_view part, int& out) {
        const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), out);
        return ec == std::errc() && ptr == part.data() + part.size() && out >= 1;
    };
    if (sep == std::string_view::npos || !parse_part(text.substr(0, sep), grid.m_rows) ||
        !parse_part(text.substr(sep + 1), grid.n_cols)) {
        throw SchemaError("grid must be given as MxN with positive integers, got '" +
                          std::string(text) + "'");
    }
    return grid;
}

std::vector<GridCell> partition_grid(const FieldSpec& field, const GridSpec& grid) {
    validate(field);
    if (grid.m_rows < 1 || grid.n_cols < 1) {
        throw SchemaError("grid dimensions must be positive");
    }
    double u0 = std::numeric_limits<double>::infinity(), v0 = u0;
    double u1 = -u0, v1 = -v0;
    for (const auto& corner : projected_corners(field)) {
        const Point2D rf = local_to_row_frame(field, corner);
        u0 = std::min(u0, rf.x);
        u1 = std::max(u1, rf.x);
        v0 = std::min(v0, rf.y);
        v1 = std::max(v1, rf.y);
    }
    const double du = (u1 - u0) / grid.m_rows;
    const double dv = (v1 - v0) / grid.n_cols;
    std::vector<GridCell> cells;
    cells.reserve(static_cast<std::size_t>(grid.m_rows) * grid.n_cols);
    for (int m = 0; m < grid.m_rows; ++m) {
        for (int n = 0; n < grid.n_cols; ++n) {
            // shared edges: reuse exact partition points so cells tile the rectangle
            const double a = m == 0 ? u0 : u0 + m * du;
            const double b = m == grid.m_rows - 1 ? u1 : u0 + (m + 1) * du;
            const double c = n == 0 ? v0 : v0 + n * dv;
            const double d = n == grid.n_cols - 1 ? v1 : v0 + (n + 1) * dv;
            cells.push_back(GridCell{m, n, BoundingBox(a, c, b, d)});
        }
    }
    return cells;
}

std::string_view sampling_strategy_name(SamplingStrategy strategy) noexcept {
    return strategy == SamplingStrategy::Point ? "point" : "row";
}

SamplingStrategy parse_sampling_strategy(std::string_view name) {
    if (name == "point") return SamplingStrategy::Point;
    if (name == "row") return SamplingStrategy::Row;
    throw SchemaError("unknown sampling strategy '" + std::string(name) +
                      "' (expected point or row)");
}

std::vector<CellSample> sample_points(const std::vector<GridCell>& cells,
                                      SamplingStrategy strategy, std::uint64_t seed) {
    std::vector<CellSample> out;
    out.reserve(cells.size());
    for (const auto& cell : cells) {
        const std::uint64_t k = cell_stream(seed, cell.m, cell.n);
        const double r1 = unit_open(mix64(k + 1));
        const double r2 = unit_open(mix64(k + 2));
        CellSample sample;
        sample.m = cell.m;
        sample.n = cell.n;
        if (strategy == SamplingStrategy::Point) {
            sample.point = {cell.rect.x_min() + cell.rect.width() * r1,
                            cell.rect.y_min() + cell.rect.height() * r2};
        } else {
            // the perpendicular edge at smaller x
            sample.point = {cell.rect.x_min(), cell.rect.y_min() + cell.rect.height() * r1};
        }
        out.push_back(sample);
    }
    return out;
}

SamplePlan make_sample_plan(const FieldSpec& field, const GridSpec& grid,
                            SamplingStrategy strategy, std::uint64_t seed, double altitude_m,
                            double standoff_m) {
    if (!(altitude_m > 0.0) || !(standoff_m > 0.0)) {
        throw SchemaError("altitude and standoff must be positive");
    }
    const auto cells = partition_grid(field, grid);
    const auto samples = sample_points(cells, strategy, seed);

    std::array<Point2D, 4> corners_rf;
    {
        const auto pts = projected_corners(field);
        for (std::size_t i = 0; i < 4; ++i) corners_rf[i] = local_to_row_frame(field, pts[i]);
    }
    const auto inside_quad = [&](Point2D p) {
        for (std::size_t i = 0; i < 4; ++i) {
            if (cross(corners_rf[i], corners_rf[(i + 1) % 4], p) < -1e-9) return false;
        }
        return true;
    };

    SamplePlan plan;
    plan.strategy = strategy;
    plan.seed = seed;
    plan.altitude_m = altitude_m;
    plan.standoff_m = standoff_m;
    for (const auto& sample : samples) {
        Waypoint wp;
        wp.cell_m = sample.m;
        wp.cell_n = sample.n;
        wp.row_frame = sample.point;
        wp.local = row_frame_to_local(field, sample.point);
        wp.gps = project_to_gps(field, wp.local);
        wp.inside_field = inside_quad(sample.point);
        plan.waypoints.push_back(wp);
    }
    return plan;
}

const BushPosition& nearest_bush(Point2D p, const std::vector<BushPosition>& bushes) {
    if (bushes.empty()) {
        throw Error("no bush positions to search");
    }
    const BushPosition* best = &bushes[0];
    double best_d2 = squared_distance(p, bushes[0].location);
    for (std::size_t i = 1; i < bushes.size(); ++i) {
        const double d2 = squared_distance(p, bushes[i].location);
        if (d2 < best_d2 || (d2 == best_d2 && bushes[i].bush_id < best->bush_id)) {
            best = &bushes[i];
            best_d2 = d2;
        }
    }
    return *best;
}

GridSpec squarest_grid(const FieldSpec& field, int cell_count) {
    const auto whole = partition_grid(field, GridSpec{1, 1});
    const double eu = whole[0].rect.width();
    const double ev = whole[0].rect.height();
    GridSpec best{1, cell_count};
    double best_score = std::numeric_limits<double>::infinity();
    for (int m = 1; m <= cell_count; ++m) {
        if (cell_count % m != 0) continue;
        const int n = cell_count / m;
        const double aspect = (eu / m) / (ev / n);
        const double score = std::abs(std::log(aspect));
        if (score < best_score) {
            best_score = score;
            best = GridSpec{m, n};
        }
    }
    return best;
}

ReportTable to_report_table(const SamplePlan& plan, const FieldSpec& field) {
    ReportTable table;
    table.meta.emplace_back("field", ReportValue::text(field.name));
    table.meta.emplace_back("strategy",
                            ReportValue::text(std::string(sampling_strategy_name(plan.strategy))));
    table.meta.emplace_back("seed", ReportValue::integer(static_cast<long long>(plan.seed)));
    table.meta.emplace_back("altitude_m", ReportValue::number(plan.altitude_m));
    table.meta.emplace_back("standoff_m", ReportValue::number(plan.standoff_m));
    table.meta.emplace_back("area_acres", ReportValue::number(field.area_acres));
    table.meta.emplace_back("bush_count", ReportValue::integer(field.bush_count));
    table.columns = {"cell_m", "cell_n", "local_x", "local_y", "lat", "lon", "inside_field"};
    char buf[32];
    for (const auto& wp : plan.waypoints) {
        std::snprintf(buf, sizeof buf, "%.9f", wp.gps.lat_deg);
        std::string lat = buf;
        std::snprintf(buf, sizeof buf, "%.9f", wp.gps.lon_deg);
        std::string lon = buf;
        table.rows.push_back({ReportValue::integer(wp.cell_m), ReportValue::integer(wp.cell_n),
                              ReportValue::number(wp.local.x), ReportValue::number(wp.local.y),
                              ReportValue::text(lat), ReportValue::text(lon),
                              ReportValue::boolean(wp.inside_field)});
    }
    return table;
}

}  // namespace blueberry
