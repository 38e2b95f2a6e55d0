#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "blueberry/geometry.hpp"
#include "blueberry/report.hpp"

namespace blueberry {

struct GpsPoint {
    double lat_deg = 0.0;
    double lon_deg = 0.0;
};

/// A georeferenced field: four corners in counterclockwise order forming a
/// convex quadrilateral, the bush-row direction in degrees clockwise from
/// true north, and the field-level constants used by yield estimation.
struct FieldSpec {
    std::string name;
    std::array<GpsPoint, 4> corners{};
    double row_direction_deg = 0.0;  // [0, 180)
    double area_acres = 0.0;
    long long bush_count = 0;
};

/// Throws SchemaError when the spec violates its invariants.
void validate(const FieldSpec& field);

FieldSpec load_field_spec(const std::filesystem::path& path);

/// Equirectangular projection about the corner centroid: x east, y north, in
/// meters on a 6371 km sphere. Valid within 10 km of the field; farther
/// points are an error. project_to_gps is its exact inverse.
Point2D project_to_local(const FieldSpec& field, GpsPoint gps);
GpsPoint project_to_gps(const FieldSpec& field, Point2D local);

/// Rotation between the local east-north frame and the row-aligned frame in
/// which bush rows run along +x.
Point2D local_to_row_frame(const FieldSpec& field, Point2D local);
Point2D row_frame_to_local(const FieldSpec& field, Point2D row_frame);

struct GridSpec {
    int m_rows = 1;
    int n_cols = 1;
};

/// Parse "MxN" (e.g. "3x4").
GridSpec parse_grid_spec(std::string_view text);

/// One grid cell in the row-aligned frame. m splits the along-row extent,
/// n the perpendicular extent.
struct GridCell {
    int m = 0;
    int n = 0;
    BoundingBox rect;  // row-aligned frame, meters
};

/// Split the bounding rectangle of the projected corners (in the row-aligned
/// frame) into m_rows x n_cols equal rectangles that tile it exactly.
std::vector<GridCell> partition_grid(const FieldSpec& field, const GridSpec& grid);

enum class SamplingStrategy { Point, Row };

std::string_view sampling_strategy_name(SamplingStrategy strategy) noexcept;
SamplingStrategy parse_sampling_strategy(std::string_view name);

struct CellSample {
    int m = 0;
    int n = 0;
    Point2D point;  // row-aligned frame
};

/// One waypoint per cell, a pure function of (seed, cell index). Point
/// strategy picks a point strictly inside the cell; row strategy picks a
/// point on the cell's smaller-x edge, which runs perpendicular to the rows.
std::vector<CellSample> sample_points(const std::vector<GridCell>& cells,
                                      SamplingStrategy strategy, std::uint64_t seed);

struct Waypoint {
    int cell_m = 0;
    int cell_n = 0;
    Point2D row_frame;
    Point2D local;  // east-north meters about the field centroid
    GpsPoint gps;
    bool inside_field = true;  // false when the rectangle hull sticks out of a skewed field
};

struct SamplePlan {
    SamplingStrategy strategy = SamplingStrategy::Point;
    std::uint64_t seed = 0;
    std::vector<Waypoint> waypoints;
    double altitude_m = 0.0;
    double standoff_m = 0.0;
};

SamplePlan make_sample_plan(const FieldSpec& field, const GridSpec& grid,
                            SamplingStrategy strategy, std::uint64_t seed, double altitude_m,
                            double standoff_m);

struct BushPosition {
    std::string bush_id;
    Point2D location;  // local east-north meters
};

/// Minimal Euclidean distance, ties by lexicographic bush_id. Empty list is
/// an error.
const BushPosition& nearest_bush(Point2D p, const std::vector<BushPosition>& bushes);

/// Grid shapes with the same cell count whose cells are closest to square,
/// for the CLI to suggest when the requested cells are strongly oblong.
GridSpec squarest_grid(const FieldSpec& field, int cell_count);

ReportTable to_report_table(const SamplePlan& plan, const FieldSpec& field);

}  // namespace blueberry
