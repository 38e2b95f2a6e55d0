#pragma once

#include <map>
#include <string>
#include <vector>

#include "blueberry/data_model.hpp"
#include "blueberry/report.hpp"

namespace blueberry {

struct TileIndex {
    int row = 0;
    int col = 0;
    auto operator<=>(const TileIndex&) const = default;
};

struct Tile {
    TileIndex index;
    BoundingBox box;  // image frame
};

struct TilePlan {
    std::string image_id;
    int width = 0;
    int height = 0;
    std::vector<Tile> tiles;  // row-major order
};

/// Non-overlapping training tiles: tile_size x tile_size squares anchored at
/// the top-left, remainder strips discarded. An image smaller than the tile
/// yields an empty plan.
TilePlan plan_training_tiles(int width, int height, int tile_size = 640);

/// Overlapping inference tiles, as close as possible to target x target with
/// consecutive tiles overlapping by exactly `overlap` pixels per axis. Per
/// axis of length L the tile count is max(1, round((L-overlap)/(target-overlap)));
/// remainder pixels widen the leading tiles by one so sizes differ by at most
/// one pixel. A dimension <= overlap cannot satisfy the overlap contract and
/// is an error.
TilePlan plan_inference_tiles(int width, int height, int target = 700, int overlap = 60);

struct AssignedAnnotations {
    std::map<TileIndex, std::vector<GroundTruth>> by_tile;  // tile-local coordinates
    std::size_t dropped = 0;  // centers in discarded margins
};

/// Assign each annotation to the unique tile whose half-open box contains its
/// center, translating to tile-local coordinates and clipping to the tile.
/// Intended for (disjoint) training plans.
AssignedAnnotations assign_annotations(const TilePlan& plan, const std::vector<GroundTruth>& gts);

/// Distribute image-frame detections onto a plan's tiles by the center rule
/// (first covering tile in row-major order) and convert to tile-local
/// coordinates. Boxes are not clipped, so merging reverses this exactly.
std::map<TileIndex, std::vector<Detection>> slice_detections(const std::vector<Detection>& dets,
                                                             const TilePlan& plan);

/// Translate per-tile detections back to the image frame and remove
/// duplicates: detections of the same class with iou >= dup_iou form a
/// cluster (transitively) and only the highest-confidence member survives,
/// ties broken by earlier tile index then earlier list position. Output is
/// sorted by descending confidence. Unknown tile indices are an error.
std::vector<Detection> merge_tile_detections(
    const std::map<TileIndex, std::vector<Detection>>& per_tile, const TilePlan& plan,
    double dup_iou = 0.5);

ReportTable to_report_table(const TilePlan& plan);

}  // namespace blueberry
