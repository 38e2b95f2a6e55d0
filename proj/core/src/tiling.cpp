#include "blueberry/tiling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "blueberry/errors.hpp"

namespace blueberry {

namespace {

// Per-axis segment layout for inference tiles: start offsets plus sizes such
// that consecutive segments overlap by exactly `overlap` and the union spans
// [0, length).
struct AxisLayout {
    std::vector<int> starts;
    std::vector<int> sizes;
};

AxisLayout layout_axis(int length, int target, int overlap) {
    if (length <= overlap) {
        throw Error("image dimension " + std::to_string(length) +
                    " cannot satisfy a tile overlap of " + std::to_string(overlap));
    }
    const int stride = target - overlap;
    const long long span = length - overlap;
    int n = static_cast<int>(std::llround(static_cast<double>(span) / stride));
    n = std::max(1, n);

    AxisLayout layout;
    if (n == 1) {
        layout.starts = {0};
        layout.sizes = {length};
        return layout;
    }
    const int base = static_cast<int>(span / n) + overlap;
    const int wide = static_cast<int>(span % n);  // leading tiles one pixel larger
    int start = 0;
    for (int i = 0; i < n; ++i) {
        const int size = base + (i < wide ? 1 : 0);
        layout.starts.push_back(start);
        layout.sizes.push_back(size);
        start += size - overlap;
    }
    return layout;
}

}  // namespace

TilePlan plan_training_tiles(int width, int height, int tile_size) {
    if (width < 1 || height < 1) {
        throw Error("image dimensions must be positive");
    }
    if (tile_size < 1) {
        throw Error("tile size must be positive");
    }
    TilePlan plan;
    plan.width = width;
    plan.height = height;
    const int rows = height / tile_size;
    const int cols = width / tile_size;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const double x = static_cast<double>(c) * tile_size;
            const double y = static_cast<double>(r) * tile_size;
            plan.tiles.push_back(Tile{{r, c}, BoundingBox(x, y, x + tile_size, y + tile_size)});
        }
    }
    return plan;
}

TilePlan plan_inference_tiles(int width, int height, int target, int overlap) {
    if (width < 1 || height < 1) {
        throw Error("image dimensions must be positive");
    }
    if (overlap < 0 || target <= overlap) {
        throw Error("tile target must exceed the overlap");
    }
    const AxisLayout xs = layout_axis(width, target, overlap);
    const AxisLayout ys = layout_axis(height, target, overlap);

    TilePlan plan;
    plan.width = width;
    plan.height = height;
    for (std::size_t r = 0; r < ys.starts.size(); ++r) {
        for (std::size_t c = 0; c < xs.starts.size(); ++c) {
            const double x = xs.starts[c];
            const double y = ys.starts[r];
            plan.tiles.push_back(
                Tile{{static_cast<int>(r), static_cast<int>(c)},
                     BoundingBox(x, y, x + xs.sizes[c], y + ys.sizes[r])});
        }
    }
    return plan;
}

AssignedAnnotations assign_annotations(const TilePlan& plan, const std::vector<GroundTruth>& gts) {
    AssignedAnnotations out;
    for (const auto& gt : gts) {
        const Point2D c = gt.box.center();
        const Tile* home = nullptr;
        for (const auto& tile : plan.tiles) {
            if (tile.box.contains(c)) {
                home = &tile;
                break;
            }
        }
        if (home == nullptr) {
            ++out.dropped;
            continue;
        }
        const auto clipped = intersect(gt.box, home->box);
        // center inside the tile implies a nonempty overlap
        out.by_tile[home->index].push_back(GroundTruth{
            gt.cls, clipped->translated(-home->box.x_min(), -home->box.y_min())});
    }
    return out;
}

std::map<TileIndex, std::vector<Detection>> slice_detections(const std::vector<Detection>& dets,
                                                             const TilePlan& plan) {
    std::map<TileIndex, std::vector<Detection>> out;
    for (const auto& det : dets) {
        const Point2D c = det.box.center();
        for (const auto& tile : plan.tiles) {
            if (tile.box.contains(c)) {
                out[tile.index].push_back(Detection{
                    det.cls, det.box.translated(-tile.box.x_min(), -tile.box.y_min()),
                    det.confidence});
                break;
            }
        }
    }
    return out;
}

std::vector<Detection> merge_tile_detections(
    const std::map<TileIndex, std::vector<Detection>>& per_tile, const TilePlan& plan,
    double dup_iou) {
    std::map<TileIndex, const Tile*> tiles_by_index;
    for (const auto& tile : plan.tiles) {
        tiles_by_index[tile.index] = &tile;
    }

    struct Entry {
        Detection det;
        TileIndex tile;
        std::size_t pos;
    };
    std::vector<Entry> entries;
    for (const auto& [index, dets] : per_tile) {
        const auto it = tiles_by_index.find(index);
        if (it == tiles_by_index.end()) {
            throw Error("detections reference tile (" + std::to_string(index.row) + ", " +
                        std::to_string(index.col) + ") absent from the plan");
        }
        const BoundingBox& tile_box = it->second->box;
        for (std::size_t pos = 0; pos < dets.size(); ++pos) {
            entries.push_back(Entry{
                Detection{dets[pos].cls, dets[pos].box.translated(tile_box.x_min(), tile_box.y_min()),
                          dets[pos].confidence},
                index, pos});
        }
    }

    // Union duplicate pairs into clusters.
    std::vector<std::size_t> parent(entries.size());
    std::iota(parent.begin(), parent.end(), 0);
    const auto find = [&](std::size_t i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    };
    for (std::size_t i = 0; i < entries.size(); ++i) {
        for (std::size_t j = i + 1; j < entries.size(); ++j) {
            if (entries[i].det.cls != entries[j].det.cls) continue;
            if (iou(entries[i].det.box, entries[j].det.box) >= dup_iou) {
                parent[find(i)] = find(j);
            }
        }
    }

    const auto precedes = [](const Entry& a, const Entry& b) {
        if (a.det.confidence != b.det.confidence) return a.det.confidence > b.det.confidence;
        if (a.tile != b.tile) return a.tile < b.tile;
        return a.pos < b.pos;
    };

    std::map<std::size_t, std::size_t> winner;  // cluster root -> entry index
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const std::size_t root = find(i);
        const auto it = winner.find(root);
        if (it == winner.end() || precedes(entries[i], entries[it->second])) {
            winner[root] = i;
        }
    }

    std::vector<std::size_t> kept;
    for (const auto& [root, idx] : winner) kept.push_back(idx);
    std::sort(kept.begin(), kept.end(),
              [&](std::size_t a, std::size_t b) { return precedes(entries[a], entries[b]); });

    std::vector<Detection> out;
    out.reserve(kept.size());
    for (std::size_t idx : kept) out.push_back(entries[idx].det);
    return out;
}

ReportTable to_report_table(const TilePlan& plan) {
    ReportTable table;
    table.meta.emplace_back("image_id", ReportValue::text(plan.image_id));
    table.meta.emplace_back("image_width", ReportValue::integer(plan.width));
    table.meta.emplace_back("image_height", ReportValue::integer(plan.height));
    table.columns = {"row", "col", "x_min", "y_min", "x_max", "y_max"};
    for (const auto& tile : plan.tiles) {
        table.rows.push_back({ReportValue::integer(tile.index.row),
                              ReportValue::integer(tile.index.col),
                              ReportValue::number(tile.box.x_min()),
                              ReportValue::number(tile.box.y_min()),
                              ReportValue::number(tile.box.x_max()),
                              ReportValue::number(tile.box.y_max())});
    }
    return table;
}

}  // namespace blueberry
