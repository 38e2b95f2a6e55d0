#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "blueberry/geometry.hpp"
#include "blueberry/report.hpp"

namespace blueberry {

struct TrackedBox {
    long long track_id = 0;
    BoundingBox box;
};

/// One video frame: annotated objects and tracker output, each with track
/// ids unique within their own list. Ground-truth and prediction id spaces
/// are independent.
struct TrackFrame {
    long long frame_index = 0;
    std::vector<TrackedBox> ground_truths;
    std::vector<TrackedBox> predictions;
};

struct MotaReport {
    std::size_t frames = 0;
    std::size_t gt_count = 0;
    std::size_t predictions = 0;
    std::size_t mismatches = 0;
    std::size_t false_positives = 0;
    std::size_t false_negatives = 0;
    double iou_threshold = 0.5;
    double mota = 0.0;
};

/// MOTA = 1 - (FN + FP + mismatches) / GT. Errors when gt is zero.
double mota_from_counts(std::size_t gt, std::size_t fp, std::size_t fn, std::size_t idsw);

/// Frame-by-frame CLEAR-MOT accounting. Pairings from the previous frame are
/// kept when they still clear the iou threshold; remaining boxes are matched
/// greedily by descending iou. A matched ground truth whose prediction id
/// differs from its previously paired id counts one mismatch. Frames must be
/// sorted by frame_index and contain at least one ground truth overall.
MotaReport evaluate_tracking(const std::vector<TrackFrame>& frames, double iou_threshold = 0.5);

// Frame files are plain text:
//
//   frame <frame_index>
//   gt   <track_id> <x_min> <y_min> <x_max> <y_max>
//   pred <track_id> <x_min> <y_min> <x_max> <y_max>
//
// with boxes in absolute pixels, '#' comment lines ignored, and gt/pred
// records belonging to the most recent frame header.
std::vector<TrackFrame> parse_track_frames(std::string_view text);
std::string emit_track_frames(const std::vector<TrackFrame>& frames);

ReportTable to_report_table(const MotaReport& report);

}  // namespace blueberry
