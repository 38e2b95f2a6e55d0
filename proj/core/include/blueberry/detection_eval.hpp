#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "blueberry/data_model.hpp"

namespace blueberry {

/// Validation protocol thresholds. Detections below the confidence threshold
/// are discarded before matching; a detection matches a ground truth only at
/// iou >= iou_threshold and equal class.
struct MatchConfig {
    double confidence_threshold = 0.1;
    double iou_threshold = 0.3;
};

struct ClassCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
};

struct MatchResult {
    struct TruePositive {
        std::size_t gt_index;
        std::size_t det_index;
        double iou;
    };
    std::vector<TruePositive> true_positives;     // in ground-truth processing order
    std::vector<std::size_t> false_positive_dets; // above-threshold, unmatched
    std::vector<std::size_t> false_negative_gts;
    std::array<ClassCounts, kNumBerryClasses> per_class{};

    ClassCounts pooled() const noexcept {
        ClassCounts out;
        for (const auto& c : per_class) {
            out.tp += c.tp;
            out.fp += c.fp;
            out.fn += c.fn;
        }
        return out;
    }
};

/// Greedy matching in ground-truth order: each ground truth takes the
/// unmatched same-class detection with iou >= threshold and the highest
/// confidence (ties: larger iou, then earlier detection index). Detections
/// below the confidence threshold are neither true nor false positives.
MatchResult match(const std::vector<GroundTruth>& gts, const std::vector<Detection>& dets,
                  const MatchConfig& cfg = {});

/// Precision/recall per class and pooled across classes. The empty-set
/// convention is 1.0: no detections means no false alarms, no ground truths
/// means nothing was missed.
struct PrecisionRecall {
    struct Pair {
        double precision = 1.0;
        double recall = 1.0;
    };
    std::array<Pair, kNumBerryClasses> per_class{};
    Pair overall;  // from pooled counts, not averaged
};

PrecisionRecall precision_recall(const MatchResult& m);

PrecisionRecall precision_recall_from_counts(const std::array<ClassCounts, kNumBerryClasses>& counts);

/// Tile regeneration parameters for evaluating images whose detection files
/// hold unmerged per-tile output.
struct TileMergeParams {
    int target = 700;
    int overlap = 60;
    double dup_iou = 0.5;
};

struct ImageEvaluation {
    MatchResult matches;
    PrecisionRecall metrics;
    std::size_t detections_used = 0;  // after optional tile merge
};

/// Evaluate one image. With tiled=true the inference tile plan is regenerated
/// from the image dimensions, detections are distributed onto tiles by the
/// center rule, and duplicates from overlapping tiles are merged before
/// matching.
ImageEvaluation evaluate_image(const ImageRecord& record, const MatchConfig& cfg,
                               bool tiled = false, const TileMergeParams& tiles = {});

}  // namespace blueberry
