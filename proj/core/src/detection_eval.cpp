#include "blueberry/detection_eval.hpp"

#include <algorithm>

#include "blueberry/tiling.hpp"

namespace blueberry {

MatchResult match(const std::vector<GroundTruth>& gts, const std::vector<Detection>& dets,
                  const MatchConfig& cfg) {
    MatchResult result;

    std::vector<std::size_t> kept;
    for (std::size_t j = 0; j < dets.size(); ++j) {
        if (dets[j].confidence >= cfg.confidence_threshold) kept.push_back(j);
    }

    std::vector<bool> det_matched(dets.size(), false);
    for (std::size_t i = 0; i < gts.size(); ++i) {
        const auto& gt = gts[i];
        bool found = false;
        std::size_t best = 0;
        double best_iou = 0.0;
        for (std::size_t j : kept) {
            if (det_matched[j] || dets[j].cls != gt.cls) continue;
            const double overlap = iou(gt.box, dets[j].box);
            if (overlap < cfg.iou_threshold) continue;
            if (!found || dets[j].confidence > dets[best].confidence ||
                (dets[j].confidence == dets[best].confidence && overlap > best_iou)) {
                found = true;
                best = j;
                best_iou = overlap;
            }
        }
        const auto cls = static_cast<std::size_t>(gt.cls);
        if (found) {
            det_matched[best] = true;
            result.true_positives.push_back({i, best, best_iou});
            ++result.per_class[cls].tp;
        } else {
            result.false_negative_gts.push_back(i);
            ++result.per_class[cls].fn;
        }
    }

    for (std::size_t j : kept) {
        if (!det_matched[j]) {
            result.false_positive_dets.push_back(j);
            ++result.per_class[static_cast<std::size_t>(dets[j].cls)].fp;
        }
    }
    return result;
}

namespace {

PrecisionRecall::Pair pair_from_counts(const ClassCounts& c) {
    PrecisionRecall::Pair out;
    const std::size_t det = c.tp + c.fp;
    const std::size_t gt = c.tp + c.fn;
    out.precision = det == 0 ? 1.0 : static_cast<double>(c.tp) / static_cast<double>(det);
    out.recall = gt == 0 ? 1.0 : static_cast<double>(c.tp) / static_cast<double>(gt);
    return out;
}

}  // namespace

PrecisionRecall precision_recall_from_counts(
    const std::array<ClassCounts, kNumBerryClasses>& counts) {
    PrecisionRecall out;
    ClassCounts pooled;
    for (std::size_t c = 0; c < counts.size(); ++c) {
        out.per_class[c] = pair_from_counts(counts[c]);
        pooled.tp += counts[c].tp;
        pooled.fp += counts[c].fp;
        pooled.fn += counts[c].fn;
    }
    out.overall = pair_from_counts(pooled);
    return out;
}

PrecisionRecall precision_recall(const MatchResult& m) {
    return precision_recall_from_counts(m.per_class);
}

ImageEvaluation evaluate_image(const ImageRecord& record, const MatchConfig& cfg, bool tiled,
                               const TileMergeParams& tiles) {
    ImageEvaluation out;
    if (tiled) {
        const TilePlan plan =
            plan_inference_tiles(record.width, record.height, tiles.target, tiles.overlap);
        const auto per_tile = slice_detections(record.detections, plan);
        const auto merged = merge_tile_detections(per_tile, plan, tiles.dup_iou);
        out.matches = match(record.ground_truths, merged, cfg);
        out.detections_used = merged.size();
    } else {
        out.matches = match(record.ground_truths, record.detections, cfg);
        out.detections_used = record.detections.size();
    }
    out.metrics = precision_recall(out.matches);
    return out;
}

}  // namespace blueberry
