#include "blueberry/bush_pipeline.hpp"

#include <cmath>

#include "blueberry/errors.hpp"

namespace blueberry {

BushSelection select_central_bush(const std::vector<Detection>& bush_boxes, int width, int height,
                                  std::string image_id) {
    if (bush_boxes.empty()) {
        throw Error("no bush boxes for image '" + image_id + "'");
    }
    const Point2D image_center{width / 2.0, height / 2.0};

    std::size_t best = 0;
    double best_d2 = squared_distance(bush_boxes[0].box.center(), image_center);
    for (std::size_t i = 1; i < bush_boxes.size(); ++i) {
        const double d2 = squared_distance(bush_boxes[i].box.center(), image_center);
        if (d2 < best_d2 ||
            (d2 == best_d2 && bush_boxes[i].box.area() > bush_boxes[best].box.area())) {
            best = i;
            best_d2 = d2;
        }
    }
    return BushSelection{std::move(image_id), bush_boxes[best].box, std::sqrt(best_d2),
                         bush_boxes.size()};
}

namespace {

template <typename Item>
std::vector<Item> crop_items(const BoundingBox& central, const std::vector<Item>& items) {
    std::vector<Item> out;
    for (const auto& item : items) {
        if (!central.contains(item.box.center())) continue;
        const auto clipped = intersect(item.box, central);
        Item moved = item;
        moved.box = clipped->translated(-central.x_min(), -central.y_min());
        out.push_back(moved);
    }
    return out;
}

}  // namespace

std::vector<GroundTruth> crop_frame_transform(const BoundingBox& central,
                                              const std::vector<GroundTruth>& items) {
    return crop_items(central, items);
}

std::vector<Detection> crop_frame_transform(const BoundingBox& central,
                                            const std::vector<Detection>& items) {
    return crop_items(central, items);
}

std::string_view counting_method_name(CountingMethod method) noexcept {
    return method == CountingMethod::Crop ? "crop" : "bbox_filter";
}

CountingMethod parse_counting_method(std::string_view name) {
    if (name == "crop") return CountingMethod::Crop;
    if (name == "bbox" || name == "bbox_filter") return CountingMethod::BboxFilter;
    throw SchemaError("unknown counting method '" + std::string(name) +
                      "' (expected crop or bbox)");
}

CropEvaluation count_berries_crop(const ImageRecord& record, const BushSelection& selection,
                                  const MatchConfig& cfg, bool detections_in_crop_frame) {
    const BoundingBox& central = selection.central_box;
    const BoundingBox crop_extent(0.0, 0.0, central.width(), central.height());

    const std::vector<GroundTruth> gts = crop_frame_transform(central, record.ground_truths);

    std::vector<Detection> dets;
    {
        const std::vector<Detection>& source =
            detections_in_crop_frame ? record.detections
                                     : crop_frame_transform(central, record.detections);
        for (const auto& det : source) {
            if (det.confidence < cfg.confidence_threshold) continue;
            if (detections_in_crop_frame && !crop_extent.contains(det.box.center())) continue;
            dets.push_back(det);
        }
    }

    CropEvaluation out;
    out.counts.image_id = record.image_id;
    out.counts.method = CountingMethod::Crop;
    out.counts.detections_in_bush = dets.size();
    out.counts.visual_gt_in_bush = gts.size();
    for (const auto& det : dets) ++out.counts.detections_per_class[static_cast<std::size_t>(det.cls)];
    for (const auto& gt : gts) ++out.counts.visual_per_class[static_cast<std::size_t>(gt.cls)];

    out.matches = match(gts, dets, cfg);
    out.metrics = precision_recall(out.matches);
    return out;
}

BushBerryCount count_berries_bbox_filter(const ImageRecord& record,
                                         const BushSelection& selection, const MatchConfig& cfg) {
    BushBerryCount out;
    out.image_id = record.image_id;
    out.method = CountingMethod::BboxFilter;
    for (const auto& det : record.detections) {
        if (det.confidence < cfg.confidence_threshold) continue;
        if (!selection.central_box.contains(det.box.center())) continue;
        ++out.detections_in_bush;
        ++out.detections_per_class[static_cast<std::size_t>(det.cls)];
    }
    for (const auto& gt : record.ground_truths) {
        if (!selection.central_box.contains(gt.box.center())) continue;
        ++out.visual_gt_in_bush;
        ++out.visual_per_class[static_cast<std::size_t>(gt.cls)];
    }
    return out;
}

}  // namespace blueberry
