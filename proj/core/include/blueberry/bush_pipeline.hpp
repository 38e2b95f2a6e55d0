#pragma once

#include <array>
#include <string>
#include <vector>

#include "blueberry/data_model.hpp"
#include "blueberry/detection_eval.hpp"

namespace blueberry {

/// The foreground center bush: the bush box whose center is radially closest
/// to the image center.
struct BushSelection {
    std::string image_id;
    BoundingBox central_box;
    double radial_distance = 0.0;  // pixels from box center to image center
    std::size_t candidates_considered = 0;
};

/// Pick the bush box minimizing the Euclidean distance from its center to
/// (width/2, height/2); ties go to the larger area, then the earlier index.
/// An empty candidate list is an error (the bush detector found nothing).
BushSelection select_central_bush(const std::vector<Detection>& bush_boxes, int width, int height,
                                  std::string image_id = {});

/// Keep items whose center lies inside the central box (half-open), translate
/// them into the crop frame anchored at the box's top-left corner, and clip
/// boxes overhanging the crop edge to their visible part.
std::vector<GroundTruth> crop_frame_transform(const BoundingBox& central,
                                              const std::vector<GroundTruth>& items);
std::vector<Detection> crop_frame_transform(const BoundingBox& central,
                                            const std::vector<Detection>& items);

enum class CountingMethod { Crop, BboxFilter };

std::string_view counting_method_name(CountingMethod method) noexcept;
CountingMethod parse_counting_method(std::string_view name);

struct BushBerryCount {
    std::string image_id;
    CountingMethod method = CountingMethod::Crop;
    std::size_t detections_in_bush = 0;  // above the confidence threshold
    std::size_t visual_gt_in_bush = 0;
    std::array<std::size_t, kNumBerryClasses> detections_per_class{};
    std::array<std::size_t, kNumBerryClasses> visual_per_class{};
};

struct CropEvaluation {
    BushBerryCount counts;
    MatchResult matches;
    PrecisionRecall metrics;
};

/// Crop-variant counting: ground truths and detections are restricted to the
/// central box via crop_frame_transform and matched within the crop. Pass
/// detections_in_crop_frame=true when the record's detections were produced
/// by running the detector on the cropped image itself (already crop-local);
/// otherwise full-frame detections are transformed here.
CropEvaluation count_berries_crop(const ImageRecord& record, const BushSelection& selection,
                                  const MatchConfig& cfg = {},
                                  bool detections_in_crop_frame = false);

/// Filter-variant counting: full-frame detections whose center lies inside
/// the central box, counted without any re-matching. The same confidence
/// threshold applies as in the crop variant so both methods agree on
/// frame-identical detections.
BushBerryCount count_berries_bbox_filter(const ImageRecord& record, const BushSelection& selection,
                                         const MatchConfig& cfg = {});

}  // namespace blueberry
