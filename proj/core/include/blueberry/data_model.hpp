#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "blueberry/geometry.hpp"

namespace blueberry {

/// Berry color classes. Bush-box files use their own single-class label space
/// in which index 0 means "bush"; those boxes are carried in the same
/// Detection type but never mix with berry classes in one file.
enum class ClassId : int {
    Green = 0,
    Blue = 1,
};

inline constexpr int kNumBerryClasses = 2;
inline constexpr int kNumBushClasses = 1;

inline std::string_view class_name(ClassId cls) noexcept {
    return cls == ClassId::Green ? "green" : "blue";
}

/// An annotated object: class label plus pixel-space box.
struct GroundTruth {
    ClassId cls;
    BoundingBox box;
};

/// A detector output: class label, pixel-space box, confidence in [0,1].
struct Detection {
    ClassId cls;
    BoundingBox box;
    double confidence;
};

/// One image of a dataset with everything the pipeline knows about it.
/// Boxes are clamped to [0,width]x[0,height] at load time. picked_gt is the
/// hand-picked berry count of the foreground center bush, present only for
/// validation images that were picked.
struct ImageRecord {
    std::string image_id;
    int width = 0;
    int height = 0;
    std::vector<GroundTruth> ground_truths;
    std::vector<Detection> detections;
    std::vector<Detection> bush_boxes;
    std::optional<long long> picked_gt;
};

struct DatasetManifest {
    std::string name;
    std::vector<std::string> class_names;
    std::vector<ImageRecord> images;
};

}  // namespace blueberry
