#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "blueberry/data_model.hpp"

namespace blueberry {

// Box files are plain text, one object per line:
//
//   class cx cy w h        (ground truth)
//   class cx cy w h conf   (detection)
//
// cx, cy, w, h are box center and size normalized to [0,1] relative to the
// image dimensions. Blank lines and lines starting with '#' are ignored.
// Normalized values up to 1.0001 are clamped to 1 (annotation tools emit
// float dust like 1.0000001); anything further out of range is an error.
// Parsed boxes are converted to pixel corners and clamped to the image.

std::vector<GroundTruth> parse_ground_truths(std::string_view text, int width, int height,
                                             int num_classes = kNumBerryClasses);

std::vector<Detection> parse_detections(std::string_view text, int width, int height,
                                        int num_classes = kNumBerryClasses);

std::string emit_ground_truths(const std::vector<GroundTruth>& items, int width, int height);

std::string emit_detections(const std::vector<Detection>& items, int width, int height);

}  // namespace blueberry
