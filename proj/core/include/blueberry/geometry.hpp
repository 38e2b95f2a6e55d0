#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

#include "blueberry/errors.hpp"

namespace blueberry {

/// A point in a planar frame. The unit depends on context: image pixels
/// (origin top-left, y down) or local field meters.
struct Point2D {
    double x = 0.0;
    double y = 0.0;
};

/// Axis-aligned rectangle stored as real-valued corner pairs.
///
/// Containment uses the half-open convention [min, max) so that a point on a
/// shared edge of two abutting boxes belongs to exactly one of them.
/// Zero-area and non-finite boxes are rejected at construction.
class BoundingBox {
public:
    BoundingBox(double x_min, double y_min, double x_max, double y_max)
        : x_min_(x_min), y_min_(y_min), x_max_(x_max), y_max_(y_max) {
        if (!(std::isfinite(x_min) && std::isfinite(y_min) && std::isfinite(x_max) &&
              std::isfinite(y_max))) {
            throw Error("bounding box coordinates must be finite");
        }
        if (!(x_min < x_max && y_min < y_max)) {
            throw Error("bounding box must have positive extent: (" + std::to_string(x_min) +
                        ", " + std::to_string(y_min) + ", " + std::to_string(x_max) + ", " +
                        std::to_string(y_max) + ")");
        }
    }

    double x_min() const noexcept { return x_min_; }
    double y_min() const noexcept { return y_min_; }
    double x_max() const noexcept { return x_max_; }
    double y_max() const noexcept { return y_max_; }

    double width() const noexcept { return x_max_ - x_min_; }
    double height() const noexcept { return y_max_ - y_min_; }
    double area() const noexcept { return width() * height(); }

    Point2D center() const noexcept { return {(x_min_ + x_max_) / 2.0, (y_min_ + y_max_) / 2.0}; }

    /// Half-open containment: x_min <= p.x < x_max and y_min <= p.y < y_max.
    bool contains(Point2D p) const noexcept {
        return p.x >= x_min_ && p.x < x_max_ && p.y >= y_min_ && p.y < y_max_;
    }

    BoundingBox translated(double dx, double dy) const {
        return BoundingBox(x_min_ + dx, y_min_ + dy, x_max_ + dx, y_max_ + dy);
    }

    bool operator==(const BoundingBox& other) const noexcept = default;

private:
    double x_min_, y_min_, x_max_, y_max_;
};

/// Overlap rectangle of two boxes, or nullopt when they are disjoint or touch
/// only along an edge.
inline std::optional<BoundingBox> intersect(const BoundingBox& a, const BoundingBox& b) {
    const double x0 = std::max(a.x_min(), b.x_min());
    const double y0 = std::max(a.y_min(), b.y_min());
    const double x1 = std::min(a.x_max(), b.x_max());
    const double y1 = std::min(a.y_max(), b.y_max());
    if (x0 < x1 && y0 < y1) {
        return BoundingBox(x0, y0, x1, y1);
    }
    return std::nullopt;
}

/// Intersection-over-union of two boxes in the same frame. 0 when disjoint,
/// 1 for identical boxes, symmetric in its arguments.
inline double iou(const BoundingBox& a, const BoundingBox& b) noexcept {
    const double x0 = std::max(a.x_min(), b.x_min());
    const double y0 = std::max(a.y_min(), b.y_min());
    const double x1 = std::min(a.x_max(), b.x_max());
    const double y1 = std::min(a.y_max(), b.y_max());
    if (x0 >= x1 || y0 >= y1) {
        return 0.0;
    }
    const double inter = (x1 - x0) * (y1 - y0);
    return inter / (a.area() + b.area() - inter);
}

inline double distance(Point2D a, Point2D b) noexcept {
    return std::hypot(a.x - b.x, a.y - b.y);
}

inline double squared_distance(Point2D a, Point2D b) noexcept {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

}  // namespace blueberry
