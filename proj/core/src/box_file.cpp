#include "blueberry/box_file.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>

#include "blueberry/errors.hpp"

namespace blueberry {

namespace {

constexpr double kNormalizedSlack = 1.0001;

struct LineFields {
    int class_id = 0;
    double cx = 0, cy = 0, w = 0, h = 0;
    double confidence = 1.0;
};

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

double parse_double(std::string_view tok, std::size_t line_no, const char* what) {
    double value = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw ParseError(std::string("malformed ") + what + " '" + std::string(tok) + "'", line_no);
    }
    return value;
}

int parse_class(std::string_view tok, int num_classes, std::size_t line_no) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw ParseError("malformed class id '" + std::string(tok) + "'", line_no);
    }
    if (value < 0 || value >= num_classes) {
        throw ParseError("class id " + std::to_string(value) + " outside label space [0, " +
                             std::to_string(num_classes) + ")",
                         line_no);
    }
    return value;
}

double checked_normalized(double v, std::size_t line_no, const char* what) {
    if (!(v >= 0.0 && v <= kNormalizedSlack)) {  // rejects NaN as well
        throw ParseError(std::string(what) + " value " + std::to_string(v) +
                             " outside normalized range [0, 1.0001]",
                         line_no);
    }
    return std::min(v, 1.0);
}

BoundingBox to_pixel_box(const LineFields& f, int width, int height, std::size_t line_no) {
    double x_min = (f.cx - f.w / 2.0) * width;
    double x_max = (f.cx + f.w / 2.0) * width;
    double y_min = (f.cy - f.h / 2.0) * height;
    double y_max = (f.cy + f.h / 2.0) * height;
    x_min = std::clamp(x_min, 0.0, static_cast<double>(width));
    x_max = std::clamp(x_max, 0.0, static_cast<double>(width));
    y_min = std::clamp(y_min, 0.0, static_cast<double>(height));
    y_max = std::clamp(y_max, 0.0, static_cast<double>(height));
    if (!(x_min < x_max && y_min < y_max)) {
        throw ParseError("box degenerates to zero area after clamping to image bounds", line_no);
    }
    return BoundingBox(x_min, y_min, x_max, y_max);
}

// Shared line loop. `field_count` is 5 for ground truths, 6 for detections.
template <typename Fn>
void for_each_record(std::string_view text, int width, int height, int num_classes,
                     std::size_t field_count, Fn&& fn) {
    if (width <= 0 || height <= 0) {
        throw Error("image dimensions must be positive");
    }
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        const std::string_view line =
            text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        const auto fields = split_ws(line);
        if (fields.empty() || fields.front().front() == '#') continue;
        if (fields.size() != field_count) {
            throw ParseError("expected " + std::to_string(field_count) + " fields, got " +
                                 std::to_string(fields.size()),
                             line_no);
        }

        LineFields f;
        f.class_id = parse_class(fields[0], num_classes, line_no);
        f.cx = checked_normalized(parse_double(fields[1], line_no, "center-x"), line_no, "center-x");
        f.cy = checked_normalized(parse_double(fields[2], line_no, "center-y"), line_no, "center-y");
        f.w = checked_normalized(parse_double(fields[3], line_no, "width"), line_no, "width");
        f.h = checked_normalized(parse_double(fields[4], line_no, "height"), line_no, "height");
        if (field_count == 6) {
            f.confidence = checked_normalized(parse_double(fields[5], line_no, "confidence"),
                                              line_no, "confidence");
        }
        fn(f, to_pixel_box(f, width, height, line_no));
    }
}

void append_normalized(std::string& out, const BoundingBox& box, int width, int height) {
    const double cx = (box.x_min() + box.x_max()) / 2.0 / width;
    const double cy = (box.y_min() + box.y_max()) / 2.0 / height;
    const double w = box.width() / width;
    const double h = box.height() / height;
    char buf[96];
    std::snprintf(buf, sizeof buf, " %.6f %.6f %.6f %.6f", cx, cy, w, h);
    out += buf;
}

}  // namespace

std::vector<GroundTruth> parse_ground_truths(std::string_view text, int width, int height,
                                             int num_classes) {
    std::vector<GroundTruth> out;
    for_each_record(text, width, height, num_classes, 5,
                    [&](const LineFields& f, const BoundingBox& box) {
                        out.push_back(GroundTruth{static_cast<ClassId>(f.class_id), box});
                    });
    return out;
}

std::vector<Detection> parse_detections(std::string_view text, int width, int height,
                                        int num_classes) {
    std::vector<Detection> out;
    for_each_record(text, width, height, num_classes, 6,
                    [&](const LineFields& f, const BoundingBox& box) {
                        out.push_back(
                            Detection{static_cast<ClassId>(f.class_id), box, f.confidence});
                    });
    return out;
}

std::string emit_ground_truths(const std::vector<GroundTruth>& items, int width, int height) {
    std::string out;
    for (const auto& gt : items) {
        out += std::to_string(static_cast<int>(gt.cls));
        append_normalized(out, gt.box, width, height);
        out += '\n';
    }
    return out;
}

std::string emit_detections(const std::vector<Detection>& items, int width, int height) {
    std::string out;
    for (const auto& det : items) {
        out += std::to_string(static_cast<int>(det.cls));
        append_normalized(out, det.box, width, height);
        char buf[32];
        std::snprintf(buf, sizeof buf, " %.6f", det.confidence);
        out += buf;
        out += '\n';
    }
    return out;
}

}  // namespace blueberry
