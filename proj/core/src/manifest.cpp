#include "blueberry/manifest.hpp"

#include <unordered_set>

#include <nlohmann/json.hpp>

#include "blueberry/box_file.hpp"
#include "blueberry/errors.hpp"
#include "blueberry/report.hpp"

namespace blueberry {

namespace {

struct ImageEntry {
    std::string id;
    int width = 0;
    int height = 0;
    std::filesystem::path annotations_path;
    std::filesystem::path detections_path;  // empty when absent
    std::filesystem::path bush_boxes_path;  // empty when absent
    std::optional<long long> picked_gt;
};

struct ParsedManifest {
    DatasetManifest header;  // name + class_names, images empty
    std::vector<ImageEntry> entries;
};

ParsedManifest parse_manifest_file(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError("manifest " + path.string() + ": " + e.what());
    }

    const auto base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    ParsedManifest out;
    try {
        out.header.name = doc.at("name").get<std::string>();
        out.header.class_names = doc.at("class_names").get<std::vector<std::string>>();
        std::unordered_set<std::string> seen;
        for (const auto& img : doc.at("images")) {
            ImageEntry entry;
            entry.id = img.at("id").get<std::string>();
            if (!seen.insert(entry.id).second) {
                throw SchemaError("manifest " + path.string() + ": duplicate image id '" +
                                  entry.id + "'");
            }
            entry.width = img.at("width").get<int>();
            entry.height = img.at("height").get<int>();
            if (entry.width <= 0 || entry.height <= 0) {
                throw SchemaError("manifest " + path.string() + ": image '" + entry.id +
                                  "' has non-positive dimensions");
            }
            entry.annotations_path = base / img.at("annotations_path").get<std::string>();
            if (img.contains("detections_path")) {
                entry.detections_path = base / img.at("detections_path").get<std::string>();
            }
            if (img.contains("bush_boxes_path")) {
                entry.bush_boxes_path = base / img.at("bush_boxes_path").get<std::string>();
            }
            if (img.contains("picked_gt")) {
                const long long picked = img.at("picked_gt").get<long long>();
                if (picked < 0) {
                    throw SchemaError("manifest " + path.string() + ": image '" + entry.id +
                                      "' has negative picked_gt");
                }
                entry.picked_gt = picked;
            }
            out.entries.push_back(std::move(entry));
        }
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError("manifest " + path.string() + ": " + e.what());
    }
    return out;
}

ImageRecord load_image(const ImageEntry& entry) {
    ImageRecord record;
    record.image_id = entry.id;
    record.width = entry.width;
    record.height = entry.height;
    record.picked_gt = entry.picked_gt;
    try {
        record.ground_truths = parse_ground_truths(read_text_file(entry.annotations_path),
                                                   entry.width, entry.height);
        if (!entry.detections_path.empty()) {
            record.detections =
                parse_detections(read_text_file(entry.detections_path), entry.width, entry.height);
        }
        if (!entry.bush_boxes_path.empty()) {
            record.bush_boxes = parse_detections(read_text_file(entry.bush_boxes_path),
                                                 entry.width, entry.height, kNumBushClasses);
        }
    } catch (const Error& e) {
        throw Error("image '" + entry.id + "': " + e.what());
    }
    return record;
}

}  // namespace

DatasetManifest load_manifest(const std::filesystem::path& path) {
    ParsedManifest parsed = parse_manifest_file(path);
    DatasetManifest manifest = std::move(parsed.header);
    for (const auto& entry : parsed.entries) {
        manifest.images.push_back(load_image(entry));
    }
    return manifest;
}

ManifestLoadResult load_manifest_collecting(const std::filesystem::path& path) {
    ParsedManifest parsed = parse_manifest_file(path);
    ManifestLoadResult result;
    result.manifest = std::move(parsed.header);
    for (const auto& entry : parsed.entries) {
        try {
            result.manifest.images.push_back(load_image(entry));
        } catch (const Error& e) {
            result.failures.push_back(ImageLoadFailure{entry.id, e.what()});
        }
    }
    return result;
}

}  // namespace blueberry
