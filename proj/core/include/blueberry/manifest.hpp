#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "blueberry/data_model.hpp"

namespace blueberry {

// Manifest files are JSON:
//
// {
//   "name": "validation-set-a",
//   "class_names": ["green", "blue"],
//   "images": [
//     {"id": "A1", "width": 4000, "height": 3000,
//      "annotations_path": "A1.txt",
//      "detections_path": "A1.det.txt",       // optional
//      "bush_boxes_path": "A1.bush.txt",      // optional
//      "picked_gt": 3312}                      // optional
//   ]
// }
//
// Relative paths resolve against the manifest's directory. Image ids must be
// unique. Annotation and detection files use the box-file format; bush files
// use the single-class bush label space.

/// Load and fully resolve a manifest; any missing file, schema violation, or
/// duplicate id aborts the load with a distinct error.
DatasetManifest load_manifest(const std::filesystem::path& path);

struct ImageLoadFailure {
    std::string image_id;
    std::string message;
};

struct ManifestLoadResult {
    DatasetManifest manifest;               // successfully loaded images only
    std::vector<ImageLoadFailure> failures; // skipped images, in manifest order
};

/// Like load_manifest, but per-image problems are collected instead of
/// aborting the run. Manifest-level problems (unreadable file, bad schema,
/// duplicate ids) still throw.
ManifestLoadResult load_manifest_collecting(const std::filesystem::path& path);

}  // namespace blueberry
