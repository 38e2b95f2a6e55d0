#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "blueberry/bush_pipeline.hpp"
#include "blueberry/detection_eval.hpp"
#include "blueberry/field_sampling.hpp"
#include "blueberry/manifest.hpp"
#include "blueberry/yield.hpp"

namespace blueberry {

/// Everything a run needs, with defaults that reproduce the validation
/// protocol. The whole block is echoed into every emitted report.
struct RunConfig {
    MatchConfig match;
    double dup_iou = 0.5;
    int tile_target = 700;
    int tile_overlap = 60;
    bool tiled = false;  // detection files hold unmerged per-tile output
    CountingMethod counting_method = CountingMethod::Crop;
    std::uint64_t seed = 0;
    int jobs = 1;
    ReportFormat format = ReportFormat::Csv;
};

struct ImageMetrics {
    std::string image_id;
    MatchResult matches;
    PrecisionRecall metrics;
};

struct BushImageResult {
    BushSelection selection;
    BushBerryCount counts;
    PrecisionRecall metrics;  // matched within the crop
    std::optional<long long> picked_gt;
};

struct DatasetSummary {
    std::string dataset_name;
    std::vector<ImageMetrics> per_image;
    std::array<ClassCounts, kNumBerryClasses> pooled_counts{};
    PrecisionRecall pooled;  // recomputed from summed counts, never averaged
    std::vector<BushImageResult> bush_results;
    std::optional<PvrReport> pvr;  // when at least one image carries picked_gt
    std::vector<ImageLoadFailure> failures;
};

/// Full-frame evaluation over a loaded manifest. Per-image processing errors
/// are recorded in `failures` and the run continues.
DatasetSummary run_fullframe_eval(const DatasetManifest& manifest, const RunConfig& config);
DatasetSummary run_fullframe_eval(const std::filesystem::path& manifest_path,
                                  const RunConfig& config);

/// Bush-cropped evaluation: central bush selection, berry counting per the
/// configured method, matching within the crop, and the ratio report when
/// picked counts exist. Images without bush boxes are recorded as failures.
DatasetSummary run_bushcropped_eval(const DatasetManifest& manifest, const RunConfig& config);
DatasetSummary run_bushcropped_eval(const std::filesystem::path& manifest_path,
                                    const RunConfig& config);

SamplePlan run_mission_plan(const std::filesystem::path& field_spec_path, const GridSpec& grid,
                            SamplingStrategy strategy, std::uint64_t seed, double altitude_m,
                            double standoff_m);

/// Config block shared by every report emitted from a run.
std::vector<std::pair<std::string, ReportValue>> config_meta(const RunConfig& config);

/// Write the report bundle for a full-frame run: evaluation table plus the
/// run-metadata file. Returns the paths written.
std::vector<std::filesystem::path> write_fullframe_reports(const DatasetSummary& summary,
                                                           const RunConfig& config,
                                                           const std::filesystem::path& out_dir);

/// Write the report bundle for a bush-cropped run: bush counts, crop metrics,
/// crop rectangles for external detector runners, the ratio report when
/// present, and the run-metadata file.
std::vector<std::filesystem::path> write_cropeval_reports(const DatasetSummary& summary,
                                                          const RunConfig& config,
                                                          const std::filesystem::path& out_dir);

}  // namespace blueberry
