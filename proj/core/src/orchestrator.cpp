#include "blueberry/orchestrator.hpp"

#include <atomic>
#include <thread>

#include <nlohmann/json.hpp>

#include "blueberry/errors.hpp"

namespace blueberry {

namespace {

// Run fn(i) for i in [0, count) on up to `jobs` threads. Results land in
// index order, so aggregation stays deterministic regardless of scheduling.
template <typename Fn>
void parallel_for(std::size_t count, int jobs, Fn&& fn) {
    const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(count)));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

void accumulate(std::array<ClassCounts, kNumBerryClasses>& pooled, const MatchResult& m) {
    for (std::size_t c = 0; c < pooled.size(); ++c) {
        pooled[c].tp += m.per_class[c].tp;
        pooled[c].fp += m.per_class[c].fp;
        pooled[c].fn += m.per_class[c].fn;
    }
}

ReportTable metrics_table(const RunConfig& config, const DatasetSummary& summary,
                          const std::vector<ImageMetrics>& rows) {
    ReportTable table;
    table.meta = config_meta(config);
    table.meta.emplace_back("dataset", ReportValue::text(summary.dataset_name));
    table.columns = {"image_id",       "prec_green",   "rec_green", "prec_blue",
                     "rec_blue",       "prec_overall", "rec_overall",
                     "tp",             "fp",           "fn"};
    const auto add_row = [&](const std::string& id, const PrecisionRecall& pr,
                             const ClassCounts& pooled) {
        table.rows.push_back(
            {ReportValue::text(id),
             ReportValue::number(pr.per_class[0].precision), ReportValue::number(pr.per_class[0].recall),
             ReportValue::number(pr.per_class[1].precision), ReportValue::number(pr.per_class[1].recall),
             ReportValue::number(pr.overall.precision), ReportValue::number(pr.overall.recall),
             ReportValue::integer(static_cast<long long>(pooled.tp)),
             ReportValue::integer(static_cast<long long>(pooled.fp)),
             ReportValue::integer(static_cast<long long>(pooled.fn))});
    };
    for (const auto& im : rows) {
        add_row(im.image_id, im.metrics, im.matches.pooled());
    }
    ClassCounts pooled_all;
    for (const auto& c : summary.pooled_counts) {
        pooled_all.tp += c.tp;
        pooled_all.fp += c.fp;
        pooled_all.fn += c.fn;
    }
    add_row("dataset", summary.pooled, pooled_all);
    return table;
}

void write_run_metadata(const DatasetSummary& summary, const RunConfig& config,
                        const std::filesystem::path& out_dir, const std::string& mode,
                        std::vector<std::filesystem::path>& written) {
    nlohmann::ordered_json doc;
    doc["mode"] = mode;
    doc["dataset"] = summary.dataset_name;
    nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
    for (const auto& [key, value] : config_meta(config)) {
        if (const auto* i = std::get_if<long long>(&value.value)) {
            cfg[key] = *i;
        } else if (const auto* d = std::get_if<double>(&value.value)) {
            cfg[key] = *d;
        } else {
            const auto& s = std::get<std::string>(value.value);
            cfg[key] = s == "true" ? nlohmann::ordered_json(true)
                                   : s == "false" ? nlohmann::ordered_json(false)
                                                  : nlohmann::ordered_json(s);
        }
    }
    doc["config"] = cfg;
    doc["images_evaluated"] =
        mode == "crop-eval" ? summary.bush_results.size() : summary.per_image.size();
    nlohmann::ordered_json failures = nlohmann::ordered_json::array();
    for (const auto& f : summary.failures) {
        failures.push_back({{"image_id", f.image_id}, {"message", f.message}});
    }
    doc["failures"] = failures;
    const auto path = out_dir / "run.json";
    write_text_file(path, doc.dump(2) + "\n");
    written.push_back(path);
}

}  // namespace

std::vector<std::pair<std::string, ReportValue>> config_meta(const RunConfig& config) {
    std::vector<std::pair<std::string, ReportValue>> meta;
    meta.emplace_back("confidence_threshold", ReportValue::number(config.match.confidence_threshold));
    meta.emplace_back("iou_threshold", ReportValue::number(config.match.iou_threshold));
    meta.emplace_back("dup_iou", ReportValue::number(config.dup_iou));
    meta.emplace_back("tile_target", ReportValue::integer(config.tile_target));
    meta.emplace_back("tile_overlap", ReportValue::integer(config.tile_overlap));
    meta.emplace_back("tiled", ReportValue::boolean(config.tiled));
    meta.emplace_back("counting_method",
                      ReportValue::text(std::string(counting_method_name(config.counting_method))));
    meta.emplace_back("seed", ReportValue::integer(static_cast<long long>(config.seed)));
    meta.emplace_back("jobs", ReportValue::integer(config.jobs));
    return meta;
}

DatasetSummary run_fullframe_eval(const DatasetManifest& manifest, const RunConfig& config) {
    DatasetSummary summary;
    summary.dataset_name = manifest.name;

    struct Slot {
        bool ok = false;
        ImageMetrics metrics;
        std::string error;
    };
    std::vector<Slot> slots(manifest.images.size());
    const TileMergeParams tiles{config.tile_target, config.tile_overlap, config.dup_iou};
    parallel_for(manifest.images.size(), config.jobs, [&](std::size_t i) {
        const auto& record = manifest.images[i];
        try {
            ImageEvaluation eval = evaluate_image(record, config.match, config.tiled, tiles);
            slots[i].metrics =
                ImageMetrics{record.image_id, std::move(eval.matches), eval.metrics};
            slots[i].ok = true;
        } catch (const std::exception& e) {
            slots[i].error = e.what();
        }
    });

    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (!slots[i].ok) {
            summary.failures.push_back(
                ImageLoadFailure{manifest.images[i].image_id, slots[i].error});
            continue;
        }
        accumulate(summary.pooled_counts, slots[i].metrics.matches);
        summary.per_image.push_back(std::move(slots[i].metrics));
    }
    summary.pooled = precision_recall_from_counts(summary.pooled_counts);
    return summary;
}

DatasetSummary run_fullframe_eval(const std::filesystem::path& manifest_path,
                                  const RunConfig& config) {
    ManifestLoadResult loaded = load_manifest_collecting(manifest_path);
    DatasetSummary summary = run_fullframe_eval(loaded.manifest, config);
    summary.failures.insert(summary.failures.begin(), loaded.failures.begin(),
                            loaded.failures.end());
    return summary;
}

DatasetSummary run_bushcropped_eval(const DatasetManifest& manifest, const RunConfig& config) {
    DatasetSummary summary;
    summary.dataset_name = manifest.name;

    struct Slot {
        std::optional<BushImageResult> result;
        MatchResult matches;
        std::string error;
    };
    std::vector<Slot> slots(manifest.images.size());
    parallel_for(manifest.images.size(), config.jobs, [&](std::size_t i) {
        const auto& record = manifest.images[i];
        try {
            BushSelection selection =
                select_central_bush(record.bush_boxes, record.width, record.height,
                                    record.image_id);
            CropEvaluation crop = count_berries_crop(record, selection, config.match);
            BushBerryCount counts = config.counting_method == CountingMethod::Crop
                                        ? crop.counts
                                        : count_berries_bbox_filter(record, selection,
                                                                    config.match);
            slots[i].matches = std::move(crop.matches);
            slots[i].result = BushImageResult{std::move(selection), std::move(counts),
                                              crop.metrics, record.picked_gt};
        } catch (const std::exception& e) {
            slots[i].error = e.what();
        }
    });

    std::vector<BushCountRecord> pvr_records;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (!slots[i].result.has_value()) {
            summary.failures.push_back(
                ImageLoadFailure{manifest.images[i].image_id, slots[i].error});
            continue;
        }
        auto& result = *slots[i].result;
        accumulate(summary.pooled_counts, slots[i].matches);
        summary.per_image.push_back(ImageMetrics{result.selection.image_id,
                                                 std::move(slots[i].matches), result.metrics});
        if (result.picked_gt.has_value()) {
            pvr_records.push_back(BushCountRecord{
                result.selection.image_id, static_cast<long long>(result.counts.detections_in_bush),
                static_cast<long long>(result.counts.visual_gt_in_bush), result.picked_gt});
        }
        summary.bush_results.push_back(std::move(result));
    }
    summary.pooled = precision_recall_from_counts(summary.pooled_counts);
    if (!pvr_records.empty()) {
        summary.pvr = pvr_report(pvr_records);
    }
    return summary;
}

DatasetSummary run_bushcropped_eval(const std::filesystem::path& manifest_path,
                                    const RunConfig& config) {
    ManifestLoadResult loaded = load_manifest_collecting(manifest_path);
    DatasetSummary summary = run_bushcropped_eval(loaded.manifest, config);
    summary.failures.insert(summary.failures.begin(), loaded.failures.begin(),
                            loaded.failures.end());
    return summary;
}

SamplePlan run_mission_plan(const std::filesystem::path& field_spec_path, const GridSpec& grid,
                            SamplingStrategy strategy, std::uint64_t seed, double altitude_m,
                            double standoff_m) {
    const FieldSpec field = load_field_spec(field_spec_path);
    return make_sample_plan(field, grid, strategy, seed, altitude_m, standoff_m);
}

std::vector<std::filesystem::path> write_fullframe_reports(const DatasetSummary& summary,
                                                           const RunConfig& config,
                                                           const std::filesystem::path& out_dir) {
    std::vector<std::filesystem::path> written;
    const auto ext = report_extension(config.format);
    const auto eval_path = out_dir / (std::string("evaluation") + std::string(ext));
    write_report(metrics_table(config, summary, summary.per_image), eval_path, config.format);
    written.push_back(eval_path);
    write_run_metadata(summary, config, out_dir, "eval", written);
    return written;
}

std::vector<std::filesystem::path> write_cropeval_reports(const DatasetSummary& summary,
                                                          const RunConfig& config,
                                                          const std::filesystem::path& out_dir) {
    std::vector<std::filesystem::path> written;
    const auto ext = std::string(report_extension(config.format));

    ReportTable counts;
    counts.meta = config_meta(config);
    counts.meta.emplace_back("dataset", ReportValue::text(summary.dataset_name));
    counts.columns = {"image_id",      "method",        "detections_in_bush", "visual_gt_in_bush",
                      "det_green",     "det_blue",      "gt_green",           "gt_blue",
                      "picked_gt",     "radial_distance"};
    for (const auto& r : summary.bush_results) {
        counts.rows.push_back(
            {ReportValue::text(r.counts.image_id),
             ReportValue::text(std::string(counting_method_name(r.counts.method))),
             ReportValue::integer(static_cast<long long>(r.counts.detections_in_bush)),
             ReportValue::integer(static_cast<long long>(r.counts.visual_gt_in_bush)),
             ReportValue::integer(static_cast<long long>(r.counts.detections_per_class[0])),
             ReportValue::integer(static_cast<long long>(r.counts.detections_per_class[1])),
             ReportValue::integer(static_cast<long long>(r.counts.visual_per_class[0])),
             ReportValue::integer(static_cast<long long>(r.counts.visual_per_class[1])),
             r.picked_gt ? ReportValue::integer(*r.picked_gt) : ReportValue::text(""),
             ReportValue::number(r.selection.radial_distance)});
    }
    const auto counts_path = out_dir / ("bush_counts" + ext);
    write_report(counts, counts_path, config.format);
    written.push_back(counts_path);

    ReportTable rects;
    rects.meta = config_meta(config);
    rects.meta.emplace_back("dataset", ReportValue::text(summary.dataset_name));
    rects.columns = {"image_id", "x_min", "y_min", "x_max", "y_max"};
    for (const auto& r : summary.bush_results) {
        rects.rows.push_back({ReportValue::text(r.selection.image_id),
                              ReportValue::number(r.selection.central_box.x_min()),
                              ReportValue::number(r.selection.central_box.y_min()),
                              ReportValue::number(r.selection.central_box.x_max()),
                              ReportValue::number(r.selection.central_box.y_max())});
    }
    const auto rects_path = out_dir / ("crop_rects" + ext);
    write_report(rects, rects_path, config.format);
    written.push_back(rects_path);

    const auto metrics_path = out_dir / ("crop_evaluation" + ext);
    write_report(metrics_table(config, summary, summary.per_image), metrics_path, config.format);
    written.push_back(metrics_path);

    if (summary.pvr.has_value()) {
        ReportTable pvr_table = to_report_table(*summary.pvr);
        auto meta = config_meta(config);
        meta.emplace_back("dataset", ReportValue::text(summary.dataset_name));
        pvr_table.meta = std::move(meta);
        const auto pvr_path = out_dir / ("pvr" + ext);
        write_report(pvr_table, pvr_path, config.format);
        written.push_back(pvr_path);
    }

    write_run_metadata(summary, config, out_dir, "crop-eval", written);
    return written;
}

}  // namespace blueberry
