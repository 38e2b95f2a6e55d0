// Command-line front end: tile planning, detection evaluation, bush-cropped
// evaluation with picked-visual ratios, MOTA, mission planning, and yield
// estimation. Exit codes: 0 success, 1 partial failure (some images were
// skipped), 2 usage or input error.

#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "blueberry/box_file.hpp"
#include "blueberry/errors.hpp"
#include "blueberry/orchestrator.hpp"
#include "blueberry/report.hpp"
#include "blueberry/tiling.hpp"
#include "blueberry/tracking_eval.hpp"

namespace {

using namespace blueberry;

constexpr int kExitOk = 0;
constexpr int kExitPartial = 1;
constexpr int kExitError = 2;

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

template <typename T>
T parse_num(std::string_view tok, std::size_t line_no, const char* what) {
    T value{};
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw ParseError(std::string("malformed ") + what + " '" + std::string(tok) + "'",
                         line_no);
    }
    return value;
}

// Line-oriented inputs for the pvr and yield subcommands share the box-file
// conventions: whitespace-separated fields, '#' comments, blank lines ignored.
template <typename Fn>
void for_each_data_line(const std::string& text, Fn&& fn) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        const std::string_view line = std::string_view(text).substr(
            pos, eol == std::string::npos ? text.size() - pos : eol - pos);
        pos = eol == std::string::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        const auto fields = split_ws(line);
        if (fields.empty() || fields.front().front() == '#') continue;
        fn(fields, line_no);
    }
}

struct CommonFlags {
    std::string format = "csv";
};

void print_summary(const DatasetSummary& summary) {
    std::printf("dataset %s: %zu image(s) evaluated, %zu failure(s)\n",
                summary.dataset_name.c_str(), summary.per_image.size(),
                summary.failures.size());
    std::printf("precision (green/blue/overall): %s / %s / %s\n",
                format_number(summary.pooled.per_class[0].precision).c_str(),
                format_number(summary.pooled.per_class[1].precision).c_str(),
                format_number(summary.pooled.overall.precision).c_str());
    std::printf("recall    (green/blue/overall): %s / %s / %s\n",
                format_number(summary.pooled.per_class[0].recall).c_str(),
                format_number(summary.pooled.per_class[1].recall).c_str(),
                format_number(summary.pooled.overall.recall).c_str());
    for (const auto& f : summary.failures) {
        std::fprintf(stderr, "skipped %s: %s\n", f.image_id.c_str(), f.message.c_str());
    }
}

int run_tile(const std::string& manifest_path, int width, int height, const std::string& mode,
             int tile, int overlap, const std::string& out_dir, ReportFormat format) {
    const bool training = mode == "train";
    const int tile_size = tile > 0 ? tile : (training ? 640 : 700);

    std::vector<std::pair<std::string, std::pair<int, int>>> images;
    if (!manifest_path.empty()) {
        const DatasetManifest manifest = load_manifest(manifest_path);
        for (const auto& record : manifest.images) {
            images.emplace_back(record.image_id, std::make_pair(record.width, record.height));
        }
    } else {
        if (width < 1 || height < 1) {
            throw SchemaError("either --manifest or both --width and --height are required");
        }
        images.emplace_back("image", std::make_pair(width, height));
    }

    int skipped = 0;
    for (const auto& [id, dims] : images) {
        try {
            TilePlan plan = training ? plan_training_tiles(dims.first, dims.second, tile_size)
                                     : plan_inference_tiles(dims.first, dims.second, tile_size,
                                                            overlap);
            plan.image_id = id;
            if (training && plan.tiles.empty()) {
                std::fprintf(stderr, "warning: %s (%dx%d) is smaller than the tile; skipped\n",
                             id.c_str(), dims.first, dims.second);
                ++skipped;
                continue;
            }
            const auto path = std::filesystem::path(out_dir) /
                              (id + ".tiles" + std::string(report_extension(format)));
            write_report(to_report_table(plan), path, format);
            std::printf("%s: %zu tile(s) -> %s\n", id.c_str(), plan.tiles.size(),
                        path.string().c_str());
        } catch (const Error& e) {
            std::fprintf(stderr, "skipped %s: %s\n", id.c_str(), e.what());
            ++skipped;
        }
    }
    return skipped > 0 ? kExitPartial : kExitOk;
}

int run_eval(const std::string& manifest_path, const RunConfig& config,
             const std::string& out_dir) {
    const DatasetSummary summary = run_fullframe_eval(std::filesystem::path(manifest_path),
                                                      config);
    write_fullframe_reports(summary, config, out_dir);
    print_summary(summary);
    return summary.failures.empty() ? kExitOk : kExitPartial;
}

int run_crop_eval(const std::string& manifest_path, const RunConfig& config,
                  const std::string& out_dir) {
    const DatasetSummary summary = run_bushcropped_eval(std::filesystem::path(manifest_path),
                                                        config);
    write_cropeval_reports(summary, config, out_dir);
    print_summary(summary);
    if (summary.pvr.has_value()) {
        std::printf("pvr: mean %s/%s sd %s/%s total %s/%s (predicted/experimental)\n",
                    format_number(summary.pvr->mean_predicted).c_str(),
                    format_number(summary.pvr->mean_experimental).c_str(),
                    format_number(summary.pvr->sd_predicted).c_str(),
                    format_number(summary.pvr->sd_experimental).c_str(),
                    format_number(summary.pvr->total_predicted).c_str(),
                    format_number(summary.pvr->total_experimental).c_str());
    }
    return summary.failures.empty() ? kExitOk : kExitPartial;
}

int run_mota(const std::string& frames_path, long long gt, long long fp, long long fn,
             long long idsw, double iou_threshold, const std::string& out_path,
             ReportFormat format) {
    MotaReport report;
    if (!frames_path.empty()) {
        const auto frames = parse_track_frames(read_text_file(frames_path));
        report = evaluate_tracking(frames, iou_threshold);
    } else if (gt >= 0) {
        if (fp < 0 || fn < 0 || idsw < 0) {
            throw SchemaError("--fp, --fn and --idsw are required alongside --gt");
        }
        report.gt_count = static_cast<std::size_t>(gt);
        report.false_positives = static_cast<std::size_t>(fp);
        report.false_negatives = static_cast<std::size_t>(fn);
        report.mismatches = static_cast<std::size_t>(idsw);
        report.iou_threshold = iou_threshold;
        report.mota = mota_from_counts(report.gt_count, report.false_positives,
                                       report.false_negatives, report.mismatches);
    } else {
        throw SchemaError("either --frames or aggregate counts (--gt --fp --fn --idsw) required");
    }
    std::printf("frames %zu gt %zu predictions %zu fp %zu fn %zu mismatches %zu\n",
                report.frames, report.gt_count, report.predictions, report.false_positives,
                report.false_negatives, report.mismatches);
    std::printf("MOTA %.4f\n", report.mota);
    if (!out_path.empty()) {
        write_report(to_report_table(report), out_path, format);
    }
    return kExitOk;
}

int run_plan(const std::string& field_path, const std::string& grid_text,
             const std::string& strategy_name, std::uint64_t seed, double altitude,
             double standoff, const std::string& out_path, ReportFormat format) {
    const GridSpec grid = parse_grid_spec(grid_text);
    const SamplingStrategy strategy = parse_sampling_strategy(strategy_name);
    const FieldSpec field = load_field_spec(field_path);
    const SamplePlan plan = make_sample_plan(field, grid, strategy, seed, altitude, standoff);
    write_report(to_report_table(plan, field), out_path, format);
    std::printf("%zu waypoint(s) -> %s\n", plan.waypoints.size(), out_path.c_str());

    const auto cells = partition_grid(field, grid);
    const double aspect = cells[0].rect.width() / cells[0].rect.height();
    if (aspect > 1.5 || aspect < 1.0 / 1.5) {
        const GridSpec better = squarest_grid(field, grid.m_rows * grid.n_cols);
        if (better.m_rows != grid.m_rows) {
            std::printf("note: cells are %sx oblong; %dx%d would make them nearest to square\n",
                        format_number(aspect).c_str(), better.m_rows, better.n_cols);
        }
    }
    return kExitOk;
}

int run_yield(const std::string& counts_path, double alpha, long long bushes, double area,
              const std::string& out_path, ReportFormat format) {
    if (!(alpha > 0.0)) {
        throw SchemaError("--alpha must be positive");
    }
    YieldInputs inputs;
    inputs.bush_count = bushes;
    inputs.area_acres = area;
    inputs.alpha = alpha;
    for_each_data_line(read_text_file(counts_path),
                       [&](const std::vector<std::string_view>& fields, std::size_t line_no) {
                           if (fields.size() != 1) {
                               throw ParseError("expected one count per line", line_no);
                           }
                           const double count = parse_num<double>(fields[0], line_no, "count");
                           if (count < 0) {
                               throw ParseError("counts must be nonnegative", line_no);
                           }
                           inputs.one_side_counts.push_back(count);
                       });
    const YieldReport report = estimate_yield(inputs);
    std::printf("berries_per_bush %s\n", format_number(report.berries_per_bush).c_str());
    std::printf("yield_per_acre %s\n", format_number(report.yield_per_acre).c_str());
    if (!out_path.empty()) {
        write_report(to_report_table(report), out_path, format);
    }
    return kExitOk;
}

int run_pvr(const std::string& counts_path, const std::string& out_path, ReportFormat format) {
    std::vector<BushCountRecord> records;
    for_each_data_line(
        read_text_file(counts_path),
        [&](const std::vector<std::string_view>& fields, std::size_t line_no) {
            if (fields.size() != 4) {
                throw ParseError("expected 'image_id detections visual_gt picked_gt'", line_no);
            }
            BushCountRecord rec;
            rec.image_id = std::string(fields[0]);
            rec.detections = parse_num<long long>(fields[1], line_no, "detections");
            rec.visual_gt = parse_num<long long>(fields[2], line_no, "visual_gt");
            rec.picked_gt = parse_num<long long>(fields[3], line_no, "picked_gt");
            records.push_back(std::move(rec));
        });
    const PvrReport report = pvr_report(records);
    for (const auto& row : report.rows) {
        std::printf("%s alpha_predicted %.3f alpha_experimental %.3f\n", row.image_id.c_str(),
                    row.alpha_predicted, row.alpha_experimental);
    }
    std::printf("mean %s %s\n", format_number(report.mean_predicted).c_str(),
                format_number(report.mean_experimental).c_str());
    std::printf("sd %s %s\n", format_number(report.sd_predicted).c_str(),
                format_number(report.sd_experimental).c_str());
    std::printf("total %s %s\n", format_number(report.total_predicted).c_str(),
                format_number(report.total_experimental).c_str());
    if (!out_path.empty()) {
        write_report(to_report_table(report), out_path, format);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"blueberry field toolkit: tiling, detection and tracking evaluation, "
                 "bush-cropped berry counting, mission planning, and yield estimation"};
    app.name("blueberry");
    app.require_subcommand(1);

    // tile
    std::string tile_manifest, tile_mode = "infer", tile_out;
    int tile_width = 0, tile_height = 0, tile_size = 0, tile_overlap = 60;
    CommonFlags tile_common;
    auto* tile = app.add_subcommand("tile", "Emit tile plans for external detector runners");
    tile->add_option("--manifest", tile_manifest, "Dataset manifest (JSON)");
    tile->add_option("--width", tile_width, "Image width when no manifest is given");
    tile->add_option("--height", tile_height, "Image height when no manifest is given");
    tile->add_option("--mode", tile_mode, "Plan kind: train (640, non-overlapping) or infer")
        ->check(CLI::IsMember({"train", "infer"}))
        ->capture_default_str();
    tile->add_option("--tile", tile_size, "Tile size (default 640 train / 700 infer)");
    tile->add_option("--overlap", tile_overlap, "Inference tile overlap in pixels")
        ->capture_default_str();
    tile->add_option("--out", tile_out, "Output directory")->required();
    tile->add_option("--format", tile_common.format, "Report format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    // shared eval flags
    const auto add_eval_flags = [](CLI::App* cmd, std::string& manifest, std::string& out,
                                   RunConfig& config, std::string& format) {
        cmd->add_option("--manifest", manifest, "Dataset manifest (JSON)")->required();
        cmd->add_option("--out", out, "Output directory for reports")->required();
        cmd->add_option("--conf", config.match.confidence_threshold,
                        "Confidence threshold applied before matching")
            ->capture_default_str();
        cmd->add_option("--iou", config.match.iou_threshold, "IoU threshold for true positives")
            ->capture_default_str();
        cmd->add_option("--dup-iou", config.dup_iou,
                        "IoU above which same-class detections from overlapping tiles merge")
            ->capture_default_str();
        cmd->add_option("--tile", config.tile_target, "Inference tile target size")
            ->capture_default_str();
        cmd->add_option("--overlap", config.tile_overlap, "Inference tile overlap")
            ->capture_default_str();
        cmd->add_option("--jobs", config.jobs, "Concurrent image evaluations")
            ->capture_default_str();
        cmd->add_option("--seed", config.seed, "Run seed echoed into reports")
            ->capture_default_str();
        cmd->add_option("--format", format, "Report format")
            ->check(CLI::IsMember({"csv", "json"}))
            ->capture_default_str();
    };

    // eval
    std::string eval_manifest, eval_out, eval_format = "csv";
    RunConfig eval_config;
    auto* eval = app.add_subcommand("eval", "Full-frame detection evaluation over a manifest");
    add_eval_flags(eval, eval_manifest, eval_out, eval_config, eval_format);
    eval->add_flag("--tiled", eval_config.tiled,
                   "Treat detection files as unmerged per-tile output and merge duplicates");

    // crop-eval
    std::string crop_manifest, crop_out, crop_format = "csv", crop_method = "crop";
    RunConfig crop_config;
    auto* crop = app.add_subcommand(
        "crop-eval", "Bush-cropped evaluation and picked-visual ratios over a manifest");
    add_eval_flags(crop, crop_manifest, crop_out, crop_config, crop_format);
    crop->add_option("--method", crop_method, "Berry counting method: crop or bbox")
        ->check(CLI::IsMember({"crop", "bbox"}))
        ->capture_default_str();

    // mota
    std::string mota_frames, mota_out;
    long long mota_gt = -1, mota_fp = -1, mota_fn = -1, mota_idsw = -1;
    double mota_iou = 0.5;
    CommonFlags mota_common;
    auto* mota = app.add_subcommand("mota", "Multiple-object tracking accuracy");
    mota->add_option("--frames", mota_frames, "Frame file with per-frame gt and predictions");
    mota->add_option("--gt", mota_gt, "Aggregate ground-truth count");
    mota->add_option("--fp", mota_fp, "Aggregate false positives");
    mota->add_option("--fn", mota_fn, "Aggregate false negatives");
    mota->add_option("--idsw", mota_idsw, "Aggregate identity mismatches");
    mota->add_option("--iou", mota_iou, "IoU gate for frame matching")->capture_default_str();
    mota->add_option("--out", mota_out, "Optional report path");
    mota->add_option("--format", mota_common.format, "Report format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    // plan
    std::string plan_field, plan_grid, plan_strategy = "point", plan_out;
    std::uint64_t plan_seed = 0;
    double plan_altitude = 15.0, plan_standoff = 3.0;
    CommonFlags plan_common;
    auto* plan = app.add_subcommand("plan", "Stratified sampling mission plan for a field");
    plan->add_option("--field", plan_field, "Field spec (JSON)")->required();
    plan->add_option("--grid", plan_grid, "Grid as MxN, e.g. 3x4")->required();
    plan->add_option("--strategy", plan_strategy, "Sampling strategy: point or row")
        ->check(CLI::IsMember({"point", "row"}))
        ->capture_default_str();
    plan->add_option("--seed", plan_seed, "Plan seed; equal seeds give identical plans")
        ->capture_default_str();
    plan->add_option("--altitude", plan_altitude, "Flight altitude metadata (m)")
        ->capture_default_str();
    plan->add_option("--standoff", plan_standoff, "Bush standoff distance metadata (m)")
        ->capture_default_str();
    plan->add_option("--out", plan_out, "Plan output path")->required();
    plan->add_option("--format", plan_common.format, "Report format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    // yield
    std::string yield_counts, yield_out;
    double yield_alpha = 0.0, yield_area = 0.0;
    long long yield_bushes = 0;
    CommonFlags yield_common;
    auto* yield_cmd = app.add_subcommand("yield", "Crop yield from one-side counts and alpha");
    yield_cmd->add_option("--counts", yield_counts, "File with one one-side count per line")
        ->required();
    yield_cmd->add_option("--alpha", yield_alpha, "Picked-visual ratio")->required();
    yield_cmd->add_option("--bushes", yield_bushes, "Bush count of the field")->required();
    yield_cmd->add_option("--area", yield_area, "Field area in acres")->required();
    yield_cmd->add_option("--out", yield_out, "Optional report path");
    yield_cmd->add_option("--format", yield_common.format, "Report format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    // pvr
    std::string pvr_counts, pvr_out;
    CommonFlags pvr_common;
    auto* pvr = app.add_subcommand("pvr", "Picked-visual ratio table from a counts file");
    pvr->add_option("--counts", pvr_counts,
                    "File with 'image_id detections visual_gt picked_gt' per line")
        ->required();
    pvr->add_option("--out", pvr_out, "Optional report path");
    pvr->add_option("--format", pvr_common.format, "Report format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitError;
    }

    try {
        if (tile->parsed()) {
            return run_tile(tile_manifest, tile_width, tile_height, tile_mode, tile_size,
                            tile_overlap, tile_out, parse_report_format(tile_common.format));
        }
        if (eval->parsed()) {
            eval_config.format = parse_report_format(eval_format);
            return run_eval(eval_manifest, eval_config, eval_out);
        }
        if (crop->parsed()) {
            crop_config.format = parse_report_format(crop_format);
            crop_config.counting_method = parse_counting_method(crop_method);
            return run_crop_eval(crop_manifest, crop_config, crop_out);
        }
        if (mota->parsed()) {
            return run_mota(mota_frames, mota_gt, mota_fp, mota_fn, mota_idsw, mota_iou,
                            mota_out, parse_report_format(mota_common.format));
        }
        if (plan->parsed()) {
            return run_plan(plan_field, plan_grid, plan_strategy, plan_seed, plan_altitude,
                            plan_standoff, plan_out, parse_report_format(plan_common.format));
        }
        if (yield_cmd->parsed()) {
            return run_yield(yield_counts, yield_alpha, yield_bushes, yield_area, yield_out,
                             parse_report_format(yield_common.format));
        }
        if (pvr->parsed()) {
            return run_pvr(pvr_counts, pvr_out, parse_report_format(pvr_common.format));
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitError;
    }
    return kExitError;
}
