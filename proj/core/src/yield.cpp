#include "blueberry/yield.hpp"

#include <cmath>
#include <numeric>

#include "blueberry/errors.hpp"

namespace blueberry {

double mean_berries_per_bush(const std::vector<double>& one_side_counts) {
    if (one_side_counts.empty()) {
        throw Error("cannot average an empty list of per-bush counts");
    }
    const double sum = std::accumulate(one_side_counts.begin(), one_side_counts.end(), 0.0);
    return 2.0 * (sum / static_cast<double>(one_side_counts.size()));
}

double alpha_experimental(long long picked, long long visual) {
    if (visual <= 0) {
        throw Error("visual ground-truth count must be positive");
    }
    return static_cast<double>(picked) / static_cast<double>(visual);
}

double alpha_predicted(long long picked, long long detections) {
    if (detections <= 0) {
        throw Error("detection count must be positive");
    }
    return static_cast<double>(picked) / static_cast<double>(detections);
}

namespace {

double mean_of(const std::vector<double>& xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_sd(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    const double mean = mean_of(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

}  // namespace

PvrReport pvr_report(const std::vector<BushCountRecord>& records) {
    if (records.empty()) {
        throw Error("cannot build a ratio report from zero records");
    }
    PvrReport report;
    std::vector<double> predicted, experimental;
    long long sum_detections = 0, sum_visual = 0, sum_picked = 0;
    for (const auto& rec : records) {
        if (!rec.picked_gt.has_value()) {
            throw Error("image '" + rec.image_id + "' has no picked ground-truth count");
        }
        if (rec.detections <= 0) {
            throw Error("image '" + rec.image_id + "' has no detections; ratio undefined");
        }
        if (rec.visual_gt <= 0) {
            throw Error("image '" + rec.image_id + "' has no visual ground truth; ratio undefined");
        }
        PvrReport::Row row;
        row.image_id = rec.image_id;
        row.detections = rec.detections;
        row.visual_gt = rec.visual_gt;
        row.picked_gt = *rec.picked_gt;
        row.alpha_predicted = alpha_predicted(row.picked_gt, row.detections);
        row.alpha_experimental = alpha_experimental(row.picked_gt, row.visual_gt);
        predicted.push_back(row.alpha_predicted);
        experimental.push_back(row.alpha_experimental);
        sum_detections += row.detections;
        sum_visual += row.visual_gt;
        sum_picked += row.picked_gt;
        report.rows.push_back(std::move(row));
    }
    report.mean_predicted = mean_of(predicted);
    report.mean_experimental = mean_of(experimental);
    report.sd_predicted = sample_sd(predicted);
    report.sd_experimental = sample_sd(experimental);
    report.total_predicted = alpha_predicted(sum_picked, sum_detections);
    report.total_experimental = alpha_experimental(sum_picked, sum_visual);
    return report;
}

YieldReport estimate_yield(const YieldInputs& inputs) {
    if (inputs.area_acres <= 0.0) {
        throw Error("field area must be positive");
    }
    if (inputs.bush_count <= 0) {
        throw Error("bush count must be positive");
    }
    YieldReport report;
    report.inputs = inputs;
    report.berries_per_bush = mean_berries_per_bush(inputs.one_side_counts);
    report.yield_per_acre = inputs.alpha * report.berries_per_bush *
                            static_cast<double>(inputs.bush_count) / inputs.area_acres;
    return report;
}

ReportTable to_report_table(const PvrReport& report) {
    ReportTable table;
    table.columns = {"image_id",     "detections",      "visual_gt",
                     "picked_gt",    "alpha_predicted", "alpha_experimental"};
    for (const auto& row : report.rows) {
        table.rows.push_back({ReportValue::text(row.image_id),
                              ReportValue::integer(row.detections),
                              ReportValue::integer(row.visual_gt),
                              ReportValue::integer(row.picked_gt),
                              ReportValue::number(round_places(row.alpha_predicted, 3)),
                              ReportValue::number(round_places(row.alpha_experimental, 3))});
    }
    const auto summary_row = [&](const char* label, double predicted, double experimental) {
        table.rows.push_back({ReportValue::text(label), ReportValue::text(""),
                              ReportValue::text(""), ReportValue::text(""),
                              ReportValue::number(predicted), ReportValue::number(experimental)});
    };
    summary_row("mean", report.mean_predicted, report.mean_experimental);
    summary_row("sd", report.sd_predicted, report.sd_experimental);
    summary_row("total", report.total_predicted, report.total_experimental);
    return table;
}

ReportTable to_report_table(const YieldReport& report) {
    ReportTable table;
    table.meta.emplace_back("alpha", ReportValue::number(report.inputs.alpha));
    table.meta.emplace_back("bush_count", ReportValue::integer(report.inputs.bush_count));
    table.meta.emplace_back("area_acres", ReportValue::number(report.inputs.area_acres));
    table.meta.emplace_back(
        "sampled_bushes",
        ReportValue::integer(static_cast<long long>(report.inputs.one_side_counts.size())));
    table.columns = {"berries_per_bush", "yield_per_acre"};
    table.rows.push_back({ReportValue::number(report.berries_per_bush),
                          ReportValue::number(report.yield_per_acre)});
    return table;
}

}  // namespace blueberry
