#pragma once

#include <optional>
#include <string>
#include <vector>

#include "blueberry/report.hpp"

namespace blueberry {

/// Per-image berry counts for one bush: detector count inside the central
/// box, annotation count inside it, and (for validation bushes) the true
/// hand-picked count.
struct BushCountRecord {
    std::string image_id;
    long long detections = 0;
    long long visual_gt = 0;
    std::optional<long long> picked_gt;
};

/// Mean one-side count doubled, the estimate of berries per whole bush.
double mean_berries_per_bush(const std::vector<double>& one_side_counts);

/// Picked-to-visual ratio from annotated counts.
double alpha_experimental(long long picked, long long visual);

/// Picked-to-detections ratio, the detector-based estimate of the same.
double alpha_predicted(long long picked, long long detections);

/// Ratio table over a validation set. Mean and SD summarize the per-row
/// ratios (sample SD, n-1; 0 for a single row); totals are ratios of summed
/// counts and deliberately differ from the mean of per-row ratios.
struct PvrReport {
    struct Row {
        std::string image_id;
        long long detections = 0;
        long long visual_gt = 0;
        long long picked_gt = 0;
        double alpha_predicted = 0.0;
        double alpha_experimental = 0.0;
    };
    std::vector<Row> rows;
    double mean_predicted = 0.0;
    double mean_experimental = 0.0;
    double sd_predicted = 0.0;
    double sd_experimental = 0.0;
    double total_predicted = 0.0;
    double total_experimental = 0.0;
};

/// Builds the ratio table. Every record needs picked_gt and nonzero
/// detections and visual_gt; a violating record is an error naming the image.
PvrReport pvr_report(const std::vector<BushCountRecord>& records);

struct YieldInputs {
    std::vector<double> one_side_counts;
    long long bush_count = 0;   // C
    double area_acres = 0.0;    // A
    double alpha = 0.0;         // picked-visual ratio
};

struct YieldReport {
    double berries_per_bush = 0.0;  // B
    double yield_per_acre = 0.0;    // Y = alpha * B * C / A
    YieldInputs inputs;
};

YieldReport estimate_yield(const YieldInputs& inputs);

// Emitted ratio columns follow the field-report convention of three decimal
// places per row; summary statistics keep full precision.
ReportTable to_report_table(const PvrReport& report);
ReportTable to_report_table(const YieldReport& report);

}  // namespace blueberry
