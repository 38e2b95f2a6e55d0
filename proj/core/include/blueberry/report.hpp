#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace blueberry {

enum class ReportFormat { Csv, Json };

/// Parse "csv" or "json"; throws SchemaError otherwise.
ReportFormat parse_report_format(std::string_view name);
std::string_view report_format_name(ReportFormat format) noexcept;
std::string_view report_extension(ReportFormat format) noexcept;

/// One report cell. Integers keep full precision; numbers are emitted with
/// 6 significant digits; text is quoted as needed in CSV.
struct ReportValue {
    std::variant<long long, double, std::string> value;

    static ReportValue integer(long long v) { return {v}; }
    static ReportValue number(double v) { return {v}; }
    static ReportValue text(std::string v) { return {std::move(v)}; }
    static ReportValue boolean(bool v) { return {std::string(v ? "true" : "false")}; }
};

/// The common shape of every emitted report: a config/meta block, a header,
/// and data rows. Key and column order is preserved exactly as inserted, so
/// equal inputs render byte-identical files.
struct ReportTable {
    std::vector<std::pair<std::string, ReportValue>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<ReportValue>> rows;
};

/// Render a double with 6 significant digits ("%.6g").
std::string format_number(double v);

/// Round to a fixed number of decimal places, half away from zero.
double round_places(double v, int places);

std::string render(const ReportTable& table, ReportFormat format);

void write_report(const ReportTable& table, const std::filesystem::path& path,
                  ReportFormat format);

/// Write pre-rendered text, creating parent directories. Filesystem failures
/// surface as IoError naming the path.
void write_text_file(const std::filesystem::path& path, std::string_view content);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace blueberry
