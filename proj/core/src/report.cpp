#include "blueberry/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "blueberry/errors.hpp"

namespace blueberry {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string cell_to_csv(const ReportValue& v) {
    if (const auto* i = std::get_if<long long>(&v.value)) return std::to_string(*i);
    if (const auto* d = std::get_if<double>(&v.value)) return format_number(*d);
    return csv_escape(std::get<std::string>(v.value));
}

// Numbers go through the 6-significant-digit formatter and back so the JSON
// serializer never prints more digits than the CSV would.
ordered_json cell_to_json(const ReportValue& v) {
    if (const auto* i = std::get_if<long long>(&v.value)) return *i;
    if (const auto* d = std::get_if<double>(&v.value)) {
        const std::string s = format_number(*d);
        double rounded = 0;
        std::from_chars(s.data(), s.data() + s.size(), rounded);
        return rounded;
    }
    const auto& s = std::get<std::string>(v.value);
    if (s == "true") return true;
    if (s == "false") return false;
    return s;
}

}  // namespace

ReportFormat parse_report_format(std::string_view name) {
    if (name == "csv") return ReportFormat::Csv;
    if (name == "json") return ReportFormat::Json;
    throw SchemaError("unknown report format '" + std::string(name) + "' (expected csv or json)");
}

std::string_view report_format_name(ReportFormat format) noexcept {
    return format == ReportFormat::Csv ? "csv" : "json";
}

std::string_view report_extension(ReportFormat format) noexcept {
    return format == ReportFormat::Csv ? ".csv" : ".json";
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double round_places(double v, int places) {
    const double scale = std::pow(10.0, places);
    return std::round(v * scale) / scale;
}

std::string render(const ReportTable& table, ReportFormat format) {
    if (format == ReportFormat::Csv) {
        std::string out;
        for (const auto& [key, value] : table.meta) {
            out += "# " + key + " = " + cell_to_csv(value) + "\n";
        }
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            out += csv_escape(table.columns[c]);
            out += c + 1 < table.columns.size() ? "," : "";
        }
        out += '\n';
        for (const auto& row : table.rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                out += cell_to_csv(row[c]);
                out += c + 1 < row.size() ? "," : "";
            }
            out += '\n';
        }
        return out;
    }

    ordered_json doc;
    ordered_json config = ordered_json::object();
    for (const auto& [key, value] : table.meta) {
        config[key] = cell_to_json(value);
    }
    doc["config"] = config;
    ordered_json rows = ordered_json::array();
    for (const auto& row : table.rows) {
        ordered_json obj = ordered_json::object();
        for (std::size_t c = 0; c < row.size() && c < table.columns.size(); ++c) {
            obj[table.columns[c]] = cell_to_json(row[c]);
        }
        rows.push_back(std::move(obj));
    }
    doc["rows"] = rows;
    return doc.dump(2) + "\n";
}

void write_report(const ReportTable& table, const std::filesystem::path& path,
                  ReportFormat format) {
    write_text_file(path, render(table, format));
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open for writing: " + path.string());
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open file: " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace blueberry
