#include "blueberry/tracking_eval.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <unordered_map>
#include <unordered_set>

#include "blueberry/errors.hpp"

namespace blueberry {

double mota_from_counts(std::size_t gt, std::size_t fp, std::size_t fn, std::size_t idsw) {
    if (gt == 0) {
        throw Error("MOTA undefined for zero ground-truth objects");
    }
    return 1.0 - static_cast<double>(fn + fp + idsw) / static_cast<double>(gt);
}

MotaReport evaluate_tracking(const std::vector<TrackFrame>& frames, double iou_threshold) {
    if (frames.empty()) {
        throw Error("cannot evaluate an empty frame list");
    }
    MotaReport report;
    report.iou_threshold = iou_threshold;
    report.frames = frames.size();

    std::unordered_map<long long, long long> last_pair;  // gt id -> pred id

    long long prev_index = 0;
    bool first = true;
    for (const auto& frame : frames) {
        if (!first && frame.frame_index <= prev_index) {
            throw Error("frames must be sorted by strictly increasing frame_index");
        }
        first = false;
        prev_index = frame.frame_index;

        {
            std::unordered_set<long long> seen;
            for (const auto& g : frame.ground_truths) {
                if (!seen.insert(g.track_id).second) {
                    throw Error("duplicate ground-truth track id " + std::to_string(g.track_id) +
                                " in frame " + std::to_string(frame.frame_index));
                }
            }
            seen.clear();
            for (const auto& p : frame.predictions) {
                if (!seen.insert(p.track_id).second) {
                    throw Error("duplicate prediction track id " + std::to_string(p.track_id) +
                                " in frame " + std::to_string(frame.frame_index));
                }
            }
        }

        report.gt_count += frame.ground_truths.size();
        report.predictions += frame.predictions.size();

        std::unordered_map<long long, std::size_t> pred_by_id;
        for (std::size_t j = 0; j < frame.predictions.size(); ++j) {
            pred_by_id[frame.predictions[j].track_id] = j;
        }

        std::vector<bool> gt_taken(frame.ground_truths.size(), false);
        std::vector<bool> pred_taken(frame.predictions.size(), false);
        std::vector<std::pair<std::size_t, std::size_t>> matches;

        // Continuation pass: keep last frame's pairing when it still holds.
        for (std::size_t i = 0; i < frame.ground_truths.size(); ++i) {
            const auto prev = last_pair.find(frame.ground_truths[i].track_id);
            if (prev == last_pair.end()) continue;
            const auto pit = pred_by_id.find(prev->second);
            if (pit == pred_by_id.end() || pred_taken[pit->second]) continue;
            if (iou(frame.ground_truths[i].box, frame.predictions[pit->second].box) >=
                iou_threshold) {
                gt_taken[i] = true;
                pred_taken[pit->second] = true;
                matches.emplace_back(i, pit->second);
            }
        }

        // Greedy pass over remaining pairs by descending iou.
        struct Candidate {
            double overlap;
            std::size_t gt;
            std::size_t pred;
        };
        std::vector<Candidate> candidates;
        for (std::size_t i = 0; i < frame.ground_truths.size(); ++i) {
            if (gt_taken[i]) continue;
            for (std::size_t j = 0; j < frame.predictions.size(); ++j) {
                if (pred_taken[j]) continue;
                const double overlap =
                    iou(frame.ground_truths[i].box, frame.predictions[j].box);
                if (overlap >= iou_threshold) candidates.push_back({overlap, i, j});
            }
        }
        std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
            if (a.overlap != b.overlap) return a.overlap > b.overlap;
            if (a.gt != b.gt) return a.gt < b.gt;
            return a.pred < b.pred;
        });
        for (const auto& cand : candidates) {
            if (gt_taken[cand.gt] || pred_taken[cand.pred]) continue;
            gt_taken[cand.gt] = true;
            pred_taken[cand.pred] = true;
            matches.emplace_back(cand.gt, cand.pred);
        }

        for (const auto& [gi, pj] : matches) {
            const long long gt_id = frame.ground_truths[gi].track_id;
            const long long pred_id = frame.predictions[pj].track_id;
            const auto prev = last_pair.find(gt_id);
            if (prev != last_pair.end() && prev->second != pred_id) {
                ++report.mismatches;
            }
            last_pair[gt_id] = pred_id;
        }

        report.false_negatives += frame.ground_truths.size() - matches.size();
        report.false_positives += frame.predictions.size() - matches.size();
    }

    report.mota = mota_from_counts(report.gt_count, report.false_positives,
                                   report.false_negatives, report.mismatches);
    return report;
}

namespace {

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

}  // namespace

std::vector<TrackFrame> parse_track_frames(std::string_view text) {
    std::vector<TrackFrame> frames;
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

        if (fields[0] == "frame") {
            if (fields.size() != 2) throw ParseError("expected 'frame <index>'", line_no);
            TrackFrame frame;
            frame.frame_index = parse_num<long long>(fields[1], line_no, "frame index");
            frames.push_back(std::move(frame));
            continue;
        }
        if (fields[0] == "gt" || fields[0] == "pred") {
            if (frames.empty()) {
                throw ParseError("record before any 'frame' header", line_no);
            }
            if (fields.size() != 6) {
                throw ParseError("expected '" + std::string(fields[0]) +
                                     " <id> <x_min> <y_min> <x_max> <y_max>'",
                                 line_no);
            }
            TrackedBox tb{parse_num<long long>(fields[1], line_no, "track id"),
                          BoundingBox(parse_num<double>(fields[2], line_no, "x_min"),
                                      parse_num<double>(fields[3], line_no, "y_min"),
                                      parse_num<double>(fields[4], line_no, "x_max"),
                                      parse_num<double>(fields[5], line_no, "y_max"))};
            if (fields[0] == "gt") {
                frames.back().ground_truths.push_back(tb);
            } else {
                frames.back().predictions.push_back(tb);
            }
            continue;
        }
        throw ParseError("unknown record '" + std::string(fields[0]) + "'", line_no);
    }
    return frames;
}

std::string emit_track_frames(const std::vector<TrackFrame>& frames) {
    std::string out;
    char buf[160];
    for (const auto& frame : frames) {
        out += "frame " + std::to_string(frame.frame_index) + "\n";
        for (const auto& g : frame.ground_truths) {
            std::snprintf(buf, sizeof buf, "gt %lld %.3f %.3f %.3f %.3f\n", g.track_id,
                          g.box.x_min(), g.box.y_min(), g.box.x_max(), g.box.y_max());
            out += buf;
        }
        for (const auto& p : frame.predictions) {
            std::snprintf(buf, sizeof buf, "pred %lld %.3f %.3f %.3f %.3f\n", p.track_id,
                          p.box.x_min(), p.box.y_min(), p.box.x_max(), p.box.y_max());
            out += buf;
        }
    }
    return out;
}

ReportTable to_report_table(const MotaReport& report) {
    ReportTable table;
    table.columns = {"parameter", "value"};
    const auto row = [&](const char* name, ReportValue value) {
        table.rows.push_back({ReportValue::text(name), std::move(value)});
    };
    row("frames", ReportValue::integer(static_cast<long long>(report.frames)));
    row("annotations", ReportValue::integer(static_cast<long long>(report.gt_count)));
    row("predictions", ReportValue::integer(static_cast<long long>(report.predictions)));
    row("mismatch_errors", ReportValue::integer(static_cast<long long>(report.mismatches)));
    row("false_positives", ReportValue::integer(static_cast<long long>(report.false_positives)));
    row("false_negatives", ReportValue::integer(static_cast<long long>(report.false_negatives)));
    row("iou_threshold", ReportValue::number(report.iou_threshold));
    row("mota", ReportValue::number(report.mota));
    return table;
}

}  // namespace blueberry
