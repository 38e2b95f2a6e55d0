// Acceptance suite. Each criterion prints one [PASS]/[FAIL] line; the binary
// exits nonzero if any criterion fails. The first argument is the path to the
// CLI binary, used for the end-to-end criteria; remaining checks go through
// the library directly.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "blueberry/box_file.hpp"
#include "blueberry/detection_eval.hpp"
#include "blueberry/field_sampling.hpp"
#include "blueberry/report.hpp"
#include "blueberry/tiling.hpp"
#include "blueberry/tracking_eval.hpp"
#include "blueberry/yield.hpp"
#include "test_util.hpp"

using namespace blueberry;
using blueberry::testing::TempDir;

namespace {

std::string g_cli;

struct Checker {
    std::size_t checks = 0;
    std::vector<std::string> failures;

    void require(bool ok, const std::string& what) {
        ++checks;
        if (!ok && failures.size() < 8) failures.push_back(what);
        if (!ok && failures.size() >= 8) failures.back() = "... more failures suppressed";
    }
    void close(double a, double b, double tol, const std::string& what) {
        require(std::abs(a - b) <= tol,
                what + ": got " + std::to_string(a) + ", want " + std::to_string(b) + " +- " +
                    std::to_string(tol));
    }
};

struct CliResult {
    int exit_code = -1;
    std::string output;
};

CliResult run_cli(const std::string& args) {
    CliResult result;
    const std::string cmd = g_cli + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) return result;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) {
        result.output.append(buf, n);
        if (n < sizeof buf) break;
    }
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

double parse_labeled_value(const std::string& output, const std::string& label) {
    const auto pos = output.find(label);
    if (pos == std::string::npos) return std::nan("");
    return std::atof(output.c_str() + pos + label.size());
}

// ---------------------------------------------------------------------------
// criterion 1: picked-visual ratio reproduction

struct PvrFixture {
    const char* name;
    std::vector<std::array<long long, 3>> rows;           // detections, visual, picked
    std::vector<std::array<double, 2>> expected_rows;     // alpha_p, alpha per row
    std::array<double, 2> mean, sd, total;                // alpha_p, alpha
};

const PvrFixture kPvrSets[3] = {
    {"set_a",
     {{{882, 1010, 3312}}, {{1451, 1230, 3996}}, {{511, 493, 2888}}, {{711, 847, 2920}},
      {{420, 708, 1404}}},
     {{{3.755, 3.279}}, {{2.754, 3.249}}, {{5.652, 5.858}}, {{4.107, 3.447}}, {{3.343, 1.983}}},
     {{3.92, 3.56}},
     {{1.09, 1.41}},
     {{3.65, 3.39}}},
    {"set_b",
     {{{891, 785, 1404}}, {{885, 806, 2920}}, {{1012, 972, 2888}}, {{1856, 1842, 3996}},
      {{1071, 1043, 3312}}},
     {{{1.576, 1.789}}, {{3.299, 3.623}}, {{2.854, 2.971}}, {{2.153, 2.169}}, {{3.092, 3.175}}},
     {{2.59, 2.75}},
     {{0.71, 0.75}},
     {{2.54, 2.67}}},
    // the third set's published predicted-ratio summaries disagree with its
    // own rows (its detections column sums to 5124, not 4774); the predicted
    // mean/sd/total here are the values its rows actually yield
    {"set_c",
     {{{1109, 1507, 2407}}, {{831, 924, 3215}}, {{1261, 1491, 1963}}, {{713, 618, 2307}},
      {{1210, 1457, 1963}}},
     {{{2.170, 1.597}}, {{3.869, 3.479}}, {{1.557, 1.316}}, {{3.236, 3.733}}, {{1.622, 1.347}}},
     {{2.490779, 2.29}},
     {{1.022642, 1.21}},
     {{2.313622, 1.98}}},
};

void criterion_pvr(Checker& check) {
    TempDir dir("acc_pvr");
    for (const auto& fixture : kPvrSets) {
        std::string counts;
        for (std::size_t i = 0; i < fixture.rows.size(); ++i) {
            counts += std::string(fixture.name) + std::to_string(i + 1) + " " +
                      std::to_string(fixture.rows[i][0]) + " " +
                      std::to_string(fixture.rows[i][1]) + " " +
                      std::to_string(fixture.rows[i][2]) + "\n";
        }
        const auto counts_path = dir / (std::string(fixture.name) + ".txt");
        write_text_file(counts_path, counts);
        const auto out_path = dir / (std::string(fixture.name) + ".json");
        const auto run = run_cli("pvr --counts " + counts_path.string() + " --out " +
                                 out_path.string() + " --format json");
        check.require(run.exit_code == 0, std::string(fixture.name) + ": pvr exited with " +
                                              std::to_string(run.exit_code));
        if (run.exit_code != 0) continue;

        const auto doc = nlohmann::json::parse(read_text_file(out_path));
        std::size_t data_row = 0;
        for (const auto& row : doc.at("rows")) {
            const std::string id = row.at("image_id").get<std::string>();
            const double ap = row.at("alpha_predicted").is_number()
                                  ? row.at("alpha_predicted").get<double>()
                                  : std::nan("");
            const double ae = row.at("alpha_experimental").is_number()
                                  ? row.at("alpha_experimental").get<double>()
                                  : std::nan("");
            if (id == "mean") {
                check.close(ap, fixture.mean[0], 0.005, std::string(fixture.name) + " mean a_p");
                check.close(ae, fixture.mean[1], 0.005, std::string(fixture.name) + " mean a");
            } else if (id == "sd") {
                check.close(ap, fixture.sd[0], 0.005, std::string(fixture.name) + " sd a_p");
                check.close(ae, fixture.sd[1], 0.005, std::string(fixture.name) + " sd a");
            } else if (id == "total") {
                check.close(ap, fixture.total[0], 0.005, std::string(fixture.name) + " total a_p");
                check.close(ae, fixture.total[1], 0.005, std::string(fixture.name) + " total a");
            } else {
                check.require(data_row < fixture.expected_rows.size(),
                              "unexpected extra row " + id);
                if (data_row < fixture.expected_rows.size()) {
                    check.close(ap, fixture.expected_rows[data_row][0], 0.005, id + " a_p");
                    check.close(ae, fixture.expected_rows[data_row][1], 0.005, id + " a");
                }
                ++data_row;
            }
        }
        check.require(data_row == 5, std::string(fixture.name) + ": expected 5 data rows");
    }
}

// ---------------------------------------------------------------------------
// criterion 2: MOTA reproduction from aggregate counts

void criterion_mota(Checker& check) {
    const auto v1 = run_cli("mota --gt 6464 --fp 2315 --fn 1745 --idsw 149");
    check.require(v1.exit_code == 0, "video 1: mota exit code " + std::to_string(v1.exit_code));
    check.close(parse_labeled_value(v1.output, "MOTA "), 0.3489, 0.0005, "video 1 MOTA");

    // the published value 0.4786 differs from its own row's arithmetic
    // (1 - 169/324 = 0.4784); the tolerance is widened to cover both
    const auto v2 = run_cli("mota --gt 324 --fp 96 --fn 66 --idsw 7");
    check.require(v2.exit_code == 0, "video 2: mota exit code " + std::to_string(v2.exit_code));
    check.close(parse_labeled_value(v2.output, "MOTA "), 0.4786, 0.002, "video 2 MOTA");
}

// ---------------------------------------------------------------------------
// criterion 3: yield formula scaling properties

void criterion_yield(Checker& check) {
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> value(0.01, 10000.0);
    std::uniform_int_distribution<long long> bushes(1, 1000000);
    std::uniform_int_distribution<int> ncounts(1, 12);
    const auto relative_close = [&](double a, double b, const std::string& what) {
        check.require(std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)), what);
    };
    for (int i = 0; i < 1000; ++i) {
        YieldInputs inputs;
        for (int c = ncounts(rng); c > 0; --c) inputs.one_side_counts.push_back(value(rng));
        inputs.bush_count = bushes(rng);
        inputs.area_acres = value(rng);
        inputs.alpha = value(rng) / 1000.0;
        const double k = 1.0 + value(rng) / 100.0;
        const double y = estimate_yield(inputs).yield_per_acre;

        auto in_alpha = inputs;
        in_alpha.alpha *= k;
        relative_close(estimate_yield(in_alpha).yield_per_acre, k * y, "linear in alpha");

        auto in_b = inputs;
        for (auto& c : in_b.one_side_counts) c *= k;
        relative_close(estimate_yield(in_b).yield_per_acre, k * y, "linear in B");

        auto in_c = inputs;
        in_c.bush_count *= 3;
        relative_close(estimate_yield(in_c).yield_per_acre, 3.0 * y, "linear in bush count");

        auto in_a = inputs;
        in_a.area_acres *= k;
        relative_close(estimate_yield(in_a).yield_per_acre, y / k, "inverse in area");
    }
}

// ---------------------------------------------------------------------------
// criterion 4: tiling identities over the dimension lattice

void criterion_tiling(Checker& check) {
    // per-axis identity over every length: exact overlap, exact span, <=1 px spread
    for (int length = 100; length <= 5000; ++length) {
        const auto plan = plan_inference_tiles(length, 700);
        double prev_end = -1.0, min_w = 1e18, max_w = 0.0;
        bool ok = true;
        for (const auto& tile : plan.tiles) {
            if (tile.index.row != 0) continue;
            if (tile.index.col == 0) {
                ok &= tile.box.x_min() == 0.0;
            } else {
                ok &= (prev_end - tile.box.x_min()) == 60.0;
            }
            prev_end = tile.box.x_max();
            min_w = std::min(min_w, tile.box.width());
            max_w = std::max(max_w, tile.box.width());
        }
        ok &= prev_end == static_cast<double>(length);
        ok &= (max_w - min_w) <= 1.0;
        check.require(ok, "axis identity broken at length " + std::to_string(length));
        if (!ok) return;
    }

    // full plans across the 50-step lattice
    for (int w = 100; w <= 5000; w += 50) {
        for (int h = 100; h <= 5000; h += 50) {
            const auto training = plan_training_tiles(w, h);
            bool ok = training.tiles.size() ==
                      static_cast<std::size_t>((w / 640) * (h / 640));
            for (const auto& tile : training.tiles) {
                ok &= tile.box.area() == 640.0 * 640.0;
                ok &= tile.box.x_max() <= w && tile.box.y_max() <= h;
            }
            for (std::size_t i = 0; ok && i < training.tiles.size(); ++i) {
                for (std::size_t j = i + 1; j < training.tiles.size(); ++j) {
                    if (intersect(training.tiles[i].box, training.tiles[j].box)) {
                        ok = false;
                        break;
                    }
                }
            }
            check.require(ok, "training identities broken at " + std::to_string(w) + "x" +
                                  std::to_string(h));

            const auto inference = plan_inference_tiles(w, h);
            // coverage via a coarse sample grid
            bool covered = true;
            for (int sx = 0; sx < 10 && covered; ++sx) {
                for (int sy = 0; sy < 10 && covered; ++sy) {
                    const Point2D p{w * (sx + 0.5) / 10.0, h * (sy + 0.5) / 10.0};
                    bool in_any = false;
                    for (const auto& tile : inference.tiles) {
                        if (tile.box.contains(p)) {
                            in_any = true;
                            break;
                        }
                    }
                    covered &= in_any;
                }
            }
            check.require(covered, "inference coverage hole at " + std::to_string(w) + "x" +
                                       std::to_string(h));
            if (!covered) return;
        }
    }
}

// ---------------------------------------------------------------------------
// criterion 5: greedy matching against the exhaustive assignment oracle

std::size_t max_matching(const std::vector<std::vector<bool>>& valid) {
    const std::size_t gts = valid.size();
    const std::size_t dets = gts == 0 ? 0 : valid[0].size();
    std::vector<int> owner(dets, -1);
    std::function<bool(std::size_t, std::vector<bool>&)> augment =
        [&](std::size_t g, std::vector<bool>& visited) {
            for (std::size_t d = 0; d < dets; ++d) {
                if (!valid[g][d] || visited[d]) continue;
                visited[d] = true;
                if (owner[d] < 0 || augment(static_cast<std::size_t>(owner[d]), visited)) {
                    owner[d] = static_cast<int>(g);
                    return true;
                }
            }
            return false;
        };
    std::size_t size = 0;
    for (std::size_t g = 0; g < gts; ++g) {
        std::vector<bool> visited(dets, false);
        if (augment(g, visited)) ++size;
    }
    return size;
}

void criterion_matching_oracle(Checker& check) {
    std::mt19937_64 rng(424242);
    std::uniform_int_distribution<int> count(1, 6);
    std::uniform_int_distribution<int> cls(0, 1);
    std::uniform_real_distribution<double> conf(0.0, 1.0);
    std::uniform_real_distribution<double> pos(0.0, 40.0);
    std::uniform_real_distribution<double> size(4.0, 18.0);
    const MatchConfig cfg;

    int equal = 0;
    const int instances = 500;
    for (int it = 0; it < instances; ++it) {
        std::vector<GroundTruth> gts;
        std::vector<Detection> dets;
        for (int i = 0, n = count(rng); i < n; ++i) {
            const double x = pos(rng), y = pos(rng);
            gts.push_back({static_cast<ClassId>(cls(rng)),
                           BoundingBox(x, y, x + size(rng), y + size(rng))});
        }
        for (int i = 0, n = count(rng); i < n; ++i) {
            const double x = pos(rng), y = pos(rng);
            dets.push_back({static_cast<ClassId>(cls(rng)),
                            BoundingBox(x, y, x + size(rng), y + size(rng)), conf(rng)});
        }

        const auto m = match(gts, dets, cfg);

        std::vector<std::vector<bool>> valid(gts.size(), std::vector<bool>(dets.size(), false));
        for (std::size_t g = 0; g < gts.size(); ++g) {
            for (std::size_t d = 0; d < dets.size(); ++d) {
                valid[g][d] = gts[g].cls == dets[d].cls &&
                              dets[d].confidence >= cfg.confidence_threshold &&
                              iou(gts[g].box, dets[d].box) >= cfg.iou_threshold;
            }
        }
        const std::size_t best = max_matching(valid);
        check.require(m.true_positives.size() <= best,
                      "greedy exceeded the exhaustive optimum at instance " +
                          std::to_string(it));
        if (m.true_positives.size() == best) ++equal;

        std::size_t kept = 0;
        for (const auto& d : dets) {
            if (d.confidence >= cfg.confidence_threshold) ++kept;
        }
        check.require(m.true_positives.size() + m.false_negative_gts.size() == gts.size(),
                      "gt cardinality identity failed at instance " + std::to_string(it));
        check.require(m.true_positives.size() + m.false_positive_dets.size() == kept,
                      "detection cardinality identity failed at instance " + std::to_string(it));
    }
    check.require(equal >= instances * 95 / 100,
                  "greedy matched the optimum in only " + std::to_string(equal) + "/" +
                      std::to_string(instances) + " instances");
    std::printf("  (matching oracle: greedy equals optimum in %d/%d instances)\n", equal,
                instances);
}

// ---------------------------------------------------------------------------
// criterion 6: synthetic field end-to-end with a perfect detector

void criterion_end_to_end(Checker& check) {
    TempDir dir("acc_e2e");

    // field spec: roughly 160 m x 100 m, rows east-west, 20 bushes
    const char* field_json = R"({
      "name": "synthetic",
      "corners": [
        {"lat": 39.7000, "lon": -74.8000},
        {"lat": 39.7000, "lon": -74.7981},
        {"lat": 39.7009, "lon": -74.7981},
        {"lat": 39.7009, "lon": -74.8000}
      ],
      "row_direction_deg": 90.0,
      "area_acres": 2.5,
      "bush_count": 20
    })";
    const auto field_path = dir / "field.json";
    write_text_file(field_path, field_json);

    // mission plan determinism: 4x5 grid -> 20 waypoints, byte-identical reruns
    const auto plan1 = dir / "plan1.csv";
    const auto plan2 = dir / "plan2.csv";
    const auto p1 = run_cli("plan --field " + field_path.string() +
                            " --grid 4x5 --strategy point --seed 11 --out " + plan1.string());
    const auto p2 = run_cli("plan --field " + field_path.string() +
                            " --grid 4x5 --strategy point --seed 11 --out " + plan2.string());
    check.require(p1.exit_code == 0 && p2.exit_code == 0, "plan subcommand failed");
    check.require(read_text_file(plan1) == read_text_file(plan2),
                  "plan files differ between identical runs");
    check.require(read_text_file(plan1).find("true") != std::string::npos,
                  "expected waypoints flagged inside the field");
    {
        std::size_t lines = 0;
        const std::string text = read_text_file(plan1);
        for (char c : text) lines += c == '\n';
        // 7 meta lines + header + 20 waypoints
        check.require(lines == 28, "expected 20 waypoints in the plan, got " +
                                       std::to_string(lines) + " lines");
    }

    // one image per bush; planted one-side counts 40..59; perfect detector
    std::vector<long long> planted;
    std::string images;
    for (int i = 0; i < 20; ++i) {
        const long long count = 40 + i;
        planted.push_back(count);
        const std::string id = "bush" + std::to_string(i);
        const int width = 2000, height = 1500;
        const BoundingBox central(400, 300, 1600, 1200);
        const auto berries =
            blueberry::testing::grid_boxes(static_cast<std::size_t>(count), central);
        const auto gts = blueberry::testing::as_ground_truths(berries);
        const auto dets = blueberry::testing::as_detections(berries);
        write_text_file(dir / (id + ".txt"), emit_ground_truths(gts, width, height));
        write_text_file(dir / (id + ".det.txt"), emit_detections(dets, width, height));
        write_text_file(dir / (id + ".bush.txt"), "0 0.5 0.5 0.6 0.6 0.99\n");
        images += std::string(i ? "," : "") + R"({"id": ")" + id +
                  R"(", "width": 2000, "height": 1500, "annotations_path": ")" + id +
                  R"(.txt", "detections_path": ")" + id + R"(.det.txt", "bush_boxes_path": ")" +
                  id + R"(.bush.txt"})";
    }
    write_text_file(dir / "manifest.json",
                    R"({"name": "synthetic", "class_names": ["green", "blue"], "images": [)" +
                        images + "]}");

    const auto run1 = run_cli("crop-eval --manifest " + (dir / "manifest.json").string() +
                              " --out " + (dir / "run1").string() + " --format json");
    const auto run2 = run_cli("crop-eval --manifest " + (dir / "manifest.json").string() +
                              " --out " + (dir / "run2").string() + " --format json");
    check.require(run1.exit_code == 0 && run2.exit_code == 0,
                  "crop-eval failed: " + run1.output);
    for (const char* name : {"bush_counts.json", "crop_rects.json", "crop_evaluation.json",
                             "run.json"}) {
        check.require(read_text_file(dir / "run1" / name) == read_text_file(dir / "run2" / name),
                      std::string(name) + " differs between identical runs");
    }

    // the perfect detector reproduces the planted counts inside each bush
    const auto counts_doc =
        nlohmann::json::parse(read_text_file(dir / "run1" / "bush_counts.json"));
    std::string counts_file;
    std::size_t row_index = 0;
    for (const auto& row : counts_doc.at("rows")) {
        const long long detections = row.at("detections_in_bush").get<long long>();
        check.require(row_index < planted.size() && detections == planted[row_index],
                      "detections_in_bush mismatch at row " + std::to_string(row_index));
        counts_file += std::to_string(detections) + "\n";
        ++row_index;
    }
    check.require(row_index == planted.size(), "expected 20 bush count rows");
    write_text_file(dir / "counts.txt", counts_file);

    // yield through the CLI equals the analytic value exactly
    const auto yield_run =
        run_cli("yield --counts " + (dir / "counts.txt").string() +
                " --alpha 2 --bushes 20 --area 2.5 --out " + (dir / "yield.json").string() +
                " --format json");
    check.require(yield_run.exit_code == 0, "yield subcommand failed");

    double sum = 0.0;
    for (long long c : planted) sum += static_cast<double>(c);
    const double analytic_b = 2.0 * (sum / static_cast<double>(planted.size()));
    const double analytic_y = 2.0 * analytic_b * 20.0 / 2.5;

    YieldInputs inputs;
    for (long long c : planted) inputs.one_side_counts.push_back(static_cast<double>(c));
    inputs.bush_count = 20;
    inputs.area_acres = 2.5;
    inputs.alpha = 2.0;
    check.require(estimate_yield(inputs).yield_per_acre == analytic_y,
                  "library yield is not exactly the analytic value");
    check.close(parse_labeled_value(yield_run.output, "yield_per_acre "), analytic_y, 0.0,
                "cli yield output");
}

// ---------------------------------------------------------------------------
// criterion 7: tracking synthesis with injected errors

void criterion_tracking_synthesis(Checker& check) {
    std::mt19937_64 rng(777);
    for (int config = 0; config < 20; ++config) {
        std::uniform_int_distribution<int> tracks_dist(2, 5);
        std::uniform_int_distribution<int> frames_dist(10, 40);
        const int tracks = tracks_dist(rng);
        const int frames = frames_dist(rng);

        // disjoint (track, frame>=1) slots for misses and switches
        std::vector<std::pair<int, int>> slots;
        for (int g = 0; g < tracks; ++g) {
            for (int t = 1; t < frames; ++t) slots.emplace_back(g, t);
        }
        std::shuffle(slots.begin(), slots.end(), rng);
        std::uniform_int_distribution<int> err_dist(0, 8);
        const int want_fn = err_dist(rng);
        const int want_switch = err_dist(rng);
        const int want_fp = err_dist(rng);
        std::set<std::pair<int, int>> fn_slots(slots.begin(), slots.begin() + want_fn);
        std::set<std::pair<int, int>> switch_slots(slots.begin() + want_fn,
                                                   slots.begin() + want_fn + want_switch);

        std::vector<long long> pred_id(tracks);
        for (int g = 0; g < tracks; ++g) pred_id[g] = 1000 + g;
        long long fresh = 5000;

        std::uniform_int_distribution<int> fp_frame(0, frames - 1);
        std::vector<int> fp_per_frame(frames, 0);
        for (int i = 0; i < want_fp; ++i) ++fp_per_frame[fp_frame(rng)];

        std::vector<TrackFrame> stream;
        for (int t = 0; t < frames; ++t) {
            TrackFrame frame;
            frame.frame_index = t;
            for (int g = 0; g < tracks; ++g) {
                const BoundingBox box(g * 200.0, 0.0, g * 200.0 + 150.0, 150.0);
                frame.ground_truths.push_back({g, box});
                if (switch_slots.count({g, t})) pred_id[g] = fresh++;
                if (!fn_slots.count({g, t})) {
                    frame.predictions.push_back({pred_id[g], box});
                }
            }
            for (int i = 0; i < fp_per_frame[t]; ++i) {
                frame.predictions.push_back(
                    {fresh++, BoundingBox(10000.0 + i * 300.0, 0.0, 10150.0 + i * 300.0, 150.0)});
            }
            stream.push_back(std::move(frame));
        }

        const auto report = evaluate_tracking(stream, 0.5);
        const auto label = "config " + std::to_string(config);
        check.require(report.false_negatives == static_cast<std::size_t>(want_fn),
                      label + ": fn " + std::to_string(report.false_negatives) + " != " +
                          std::to_string(want_fn));
        check.require(report.false_positives == static_cast<std::size_t>(want_fp),
                      label + ": fp " + std::to_string(report.false_positives) + " != " +
                          std::to_string(want_fp));
        check.require(report.mismatches == static_cast<std::size_t>(want_switch),
                      label + ": mismatches " + std::to_string(report.mismatches) + " != " +
                          std::to_string(want_switch));
        const std::size_t gt_total = static_cast<std::size_t>(tracks) * frames;
        check.require(report.gt_count == gt_total, label + ": gt count");
        check.require(report.mota == mota_from_counts(gt_total, want_fp, want_fn, want_switch),
                      label + ": mota formula");
    }
}

// ---------------------------------------------------------------------------
// criterion 8: box file round-trip identity over 1000 random files

void criterion_round_trip(Checker& check) {
    std::mt19937_64 rng(88);
    std::uniform_int_distribution<int> dim(320, 4000);
    std::uniform_int_distribution<int> count(0, 80);
    std::uniform_int_distribution<int> cls(0, 1);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    std::uniform_real_distribution<double> s(0.002, 0.08);
    std::uniform_real_distribution<double> conf(0.0, 1.0);

    for (int file = 0; file < 1000; ++file) {
        const int width = dim(rng), height = dim(rng);
        std::vector<Detection> dets;
        for (int i = 0, n = count(rng); i < n; ++i) {
            const double cx = u(rng) * width, cy = u(rng) * height;
            const double w = s(rng) * width, h = s(rng) * height;
            dets.push_back(Detection{static_cast<ClassId>(cls(rng)),
                                     BoundingBox(cx - w / 2, cy - h / 2, cx + w / 2, cy + h / 2),
                                     conf(rng)});
        }
        const auto parsed =
            parse_detections(emit_detections(dets, width, height), width, height);
        bool ok = parsed.size() == dets.size();
        for (std::size_t i = 0; ok && i < dets.size(); ++i) {
            ok &= parsed[i].cls == dets[i].cls;
            ok &= std::abs(parsed[i].confidence - dets[i].confidence) <= 1e-6;
            ok &= std::abs(parsed[i].box.x_min() - dets[i].box.x_min()) <= 2e-6 * width;
            ok &= std::abs(parsed[i].box.x_max() - dets[i].box.x_max()) <= 2e-6 * width;
            ok &= std::abs(parsed[i].box.y_min() - dets[i].box.y_min()) <= 2e-6 * height;
            ok &= std::abs(parsed[i].box.y_max() - dets[i].box.y_max()) <= 2e-6 * height;
        }
        check.require(ok, "round trip broke at file " + std::to_string(file));
        if (!ok) return;
    }
}

struct Criterion {
    int id;
    const char* name;
    double time_limit_s;
    std::function<void(Checker&)> run;
};

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: %s <path-to-cli>\n", argv[0]);
        return 2;
    }
    g_cli = argv[1];

    const std::vector<Criterion> criteria = {
        {1, "picked-visual ratio tables reproduce (15 rows + 12 summary values)", 1.0,
         criterion_pvr},
        {2, "MOTA reproduces from aggregate counts", 1.0, criterion_mota},
        {3, "yield formula scaling properties over 1000 random inputs", 30.0, criterion_yield},
        {4, "tiling identities across the 100..5000 dimension lattice", 10.0, criterion_tiling},
        {5, "greedy matching bounded by the exhaustive oracle on 500 instances", 30.0,
         criterion_matching_oracle},
        {6, "synthetic field end-to-end yield is exact and reruns are byte-identical", 5.0,
         criterion_end_to_end},
        {7, "tracking synthesis reproduces injected error counts exactly", 30.0,
         criterion_tracking_synthesis},
        {8, "box file parse/emit identity over 1000 random files", 30.0, criterion_round_trip},
    };

    int failed = 0;
    for (const auto& criterion : criteria) {
        Checker check;
        const auto start = std::chrono::steady_clock::now();
        try {
            criterion.run(check);
        } catch (const std::exception& e) {
            check.require(false, std::string("exception: ") + e.what());
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        check.require(elapsed < criterion.time_limit_s,
                      "runtime " + std::to_string(elapsed) + "s exceeds " +
                          std::to_string(criterion.time_limit_s) + "s");

        const bool ok = check.failures.empty();
        std::printf("[%s] criterion %d: %s (%zu checks, %.2fs)\n", ok ? "PASS" : "FAIL",
                    criterion.id, criterion.name, check.checks, elapsed);
        for (const auto& failure : check.failures) {
            std::printf("       %s\n", failure.c_str());
        }
        failed += ok ? 0 : 1;
    }

    if (failed > 0) {
        std::printf("%d criterion(s) failed\n", failed);
        return 1;
    }
    std::printf("all %zu criteria passed\n", criteria.size());
    return 0;
}
