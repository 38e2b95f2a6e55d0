// End-to-end tests of the command-line tool: exit statuses per failure class
// and help-text snapshots. The binary path comes from BLUEBERRY_CLI; help
// goldens live in the directory named by BLUEBERRY_HELP_GOLDEN.

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <set>
#include <sstream>

#include "blueberry/report.hpp"
#include "blueberry/tracking_eval.hpp"
#include "test_util.hpp"

using namespace blueberry;
using blueberry::testing::TempDir;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output;
};

CliResult run_cli(const std::string& args) {
    const char* cli = std::getenv("BLUEBERRY_CLI");
    REQUIRE_MESSAGE(cli != nullptr, "BLUEBERRY_CLI must point at the binary");
    CliResult result;
    const std::string cmd = std::string(cli) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) {
        result.output.append(buf, n);
    }
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

void write_minimal_dataset(const TempDir& dir, bool break_one_detection_file = false) {
    std::string images;
    for (int i = 0; i < 3; ++i) {
        const std::string id = "img" + std::to_string(i);
        write_text_file(dir / (id + ".txt"), "0 0.5 0.5 0.2 0.2\n");
        if (!(break_one_detection_file && i == 1)) {
            write_text_file(dir / (id + ".det.txt"), "0 0.5 0.5 0.2 0.2 0.9\n");
        }
        write_text_file(dir / (id + ".bush.txt"), "0 0.5 0.5 0.8 0.8 0.9\n");
        images += std::string(i ? "," : "") + R"({"id": ")" + id +
                  R"(", "width": 1000, "height": 1000, "annotations_path": ")" + id +
                  R"(.txt", "detections_path": ")" + id + R"(.det.txt", "bush_boxes_path": ")" +
                  id + R"(.bush.txt", "picked_gt": 100})";
    }
    write_text_file(dir / "manifest.json",
                    R"({"name": "mini", "class_names": ["green", "blue"], "images": [)" +
                        images + "]}");
}

const char* kFieldJson = R"({
  "name": "cli-field",
  "corners": [
    {"lat": 39.7000, "lon": -74.8000},
    {"lat": 39.7000, "lon": -74.7988},
    {"lat": 39.7008, "lon": -74.7988},
    {"lat": 39.7008, "lon": -74.8000}
  ],
  "row_direction_deg": 90.0,
  "area_acres": 2.0,
  "bush_count": 900
})";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("eval on a valid manifest exits 0 and writes reports") {
    TempDir dir("cli_eval");
    write_minimal_dataset(dir);
    const auto run = run_cli("eval --manifest " + (dir / "manifest.json").string() + " --out " +
                             (dir / "run").string());
    CHECK(run.exit_code == 0);
    CHECK(std::filesystem::exists(dir / "run" / "evaluation.csv"));
    CHECK(std::filesystem::exists(dir / "run" / "run.json"));
    CHECK(run.output.find("precision") != std::string::npos);
}

TEST_CASE("a broken image yields exit 1 and a skip note") {
    TempDir dir("cli_partial");
    write_minimal_dataset(dir, true);
    const auto run = run_cli("eval --manifest " + (dir / "manifest.json").string() + " --out " +
                             (dir / "run").string());
    CHECK(run.exit_code == 1);
    CHECK(run.output.find("skipped img1") != std::string::npos);
}

TEST_CASE("crop-eval writes the ratio report when picked counts exist") {
    TempDir dir("cli_crop");
    write_minimal_dataset(dir);
    const auto run = run_cli("crop-eval --manifest " + (dir / "manifest.json").string() +
                             " --out " + (dir / "run").string() + " --format json");
    CHECK(run.exit_code == 0);
    CHECK(std::filesystem::exists(dir / "run" / "pvr.json"));
    CHECK(std::filesystem::exists(dir / "run" / "crop_rects.json"));
    CHECK(run.output.find("pvr:") != std::string::npos);
}

TEST_CASE("plan produces one waypoint per cell, on row edges for row strategy") {
    TempDir dir("cli_plan");
    write_text_file(dir / "field.json", kFieldJson);
    const auto run = run_cli("plan --field " + (dir / "field.json").string() +
                             " --grid 3x4 --strategy row --seed 7 --out " +
                             (dir / "plan.csv").string());
    CHECK(run.exit_code == 0);
    CHECK(run.output.find("12 waypoint(s)") != std::string::npos);

    // rows run east-west here, so the row frame coincides with east-north:
    // row-edge waypoints share exactly one x per grid column of cells
    const std::string text = read_text_file(dir / "plan.csv");
    std::set<std::string> xs;
    std::istringstream lines(text);
    std::string line;
    bool past_header = false;
    while (std::getline(lines, line)) {
        if (line.rfind("cell_m", 0) == 0) {
            past_header = true;
            continue;
        }
        if (!past_header || line.empty() || line[0] == '#') continue;
        std::istringstream fields(line);
        std::string cell_m, cell_n, x;
        std::getline(fields, cell_m, ',');
        std::getline(fields, cell_n, ',');
        std::getline(fields, x, ',');
        xs.insert(x);
    }
    CHECK(xs.size() == 3);
}

TEST_CASE("equal seeds give identical plan files") {
    TempDir dir("cli_plan_seed");
    write_text_file(dir / "field.json", kFieldJson);
    const std::string base = "plan --field " + (dir / "field.json").string() +
                             " --grid 2x2 --strategy point --seed 99 --out ";
    CHECK(run_cli(base + (dir / "a.csv").string()).exit_code == 0);
    CHECK(run_cli(base + (dir / "b.csv").string()).exit_code == 0);
    CHECK(read_text_file(dir / "a.csv") == read_text_file(dir / "b.csv"));
}

TEST_CASE("mota consumes frame files") {
    TempDir dir("cli_mota");
    std::vector<TrackFrame> frames;
    for (int i = 0; i < 10; ++i) {
        TrackFrame f;
        f.frame_index = i;
        f.ground_truths = {{1, BoundingBox(0, 0, 100, 100)}};
        f.predictions = {{7, BoundingBox(0, 0, 100, 100)}};
        frames.push_back(f);
    }
    write_text_file(dir / "v.frames", emit_track_frames(frames));
    const auto run = run_cli("mota --frames " + (dir / "v.frames").string() + " --iou 0.5");
    CHECK(run.exit_code == 0);
    CHECK(run.output.find("MOTA 1.0000") != std::string::npos);
}

TEST_CASE("tile emits plans and skips too-small training images") {
    TempDir dir("cli_tile");
    const auto infer = run_cli("tile --width 1340 --height 700 --out " + dir.path().string());
    CHECK(infer.exit_code == 0);
    CHECK(std::filesystem::exists(dir / "image.tiles.csv"));

    const auto train =
        run_cli("tile --width 500 --height 500 --mode train --out " + dir.path().string());
    CHECK(train.exit_code == 1);
    CHECK(train.output.find("smaller than the tile") != std::string::npos);
}

TEST_CASE("yield and pvr read counts files") {
    TempDir dir("cli_yield");
    write_text_file(dir / "counts.txt", "# one-side counts\n100\n200\n");
    const auto y = run_cli("yield --counts " + (dir / "counts.txt").string() +
                           " --alpha 2 --bushes 10 --area 0.5");
    CHECK(y.exit_code == 0);
    CHECK(y.output.find("berries_per_bush 300") != std::string::npos);
    CHECK(y.output.find("yield_per_acre 12000") != std::string::npos);

    write_text_file(dir / "pvr.txt", "A1 882 1010 3312\n");
    const auto p = run_cli("pvr --counts " + (dir / "pvr.txt").string());
    CHECK(p.exit_code == 0);
    CHECK(p.output.find("alpha_predicted 3.755") != std::string::npos);
}

TEST_CASE("usage errors exit 2 with a one-line diagnostic") {
    CHECK(run_cli("eval --no-such-flag").exit_code == 2);
    CHECK(run_cli("frobnicate").exit_code == 2);
    CHECK(run_cli("plan --grid 2x2 --out x.csv").exit_code == 2);  // missing --field

    TempDir dir("cli_errs");
    const auto missing = run_cli("eval --manifest " + (dir / "absent.json").string() +
                                 " --out " + (dir / "r").string());
    CHECK(missing.exit_code == 2);
    CHECK(missing.output.find("absent.json") != std::string::npos);

    write_text_file(dir / "counts.txt", "10\n");
    CHECK(run_cli("yield --counts " + (dir / "counts.txt").string() +
                  " --alpha -1 --bushes 10 --area 1")
              .exit_code == 2);
    CHECK(run_cli("mota --gt 0 --fp 1 --fn 1 --idsw 0").exit_code == 2);
    CHECK(run_cli("mota").exit_code == 2);
}

TEST_CASE("help snapshots document every flag") {
    const char* golden_dir = std::getenv("BLUEBERRY_HELP_GOLDEN");
    REQUIRE_MESSAGE(golden_dir != nullptr, "BLUEBERRY_HELP_GOLDEN must be set");
    for (const std::string sub :
         {"tile", "eval", "crop-eval", "mota", "plan", "yield", "pvr"}) {
        CAPTURE(sub);
        const auto run = run_cli(sub + " --help");
        CHECK(run.exit_code == 0);
        const auto golden_path = std::filesystem::path(golden_dir) / (sub + ".txt");
        REQUIRE_MESSAGE(std::filesystem::exists(golden_path),
                        "missing golden file " << golden_path.string());
        CHECK(run.output == read_text_file(golden_path));
    }
    const auto top = run_cli("--help");
    for (const char* sub : {"tile", "eval", "crop-eval", "mota", "plan", "yield", "pvr"}) {
        CHECK(top.output.find(sub) != std::string::npos);
    }
}

}  // TEST_SUITE
