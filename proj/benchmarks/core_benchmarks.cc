#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "blueberry/box_file.hpp"
#include "blueberry/detection_eval.hpp"
#include "blueberry/tiling.hpp"

using namespace blueberry;

namespace {

std::vector<Detection> random_detections(std::size_t count, double extent, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> pos(0.0, extent - 40.0);
    std::uniform_real_distribution<double> size(4.0, 30.0);
    std::uniform_real_distribution<double> conf(0.0, 1.0);
    std::uniform_int_distribution<int> cls(0, 1);
    std::vector<Detection> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double x = pos(rng), y = pos(rng);
        out.push_back(Detection{static_cast<ClassId>(cls(rng)),
                                BoundingBox(x, y, x + size(rng), y + size(rng)), conf(rng)});
    }
    return out;
}

void BM_Iou(benchmark::State& state) {
    const auto dets = random_detections(256, 1000.0, 1);
    std::size_t i = 0;
    for (auto _ : state) {
        const auto& a = dets[i % dets.size()];
        const auto& b = dets[(i * 7 + 3) % dets.size()];
        benchmark::DoNotOptimize(iou(a.box, b.box));
        ++i;
    }
}
BENCHMARK(BM_Iou);

void BM_Match(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const auto dets = random_detections(n, 2000.0, 2);
    std::vector<GroundTruth> gts;
    for (const auto& d : random_detections(n, 2000.0, 3)) {
        gts.push_back(GroundTruth{d.cls, d.box});
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(match(gts, dets));
    }
}
BENCHMARK(BM_Match)->Arg(100)->Arg(1000);

void BM_PlanInferenceTiles(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(plan_inference_tiles(4000, 3000));
    }
}
BENCHMARK(BM_PlanInferenceTiles);

void BM_MergeTileDetections(benchmark::State& state) {
    const auto plan = plan_inference_tiles(4000, 3000);
    const auto dets = random_detections(static_cast<std::size_t>(state.range(0)), 3900.0, 4);
    const auto per_tile = slice_detections(dets, plan);
    for (auto _ : state) {
        benchmark::DoNotOptimize(merge_tile_detections(per_tile, plan));
    }
}
BENCHMARK(BM_MergeTileDetections)->Arg(500)->Arg(2000);

void BM_ParseBoxFile(benchmark::State& state) {
    const auto dets = random_detections(1000, 3800.0, 5);
    const std::string text = emit_detections(dets, 4000, 4000);
    for (auto _ : state) {
        benchmark::DoNotOptimize(parse_detections(text, 4000, 4000));
    }
    state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ParseBoxFile);

}  // namespace

BENCHMARK_MAIN();
