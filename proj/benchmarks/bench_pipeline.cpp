// Copyright 2026 The Clearance Authors
// SPDX-License-Identifier: Apache-2.0
//
// Stage timings over the parameters the sweep harness varies. All inputs come
// from the synthetic branch scene.

#include <benchmark/benchmark.h>

#include "clearance/aggregate.hpp"
#include "clearance/contour.hpp"
#include "clearance/gauge.hpp"
#include "clearance/preprocess.hpp"
#include "clearance/synth.hpp"

using namespace clearance;

namespace {

const SyntheticScene& scene()
{
    static const SyntheticScene s = generate_scene(branch_scene_spec());
    return s;
}

const LabeledPointCloud& road_cloud()
{
    static const LabeledPointCloud road = remove_statistical_outliers(
        filter_class(concatenate(scene().sequence, ConcatConfig{}), SemanticClass::Road), OutlierConfig{});
    return road;
}

const LabeledPointCloud& samples()
{
    static const LabeledPointCloud s = poisson_downsample(road_cloud(), SamplingConfig{});
    return s;
}

void BM_Concatenate(benchmark::State& state)
{
    const ConcatConfig cfg{static_cast<std::size_t>(state.range(0))};
    const Sequence& seq = scene().sequence;
    std::size_t points = 0;
    for (auto _ : state)
    {
        const auto cloud = concatenate(seq, cfg);
        points = cloud.size();
        benchmark::DoNotOptimize(points);
    }
    state.counters["points"] = static_cast<double>(points);
}
BENCHMARK(BM_Concatenate)->Arg(1)->Arg(5)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_OutlierRemoval(benchmark::State& state)
{
    const auto road = filter_class(concatenate(scene().sequence, ConcatConfig{}), SemanticClass::Road);
    for (auto _ : state)
        benchmark::DoNotOptimize(statistical_inlier_rows(road, OutlierConfig{}));
    state.counters["points"] = static_cast<double>(road.size());
}
BENCHMARK(BM_OutlierRemoval)->Unit(benchmark::kMillisecond);

void BM_Sampling(benchmark::State& state)
{
    const SamplingConfig cfg{static_cast<std::size_t>(state.range(0))};
    const LabeledPointCloud& road = road_cloud();
    for (auto _ : state)
        benchmark::DoNotOptimize(sample_elimination_rows(road, cfg));
    state.counters["input"] = static_cast<double>(road.size());
}
BENCHMARK(BM_Sampling)->Arg(500)->Arg(1000)->Arg(2000)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_ContourRadius(benchmark::State& state)
{
    const ContourConfig cfg{static_cast<double>(state.range(0)), 90.0};
    const LabeledPointCloud& input = samples();
    std::size_t found = 0;
    for (auto _ : state)
    {
        found = contour_rows(input, cfg).size();
        benchmark::DoNotOptimize(found);
    }
    state.counters["contour_points"] = static_cast<double>(found);
}
BENCHMARK(BM_ContourRadius)->Arg(2)->Arg(4)->Arg(6)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_ContourThreshold(benchmark::State& state)
{
    const ContourConfig cfg{6.0, static_cast<double>(state.range(0))};
    const LabeledPointCloud& input = samples();
    std::size_t found = 0;
    for (auto _ : state)
    {
        found = contour_rows(input, cfg).size();
        benchmark::DoNotOptimize(found);
    }
    state.counters["contour_points"] = static_cast<double>(found);
}
BENCHMARK(BM_ContourThreshold)->Arg(60)->Arg(90)->Arg(120)->Arg(150)->Unit(benchmark::kMillisecond);

void BM_OrderAndClassify(benchmark::State& state)
{
    const auto contours = detect_contours(samples(), ContourConfig{});
    const auto vegetation =
        filter_class(concatenate(scene().sequence, ConcatConfig{}), SemanticClass::Vegetation);
    const PlanarIndex ground = build_index(samples());
    for (auto _ : state)
    {
        const auto polygon = order_contour(contours, GaugeConfig{});
        benchmark::DoNotOptimize(classify_vegetation_inliers(vegetation, polygon, ground, GaugeConfig{}));
    }
}
BENCHMARK(BM_OrderAndClassify)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
