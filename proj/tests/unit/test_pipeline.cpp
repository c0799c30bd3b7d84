// Copyright 2026 The Clearance Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>

#include "clearance/pipeline.hpp"
#include "clearance/synth.hpp"
#include "fixtures.hpp"

using namespace clearance;
namespace fs = std::filesystem;

namespace {

// Branch scene written once per test binary run.
const fs::path& branch_root()
{
    static const fs::path root = [] {
        const auto dir = fixtures::temp_dir("pipeline-branch");
        const auto spec = branch_scene_spec();
        write_scene(dir, generate_scene(spec), spec, true);
        return dir;
    }();
    return root;
}

std::size_t expected_inlier_rows(const SyntheticScene& scene, std::size_t step)
{
    std::size_t n = 0;
    for (const auto pos : select_frame_indices(scene.sequence.frames.size(), step))
        n += scene.truth.frames[pos].inlier_rows.size();
    return n;
}

std::vector<std::string> csv_lines(const std::string& text)
{
    std::vector<std::string> out;
    std::size_t b = 0;
    while (b < text.size())
    {
        const auto e = text.find('\n', b);
        out.push_back(text.substr(b, e - b));
        b = e + 1;
    }
    return out;
}

std::string csv_field(const std::string& line, std::size_t column)
{
    std::size_t b = 0;
    for (std::size_t c = 0; c < column; ++c)
        b = line.find(',', b) + 1;
    return line.substr(b, line.find(',', b) - b);
}

} // namespace

TEST(RunPipeline, BranchSceneMatchesTruth)
{
    PipelineConfig cfg;
    cfg.input = branch_root();
    cfg.output = fixtures::temp_dir("pipeline-out");
    const auto report = run_pipeline(cfg);

    const auto scene = generate_scene(branch_scene_spec());
    EXPECT_EQ(report.vegetation_inliers, expected_inlier_rows(scene, 10));
    EXPECT_EQ(report.frames_concatenated, 8u);
    EXPECT_EQ(report.samples, 1000u);
    EXPECT_TRUE(report.counts_consistent());
    EXPECT_GT(report.pixel_hits, 0u);

    EXPECT_TRUE(fs::exists(cfg.output / "report.json"));
    EXPECT_EQ(read_xyzl(cfg.output / "inliers.xyzl").points.size(), report.vegetation_inliers);
    std::size_t csvs = 0, pngs = 0;
    for (const auto& e : fs::directory_iterator(cfg.output / "annotations"))
        csvs += e.path().extension() == ".csv";
    for (const auto& e : fs::directory_iterator(cfg.output / "overlays"))
        pngs += e.path().extension() == ".png";
    EXPECT_EQ(csvs, 8u * 6u);
    EXPECT_EQ(pngs, 8u * 6u);
    for (const auto& e : fs::directory_iterator(cfg.output))
        EXPECT_NE(e.path().filename().string().rfind(".staging", 0), 0u) << e.path();
    for (const char* stage : {"load", "concatenate", "sampling", "contour_detection", "projection", "total"})
        EXPECT_GE(report.timing(stage), 0.0) << stage;
}

TEST(RunPipeline, NoRoadPoints)
{
    SceneSpec spec = branch_scene_spec();
    spec.frame_count = 2;
    auto scene = generate_scene(spec);
    for (auto& f : scene.sequence.frames)
    {
        std::vector<SemanticClass> cls(f.cloud.size(), SemanticClass::Vegetation);
        f.cloud = LabeledPointCloud(f.cloud.points(), cls, f.cloud.frame_id(), f.cloud.frame());
    }
    const auto in = fixtures::temp_dir("pipeline-noroad");
    write_sequence(in, scene.sequence, scene.label_map);

    PipelineConfig cfg;
    cfg.input = in;
    cfg.output = fs::temp_directory_path() / "clearance-test-pipeline-noroad-out";
    fs::remove_all(cfg.output);
    try
    {
        run_pipeline(cfg);
        FAIL() << "expected PipelineError";
    }
    catch (const PipelineError& e)
    {
        EXPECT_EQ(e.stage(), "filter_road");
        EXPECT_NE(std::string(e.what()).find("no road points after filtering"), std::string::npos) << e.what();
    }
    EXPECT_FALSE(fs::exists(cfg.output));
}

TEST(RunPipeline, FailureKeepsPreexistingOutputOnly)
{
    PipelineConfig cfg;
    cfg.input = branch_root();
    cfg.output = fixtures::temp_dir("pipeline-fail");
    fixtures::spit(cfg.output / "keep.txt", "x");
    cfg.contour.radius = 0.01; // every sample isolated, no polygon
    try
    {
        run_pipeline(cfg);
        FAIL() << "expected PipelineError";
    }
    catch (const PipelineError& e)
    {
        EXPECT_EQ(e.stage(), "polygon");
    }
    std::vector<fs::path> left;
    for (const auto& e : fs::recursive_directory_iterator(cfg.output))
        left.push_back(e.path().filename());
    EXPECT_EQ(left, (std::vector<fs::path>{"keep.txt"}));
}

TEST(RunPipeline, MissingInputIsLoadStage)
{
    PipelineConfig cfg;
    cfg.input = fs::temp_directory_path() / "clearance-test-nothing-here";
    cfg.output = fs::temp_directory_path() / "clearance-test-nothing-out";
    try
    {
        run_pipeline(cfg);
        FAIL();
    }
    catch (const PipelineError& e)
    {
        EXPECT_EQ(e.stage(), "load");
    }
}

TEST(AnalyzeSequence, ThreadCountsAgree)
{
    const auto seq = load_sequence(branch_root());
    PipelineConfig one, eight;
    one.threads = 1;
    eight.threads = 8;
    const auto a = analyze_sequence(seq, one);
    const auto b = analyze_sequence(seq, eight);
    EXPECT_EQ(a.report.total_points, b.report.total_points);
    EXPECT_EQ(a.report.road_points_after_outliers, b.report.road_points_after_outliers);
    EXPECT_EQ(a.samples.points(), b.samples.points());
    EXPECT_EQ(a.contours.points(), b.contours.points());
    EXPECT_EQ(a.inliers.points(), b.inliers.points());
    EXPECT_EQ(a.hits, b.hits);
}

TEST(AnalyzeSequence, ExplicitAndNoAnnotation)
{
    const auto seq = load_sequence(branch_root());
    PipelineConfig cfg;
    cfg.annotate = AnnotationPolicy::None;
    EXPECT_TRUE(analyze_sequence(seq, cfg).hits.empty());
    cfg.annotate = AnnotationPolicy::ExplicitFrames;
    cfg.annotate_frames = {40, 41};
    const auto r = analyze_sequence(seq, cfg);
    EXPECT_EQ(r.annotated_frames, (std::vector<std::size_t>{40, 41}));
    for (const auto& h : r.hits)
        EXPECT_TRUE(h.frame_index == 40 || h.frame_index == 41);
}

TEST(RunSweep, StepFrameCounts)
{
    const auto seq = load_sequence(branch_root());
    PipelineConfig cfg;
    cfg.annotate = AnnotationPolicy::None;
    const std::vector<double> steps{1, 5, 10, 20, 40};
    const auto table = run_sweep(seq, cfg, SweepParameter::Step, steps);
    ASSERT_EQ(table.rows.size(), 5u);
    const std::size_t expected[] = {80, 16, 8, 4, 2};
    for (std::size_t i = 0; i < 5; ++i)
    {
        ASSERT_TRUE(table.rows[i].report.has_value()) << table.rows[i].error;
        EXPECT_EQ(table.rows[i].report->frames_concatenated, expected[i]);
    }
    const auto lines = csv_lines(sweep_to_csv(table));
    ASSERT_EQ(lines.size(), 6u);
    EXPECT_EQ(csv_field(lines[0], 2), "frames");
    for (std::size_t i = 0; i < 5; ++i)
        EXPECT_EQ(csv_field(lines[i + 1], 2), std::to_string(expected[i]));
}

TEST(RunSweep, ThresholdCountsDecrease)
{
    const auto seq = load_sequence(branch_root());
    PipelineConfig cfg;
    cfg.annotate = AnnotationPolicy::None;
    const std::vector<double> thresholds{60, 90, 120, 150};
    const auto table = run_sweep(seq, cfg, SweepParameter::Threshold, thresholds);
    for (std::size_t i = 1; i < table.rows.size(); ++i)
    {
        ASSERT_TRUE(table.rows[i].report && table.rows[i - 1].report);
        EXPECT_LT(table.rows[i].report->contour_points, table.rows[i - 1].report->contour_points);
    }
}

TEST(RunSweep, EmptyValuesAndBadValues)
{
    const auto seq = load_sequence(branch_root());
    PipelineConfig cfg;
    cfg.annotate = AnnotationPolicy::None;
    const auto empty = run_sweep(seq, cfg, SweepParameter::Radius, std::vector<double>{});
    EXPECT_TRUE(empty.rows.empty());
    const auto lines = csv_lines(sweep_to_csv(empty));
    ASSERT_EQ(lines.size(), 1u);
    EXPECT_EQ(lines[0].rfind("parameter,value,frames,", 0), 0u);

    const std::vector<double> values{-1.0, 6.0};
    const auto table = run_sweep(seq, cfg, SweepParameter::Radius, values);
    ASSERT_EQ(table.rows.size(), 2u);
    EXPECT_FALSE(table.rows[0].report.has_value());
    EXPECT_NE(table.rows[0].error.find("radius"), std::string::npos);
    EXPECT_TRUE(table.rows[1].report.has_value());

    const std::vector<double> bad_step{2.5};
    EXPECT_FALSE(run_sweep(seq, cfg, SweepParameter::Step, bad_step).rows[0].report.has_value());
}

TEST(RunSweep, RowsIndependentOfOrder)
{
    const auto seq = load_sequence(branch_root());
    PipelineConfig cfg;
    cfg.annotate = AnnotationPolicy::None;
    const std::vector<double> a{6.0, 3.0}, b{3.0, 6.0};
    const auto ta = run_sweep(seq, cfg, SweepParameter::Radius, a);
    const auto tb = run_sweep(seq, cfg, SweepParameter::Radius, b);
    EXPECT_EQ(ta.rows[0].report->contour_points, tb.rows[1].report->contour_points);
    EXPECT_EQ(ta.rows[1].report->contour_points, tb.rows[0].report->contour_points);
    EXPECT_EQ(ta.rows[0].report->inliers, tb.rows[1].report->inliers);
}

TEST(RunSweep, WritesCsvFile)
{
    PipelineConfig cfg;
    cfg.input = branch_root();
    cfg.output = fixtures::temp_dir("sweep-out");
    cfg.annotate = AnnotationPolicy::None;
    const std::vector<double> values{800, 1000};
    run_sweep(cfg, SweepParameter::Samples, values);
    const auto lines = csv_lines(fixtures::slurp(cfg.output / "sweep.csv"));
    ASSERT_EQ(lines.size(), 3u);
    EXPECT_EQ(csv_field(lines[1], 6), "800");
    EXPECT_EQ(csv_field(lines[2], 6), "1000");
}

TEST(SweepParameter, Names)
{
    for (auto p : {SweepParameter::Step, SweepParameter::Samples, SweepParameter::Radius, SweepParameter::Threshold})
        EXPECT_EQ(parse_sweep_parameter(to_string(p)), p);
    EXPECT_FALSE(parse_sweep_parameter("height").has_value());
}

TEST(PipelineConfig, DefaultsAndJson)
{
    const PipelineConfig d;
    EXPECT_EQ(d.concat.step, 10u);
    EXPECT_EQ(d.sampling.target_count, 1000u);
    EXPECT_EQ(d.contour.radius, 6.0);
    EXPECT_EQ(d.contour.angle_threshold, 90.0);
    EXPECT_EQ(d.gauge.clearance_height, 4.0);
    EXPECT_EQ(d.threads, 0u);

    const auto dir = fixtures::temp_dir("config");
    fixtures::spit(dir / "c.json",
                   R"({"input": "in", "out": "out", "step": 5, "samples": 500, "radius": 4.5,
                       "threshold": 120, "height": 3, "threads": 2, "annotate": [1, 2]})");
    const auto cfg = load_pipeline_config(dir / "c.json");
    EXPECT_EQ(cfg.input, "in");
    EXPECT_EQ(cfg.output, "out");
    EXPECT_EQ(cfg.concat.step, 5u);
    EXPECT_EQ(cfg.sampling.target_count, 500u);
    EXPECT_EQ(cfg.contour.radius, 4.5);
    EXPECT_EQ(cfg.contour.angle_threshold, 120.0);
    EXPECT_EQ(cfg.gauge.clearance_height, 3.0);
    EXPECT_EQ(cfg.threads, 2u);
    EXPECT_EQ(cfg.annotate, AnnotationPolicy::ExplicitFrames);
    EXPECT_EQ(cfg.annotate_frames, (std::vector<std::size_t>{1, 2}));

    fixtures::spit(dir / "bad.json", R"({"step": "ten"})");
    EXPECT_THROW(load_pipeline_config(dir / "bad.json"), PipelineError);
}
