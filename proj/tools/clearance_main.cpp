// Copyright 2026 The Clearance Authors
// SPDX-License-Identifier: Apache-2.0
//
// clearance: runs the clearance analysis on one sequence, or a sweep over
// one parameter.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "clearance/pipeline.hpp"

namespace {

std::vector<double> parse_values(const std::string& list)
{
    std::vector<double> values;
    std::size_t begin = 0;
    while (begin <= list.size())
    {
        const std::size_t end = std::min(list.find(',', begin), list.size());
        const std::string item = list.substr(begin, end - begin);
        if (!item.empty())
        {
            std::size_t used = 0;
            const double v = std::stod(item, &used);
            if (used != item.size())
                throw std::invalid_argument("bad sweep value '" + item + "'");
            values.push_back(v);
        }
        begin = end + 1;
    }
    return values;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Vegetation clearance analysis for labeled LiDAR sequences"};

    std::string input, out, config;
    std::size_t step = 0, samples = 0;
    double radius = 0, threshold = 0, height = 0;
    unsigned threads = 0;
    std::vector<std::string> sweep;

    app.add_option("--config", config, "JSON config file; flags override its values")->check(CLI::ExistingFile);
    auto* o_input = app.add_option("--input", input, "Sequence root directory");
    auto* o_out = app.add_option("--out", out, "Output directory");
    auto* o_step = app.add_option("--step", step, "Concatenate every step-th frame (default 10)");
    auto* o_samples = app.add_option("--samples", samples, "Poisson sample count (default 1000)");
    auto* o_radius = app.add_option("--radius", radius, "Contour neighbor radius in m (default 6)");
    auto* o_threshold = app.add_option("--threshold", threshold, "Contour angle threshold in degrees (default 90)");
    auto* o_height = app.add_option("--height", height, "Clearance height in m (default 4)");
    auto* o_threads = app.add_option("--threads", threads, "Worker threads, 0 = logical CPUs");
    app.add_option("--sweep", sweep, "Sweep one parameter: <step|samples|radius|threshold> <v1,v2,...>")
        ->expected(2);

    CLI11_PARSE(app, argc, argv);

    try
    {
        clearance::PipelineConfig cfg;
        if (!config.empty())
            cfg = clearance::load_pipeline_config(config, cfg);
        if (o_input->count())
            cfg.input = input;
        if (o_out->count())
            cfg.output = out;
        if (o_step->count())
            cfg.concat.step = step;
        if (o_samples->count())
            cfg.sampling.target_count = samples;
        if (o_radius->count())
            cfg.contour.radius = radius;
        if (o_threshold->count())
            cfg.contour.angle_threshold = threshold;
        if (o_height->count())
            cfg.gauge.clearance_height = height;
        if (o_threads->count())
            cfg.threads = threads;

        if (cfg.input.empty() || cfg.output.empty())
        {
            std::fprintf(stderr, "error: --input and --out are required (directly or via --config)\n");
            return 2;
        }

        if (!sweep.empty())
        {
            const auto param = clearance::parse_sweep_parameter(sweep[0]);
            if (!param)
            {
                std::fprintf(stderr, "error: unknown sweep parameter '%s'\n", sweep[0].c_str());
                return 2;
            }
            const std::vector<double> values = parse_values(sweep[1]);
            const auto table = clearance::run_sweep(cfg, *param, values);
            std::size_t failed = 0;
            for (const auto& row : table.rows)
            {
                if (!row.report)
                {
                    ++failed;
                    std::fprintf(stderr, "%s=%g failed: %s\n", sweep[0].c_str(), row.value, row.error.c_str());
                }
            }
            std::printf("wrote %s (%zu rows, %zu failed)\n", (cfg.output / "sweep.csv").c_str(), table.rows.size(),
                        failed);
            return failed == 0 ? 0 : 1;
        }

        const auto report = clearance::run_pipeline(cfg);
        std::printf("%s: %zu frames, %zu road points, %zu samples, %zu contour points, %zu/%zu vegetation inliers, "
                    "%zu pixel hits\n",
                    report.sequence_id.c_str(), report.frames_concatenated, report.road_points, report.samples,
                    report.contour_points, report.vegetation_inliers, report.vegetation_points, report.pixel_hits);
        for (const auto& w : report.warnings)
            std::fprintf(stderr, "warning: %s\n", w.c_str());
        return 0;
    }
    catch (const std::exception& e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
