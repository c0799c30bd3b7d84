// Copyright 2026 The Clearance Authors
// SPDX-License-Identifier: Apache-2.0
//
// clearance-synth: writes a synthetic sequence with ground truth.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "clearance/synth.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Generate a synthetic labeled sequence with ground truth"};

    std::string preset = "branch";
    std::string out;
    std::uint64_t seed = 0;
    std::size_t frames = 0;
    bool images = false;

    app.add_option("--preset", preset, "Scene preset")->check(CLI::IsMember({"branch", "grid", "strip"}));
    app.add_option("--out", out, "Output sequence root")->required();
    auto* o_seed = app.add_option("--seed", seed, "Random seed (preset default if omitted)");
    auto* o_frames = app.add_option("--frames", frames, "Frame count override")->check(CLI::PositiveNumber);
    app.add_flag("--images", images, "Also write flat grey camera images");

    CLI11_PARSE(app, argc, argv);

    try
    {
        clearance::SceneSpec spec;
        if (preset == "branch")
            spec = o_seed->count() ? clearance::branch_scene_spec(seed) : clearance::branch_scene_spec();
        else if (preset == "grid")
            spec = o_seed->count() ? clearance::grid_strip_spec(seed) : clearance::grid_strip_spec();
        else
            spec = o_seed->count() ? clearance::noisy_strip_spec(seed) : clearance::noisy_strip_spec();
        if (o_frames->count())
            spec.frame_count = frames;

        const auto scene = clearance::generate_scene(spec);
        clearance::write_scene(out, scene, spec, images);
        std::size_t rows = 0;
        for (const auto& f : scene.sequence.frames)
            rows += f.cloud.size();
        std::printf("wrote %s: %zu frames, %zu rows, %zu world points, %zu true inliers\n", out.c_str(),
                    scene.sequence.frames.size(), rows, scene.truth.world_points.size(),
                    scene.truth.world_inliers.size());
        return 0;
    }
    catch (const std::exception& e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
