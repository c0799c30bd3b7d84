// Copyright 2026 The Clearance Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>

#include "clearance/synth.hpp"
#include "fixtures.hpp"

using namespace clearance;
namespace fs = std::filesystem;

namespace {

SceneSpec small_spec()
{
    SceneSpec spec = branch_scene_spec();
    spec.frame_count = 3;
    spec.clutter_points = 50;
    return spec;
}

} // namespace

TEST(GenerateScene, NoTreesNoInliers)
{
    SceneSpec spec = small_spec();
    spec.trees.clear();
    const auto scene = generate_scene(spec);
    EXPECT_TRUE(scene.truth.world_inliers.empty());
    EXPECT_TRUE(scene.truth.planted_branch.empty());
    for (const auto& f : scene.truth.frames)
        EXPECT_TRUE(f.inlier_rows.empty());
}

TEST(GenerateScene, BranchIsTheWholeTruth)
{
    const auto spec = branch_scene_spec();
    const auto scene = generate_scene(spec);
    const auto& t = scene.truth;
    ASSERT_EQ(t.planted_branch.size(), 50u);
    EXPECT_EQ(t.world_inliers, t.planted_branch);

    // brute force against the straight 100 x 8 m road on flat ground
    std::vector<std::size_t> expected;
    for (std::size_t i = 0; i < t.world_points.size(); ++i)
    {
        const Point3& p = t.world_points[i];
        const bool on_road = p.x() >= 0 && p.x() <= 100 && std::abs(p.y()) <= 4.0;
        if (t.world_classes[i] == SemanticClass::Vegetation && on_road && p.z() >= -0.2 && p.z() <= 4.0)
            expected.push_back(i);
    }
    EXPECT_EQ(t.world_inliers, expected);
    for (const auto i : t.planted_branch)
    {
        EXPECT_GE(t.world_points[i].z(), 2.5);
        EXPECT_LE(t.world_points[i].z(), 3.5);
    }
}

TEST(GenerateScene, LabelsMatchGeometry)
{
    const auto spec = small_spec();
    const auto scene = generate_scene(spec);
    const RoadRibbon ribbon(spec.road);
    const auto& t = scene.truth;
    std::size_t road = 0;
    for (std::size_t i = 0; i < t.world_points.size(); ++i)
    {
        const Vec2 xy = planar(t.world_points[i]);
        if (t.world_classes[i] == SemanticClass::Road)
        {
            ++road;
            EXPECT_TRUE(ribbon.contains(xy));
            EXPECT_EQ(t.world_points[i].z(), 0.0);
        }
        if (t.world_classes[i] == SemanticClass::Other)
            EXPECT_FALSE(ribbon.contains(xy));
    }
    EXPECT_GT(road, 0u);
}

TEST(GenerateScene, FramesObserveWithinRange)
{
    const auto spec = small_spec();
    const auto scene = generate_scene(spec);
    ASSERT_EQ(scene.sequence.frames.size(), 3u);
    for (std::size_t k = 0; k < 3; ++k)
    {
        const auto& frame = scene.sequence.frames[k];
        const auto& ft = scene.truth.frames[k];
        ASSERT_EQ(ft.world_index.size(), frame.cloud.size());
        const auto world = transform_to_world(frame.cloud, frame.pose);
        for (std::size_t r = 0; r < world.size(); ++r)
        {
            const Point3& truth = scene.truth.world_points[ft.world_index[r]];
            EXPECT_LT((world.points()[r] - truth).norm(), 0.2); // noise is 0.02 per axis
            EXPECT_EQ(world.classes()[r], scene.truth.world_classes[ft.world_index[r]]);
        }
    }
}

TEST(GenerateScene, GridStripBand)
{
    const auto spec = grid_strip_spec();
    const auto scene = generate_scene(spec);
    const auto& f = scene.truth.frames.at(0);
    // 200 x 20 lattice; the band holds the outer ring of lattice points
    EXPECT_EQ(scene.sequence.frames[0].cloud.size(), 4000u);
    EXPECT_EQ(f.boundary_band_rows.size(), 2u * 200 + 2u * 18);
}

TEST(WriteScene, SameSeedSameBytes)
{
    const auto spec = small_spec();
    const auto a = fixtures::temp_dir("synth-a");
    const auto b = fixtures::temp_dir("synth-b");
    write_scene(a, generate_scene(spec), spec, true);
    write_scene(b, generate_scene(spec), spec, true);
    std::size_t files = 0;
    for (const auto& e : fs::recursive_directory_iterator(a))
    {
        if (!e.is_regular_file())
            continue;
        ++files;
        const auto other = b / fs::relative(e.path(), a);
        ASSERT_TRUE(fs::exists(other)) << other;
        EXPECT_EQ(fixtures::slurp(e.path()), fixtures::slurp(other)) << e.path();
    }
    EXPECT_EQ(files, 2u + 3u + 3u * 6u); // meta, truth, frames, images

    SceneSpec other_seed = spec;
    other_seed.seed = spec.seed + 1;
    const auto c = fixtures::temp_dir("synth-c");
    write_scene(c, generate_scene(other_seed), other_seed);
    EXPECT_NE(fixtures::slurp(a / "frames" / "0.xyzl"), fixtures::slurp(c / "frames" / "0.xyzl"));
}

TEST(WriteScene, LoadsBack)
{
    const auto spec = small_spec();
    const auto scene = generate_scene(spec);
    const auto dir = fixtures::temp_dir("synth-load");
    write_scene(dir, scene, spec, true);
    const auto seq = load_sequence(dir);
    ASSERT_EQ(seq.frames.size(), 3u);
    EXPECT_EQ(seq.frames[2].cloud.points(), scene.sequence.frames[2].cloud.points());
    EXPECT_TRUE(seq.image_path("back", 1).has_value());
    EXPECT_FALSE(seq.image_path("back", 9).has_value());
}

TEST(SceneSpec, Validation)
{
    SceneSpec spec;
    spec.frame_count = 0;
    EXPECT_THROW(spec.validate(), std::invalid_argument);
    spec = SceneSpec{};
    spec.road.width = -1;
    EXPECT_THROW(spec.validate(), std::invalid_argument);
}
