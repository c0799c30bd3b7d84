// Copyright 2026 The Clearance Authors
// SPDX-License-Identifier: Apache-2.0
//
// Deterministic synthetic street scenes with ground truth.
//
// A scene is a set of noise-free world surface samples (road ribbon, tree
// trunks and crowns, optional overhanging branches, clutter). A vehicle
// drives along the road centerline; frame k observes every world point
// within sensor range, adds isotropic Gaussian ranging noise and stores it
// in sensor coordinates. Ground truth is evaluated per observation against
// the analytic road ribbon and road surface, never against pipeline output.

#ifndef CLEARANCE_SYNTH_HPP_
#define CLEARANCE_SYNTH_HPP_

#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "clearance/ingest.hpp"

namespace clearance {

enum class RoadPattern : std::uint8_t { Random, Grid };

struct RoadSpec
{
    std::vector<Vec2> centerline{Vec2(0.0, 0.0), Vec2(100.0, 0.0)};
    double width{8.0};
    double density{4.0}; // points per m^2, Random pattern
    RoadPattern pattern{RoadPattern::Random};
    double grid_spacing{0.5}; // Grid pattern
    double grade{0.0};        // rise per meter of centerline
};

struct TreeSpec
{
    Vec2 trunk{Vec2::Zero()};
    Point3 crown_center{Point3::Zero()};
    double crown_radius{1.5};
    double crown_density{20.0}; // points per m^2 of trunk and crown surface
    bool overhang{false};       // plants a branch reaching over the road
};

struct CameraSetup
{
    bool enabled{true};
    int width{320};
    int height{240};
    double horizontal_fov_deg{56.0};
};

struct SceneSpec
{
    std::string sequence_id{"synthetic"};
    RoadSpec road;
    std::vector<TreeSpec> trees;
    std::size_t clutter_points{0};

    std::size_t branch_points{50};
    double branch_min_height{2.5};
    double branch_max_height{3.5};
    double branch_half_length{1.5}; // along the road, around the trunk
    double branch_edge_inset{1.0};  // branch stays this far inside the road edge

    std::size_t frame_count{1};
    double start_offset{0.0}; // centerline arc length of frame 0
    double frame_advance{1.0};
    double sensor_height{1.8};
    double sensor_range{std::numeric_limits<double>::infinity()};
    double noise_sigma{0.02};

    double band_width{0.0}; // 0: grid spacing, or 1/sqrt(density)
    double truth_clearance_height{4.0};
    double truth_ground_slack{0.2};

    CameraSetup cameras;
    std::uint64_t seed{1};

    void validate() const;
    double effective_band_width() const;
};

/// Analytic road geometry: the set of points within width/2 of the
/// centerline polyline, cut square at both ends.
class RoadRibbon
{
  public:
    explicit RoadRibbon(const RoadSpec& spec);

    struct Projection
    {
        double arc_length;   // along the centerline, clamped to [0, length]
        double distance;     // to the centerline
        double signed_lateral; // positive to the left of travel
        bool before_start;
        bool after_end;
    };

    double length() const noexcept { return total_length_; }
    Projection project(const Vec2& q) const;
    bool contains(const Vec2& q) const;
    /// Distance to the nearest ribbon edge for points inside.
    double edge_distance(const Vec2& q) const;
    double ground_at_arc(double s) const { return spec_.grade * s; }
    double ground(const Vec2& q) const { return ground_at_arc(project(q).arc_length); }
    Vec2 at(double s, double lateral) const;
    double heading(double s) const;

  private:
    std::size_t segment_at(double s) const;

    RoadSpec spec_;
    std::vector<double> cumulative_;
    double total_length_{0.0};
};

struct FrameTruth
{
    std::size_t frame_index{0};
    std::vector<std::size_t> world_index;        // per row
    std::vector<std::size_t> inlier_rows;        // vegetation rows inside the true gauge
    std::vector<std::size_t> boundary_band_rows; // road rows near the true edge
};

struct GroundTruth
{
    std::vector<Point3> world_points;
    std::vector<SemanticClass> world_classes;
    std::vector<std::size_t> planted_branch; // world indices
    std::vector<std::size_t> world_inliers;  // noise-free world points inside the gauge
    std::vector<FrameTruth> frames;
    double band_width{0.0};
};

struct SyntheticScene
{
    Sequence sequence;
    GroundTruth truth;
    LabelMap label_map;
};

/// Source label ids used by generated scenes.
inline constexpr int kSynthRoadLabel = 7;
inline constexpr int kSynthVegetationLabel = 5;
inline constexpr int kSynthOtherLabel = 1;
LabelMap synth_label_map();

SyntheticScene generate_scene(const SceneSpec& spec);

std::string ground_truth_to_json(const GroundTruth& truth, const SceneSpec& spec);

/// Writes the sequence layout plus ground_truth.json; with `images`, flat
/// grey PNGs for every camera and frame.
void write_scene(const std::filesystem::path& root, const SyntheticScene& scene, const SceneSpec& spec,
                 bool images = false);

/// 100 m straight road, one tree with a 50-point branch at 2.5-3.5 m over
/// the road, crowns at 6-9 m, 80 frames.
SceneSpec branch_scene_spec(std::uint64_t seed = 7);
/// 100 x 10 m road sampled on a 0.5 m grid, sigma 0.02 m, single frame.
SceneSpec grid_strip_spec(std::uint64_t seed = 11);
/// 100 x 10 m road with uniformly random points, single frame.
SceneSpec noisy_strip_spec(std::uint64_t seed = 13);

} // namespace clearance

#endif // CLEARANCE_SYNTH_HPP_
