// Copyright 2026 The Clearance Authors
// SPDX-License-Identifier: Apache-2.0
//
// Pinhole projection of world points into the per-frame camera images.

#ifndef CLEARANCE_PROJECT_HPP_
#define CLEARANCE_PROJECT_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "clearance/ingest.hpp"

namespace clearance {

struct PixelHit
{
    std::string camera_id;
    std::size_t frame_index{0};
    double u{0.0};
    double v{0.0};
    std::size_t point_index{0};

    friend bool operator==(const PixelHit&, const PixelHit&) = default;
};

inline constexpr int kMarkerRadius = 3;
inline constexpr std::array<std::uint8_t, 3> kMarkerColor{255, 0, 0};

/// Camera-frame coordinates of a world point for the given frame.
/// Throws CalibrationError when the camera has no pose for the frame.
Point3 world_to_camera(const CameraRig& camera, std::size_t frame_index, const Point3& p);

/// (u, v) of p, or nullopt when p is not strictly in front of the camera or
/// lands outside [0, width) x [0, height).
std::optional<Vec2> world_to_pixel(const CameraRig& camera, std::size_t frame_index, const Point3& p);

/// Visible hits for every requested frame (by frame index) and camera,
/// grouped by frame in request order, then camera in rig order, then point
/// index. Cameras without a pose for a frame contribute nothing.
std::vector<PixelHit> project_points(const Sequence& sequence, const LabeledPointCloud& points,
                                     std::span<const std::size_t> frame_indices);

struct OverlayManifest
{
    std::vector<std::filesystem::path> annotation_files;
    std::vector<std::filesystem::path> overlay_files;
};

std::string annotation_file_name(std::size_t frame_index, const std::string& camera_id);

/// Writes out_dir/annotations/<frame>_<camera>.csv for every camera and every
/// frame in `frame_indices` or in `hits` (header only when empty), and
/// out_dir/overlays/<frame>_<camera>.png when the source image exists.
OverlayManifest render_overlays(const Sequence& sequence, std::span<const PixelHit> hits,
                                std::span<const std::size_t> frame_indices, const std::filesystem::path& out_dir);

} // namespace clearance

#endif // CLEARANCE_PROJECT_HPP_
