// Copyright 2026 The Clearance Authors
// SPDX-License-Identifier: Apache-2.0
//
// On-disk sequence layout:
//
//   <root>/meta.json                     sequence metadata, label map, poses, cameras
//   <root>/frames/<index>.xyzl           one point per line: "x y z label_id"
//   <root>/images/<camera_id>/<index>.png  optional 8-bit RGB images
//
// meta.json:
//   {
//     "sequence_id": "...",
//     "frame_count": N,
//     "label_map": {"7": "road", "5": "vegetation", "1": "other"},
//     "lidar_poses": [{"frame": 0, "rotation": [w, x, y, z], "translation": [x, y, z]}, ...],
//     "cameras": [{"camera_id": "front", "fx": .., "fy": .., "cx": .., "cy": ..,
//                  "width": .., "height": .., "poses": [<pose>, ...]}, ...]
//   }
//
// Poses map sensor (or camera) coordinates to world coordinates. Camera
// frames are x right, y down, z along the optical axis; intrinsics describe
// rectified images (no distortion model).

#ifndef CLEARANCE_INGEST_HPP_
#define CLEARANCE_INGEST_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "clearance/types.hpp"
#include "clearance/xyzl.hpp"

namespace clearance {

/// Source label id -> pipeline class. Total over the ids present in input.
class LabelMap
{
  public:
    LabelMap() = default;
    explicit LabelMap(std::map<int, SemanticClass> entries) : entries_(std::move(entries)) {}

    void set(int id, SemanticClass c) { entries_[id] = c; }
    std::optional<SemanticClass> find(int id) const;
    /// Smallest source id mapped onto `c`, used when writing files.
    std::optional<int> id_for(SemanticClass c) const;
    const std::map<int, SemanticClass>& entries() const noexcept { return entries_; }
    bool empty() const noexcept { return entries_.empty(); }

  private:
    std::map<int, SemanticClass> entries_;
};

class UnmappedLabelError : public LoadError
{
  public:
    UnmappedLabelError(int id, std::size_t row, std::filesystem::path path = {});
    int label_id() const noexcept { return id_; }

  private:
    int id_;
};

/// Elementwise mapping. Throws UnmappedLabelError for the first unmapped id.
std::vector<SemanticClass> remap_labels(std::span<const int> raw_ids, const LabelMap& label_map);

struct CameraIntrinsics
{
    double fx{0};
    double fy{0};
    double cx{0};
    double cy{0};
};

struct CameraRig
{
    std::string camera_id;
    CameraIntrinsics intrinsics;
    int width{0};
    int height{0};
    std::map<std::size_t, FramePose> poses; // camera-to-world per frame index

    /// Throws CalibrationError when the frame has no pose.
    const FramePose& pose_at(std::size_t frame_index) const;
    /// Throws std::invalid_argument when intrinsics violate fx, fy > 0 and
    /// the principal point lying inside the image.
    void validate() const;
};

struct Frame
{
    LabeledPointCloud cloud; // sensor frame
    FramePose pose;          // sensor-to-world
};

struct Sequence
{
    std::string sequence_id;
    std::vector<Frame> frames; // strictly increasing frame index
    std::vector<CameraRig> cameras;
    LabelMap label_map;
    std::filesystem::path root; // empty for in-memory sequences

    std::size_t frame_index_at(std::size_t position) const { return frames.at(position).pose.frame_index; }
    /// Source image for (camera, frame) when present on disk.
    std::optional<std::filesystem::path> image_path(const std::string& camera_id, std::size_t frame_index) const;
};

struct LoadReport
{
    std::size_t frames_loaded{0};
    std::size_t rows_loaded{0};
    std::vector<std::size_t> rows_per_frame;
};

/// Label map as stored in `<root>/meta.json`.
LabelMap read_label_map(const std::filesystem::path& root);

/// Loads a sequence. Every frame file present must have a pose and the
/// number of frame files must equal the declared frame count.
Sequence load_sequence(const std::filesystem::path& root, const LabelMap& label_map, LoadReport* report = nullptr);

/// Loads using the label map stored in meta.json.
Sequence load_sequence(const std::filesystem::path& root, LoadReport* report = nullptr);

/// Writes `sequence` in the layout above. Classes are written using
/// `label_map.id_for`. Images are not written.
void write_sequence(const std::filesystem::path& root, const Sequence& sequence, const LabelMap& label_map);

} // namespace clearance

#endif // CLEARANCE_INGEST_HPP_
