// Copyright 2026 The Clearance Authors
// SPDX-License-Identifier: Apache-2.0
//
// Geometric and semantic value types shared by every pipeline stage.

#ifndef CLEARANCE_TYPES_HPP_
#define CLEARANCE_TYPES_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace clearance {

using Point3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;

inline Vec2 planar(const Point3& p) { return {p.x(), p.y()}; }

enum class SemanticClass : std::uint8_t { Road, Vegetation, Other };

std::string_view to_string(SemanticClass c);
std::optional<SemanticClass> parse_semantic_class(std::string_view name);

enum class CoordinateFrame : std::uint8_t { Sensor, World };

// Raised for poses that are not rigid transforms (non-unit quaternions) or
// for missing calibration entries.
class CalibrationError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Columnar labeled point cloud. `points()[i]` carries class `classes()[i]`.
class LabeledPointCloud
{
  public:
    LabeledPointCloud() = default;
    LabeledPointCloud(std::vector<Point3> points, std::vector<SemanticClass> classes, std::string frame_id,
                      CoordinateFrame frame);

    const std::vector<Point3>& points() const noexcept { return points_; }
    const std::vector<SemanticClass>& classes() const noexcept { return classes_; }
    const std::string& frame_id() const noexcept { return frame_id_; }
    CoordinateFrame frame() const noexcept { return frame_; }

    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }

    /// Subset by row positions, preserving the order of `rows`.
    LabeledPointCloud select(std::span<const std::size_t> rows) const;

  private:
    std::vector<Point3> points_;
    std::vector<SemanticClass> classes_;
    std::string frame_id_;
    CoordinateFrame frame_{CoordinateFrame::Sensor};
};

/// Rigid transform placing a sensor (or camera) frame in the world frame.
/// Rotation is an active rotation stored as (w, x, y, z).
struct FramePose
{
    Eigen::Quaterniond rotation{Eigen::Quaterniond::Identity()};
    Point3 translation{Point3::Zero()};
    std::size_t frame_index{0};

    static constexpr double kUnitTolerance = 1e-9;

    bool is_unit() const noexcept;

    /// Throws CalibrationError when the quaternion is not unit length.
    Eigen::Matrix3d rotation_matrix() const;

    Point3 apply(const Point3& p) const { return rotation_matrix() * p + translation; }

    FramePose inverse() const;

    /// this ∘ child: maps child-frame coordinates through `child`, then `this`.
    FramePose compose(const FramePose& child) const;
};

/// Applies `pose` to every point; classes and frame id are carried over.
LabeledPointCloud transform_cloud(const LabeledPointCloud& cloud, const FramePose& pose, CoordinateFrame result_frame);

/// Sensor-frame cloud to world frame (R·p + t).
LabeledPointCloud transform_to_world(const LabeledPointCloud& cloud, const FramePose& pose);

} // namespace clearance

#endif // CLEARANCE_TYPES_HPP_
