// Copyright 2026 The Clearance Authors
// SPDX-License-Identifier: Apache-2.0

#include "clearance/types.hpp"

#include <cmath>

#include "clearance/parallel.hpp"

namespace clearance {

std::string_view to_string(SemanticClass c)
{
    switch (c)
    {
    case SemanticClass::Road:
        return "road";
    case SemanticClass::Vegetation:
        return "vegetation";
    case SemanticClass::Other:
        return "other";
    }
    return "other";
}

std::optional<SemanticClass> parse_semantic_class(std::string_view name)
{
    if (name == "road")
        return SemanticClass::Road;
    if (name == "vegetation")
        return SemanticClass::Vegetation;
    if (name == "other")
        return SemanticClass::Other;
    return std::nullopt;
}

LabeledPointCloud::LabeledPointCloud(std::vector<Point3> points, std::vector<SemanticClass> classes,
                                     std::string frame_id, CoordinateFrame frame)
    : points_(std::move(points)), classes_(std::move(classes)), frame_id_(std::move(frame_id)), frame_(frame)
{
    if (points_.size() != classes_.size())
    {
        throw std::invalid_argument("LabeledPointCloud: " + std::to_string(points_.size()) + " points but " +
                                    std::to_string(classes_.size()) + " classes");
    }
}

LabeledPointCloud LabeledPointCloud::select(std::span<const std::size_t> rows) const
{
    std::vector<Point3> pts;
    std::vector<SemanticClass> cls;
    pts.reserve(rows.size());
    cls.reserve(rows.size());
    for (const auto r : rows)
    {
        pts.push_back(points_.at(r));
        cls.push_back(classes_[r]);
    }
    return {std::move(pts), std::move(cls), frame_id_, frame_};
}

bool FramePose::is_unit() const noexcept
{
    return std::abs(rotation.norm() - 1.0) <= kUnitTolerance;
}

Eigen::Matrix3d FramePose::rotation_matrix() const
{
    if (!is_unit())
    {
        throw CalibrationError("pose for frame " + std::to_string(frame_index) +
                               " has a non-unit quaternion (norm " + std::to_string(rotation.norm()) + ")");
    }
    return rotation.toRotationMatrix();
}

FramePose FramePose::inverse() const
{
    const Eigen::Matrix3d r = rotation_matrix();
    FramePose inv;
    inv.rotation = rotation.conjugate();
    inv.translation = -(r.transpose() * translation);
    inv.frame_index = frame_index;
    return inv;
}

FramePose FramePose::compose(const FramePose& child) const
{
    FramePose out;
    out.rotation = rotation * child.rotation;
    out.rotation.normalize();
    out.translation = rotation_matrix() * child.translation + translation;
    out.frame_index = child.frame_index;
    return out;
}

LabeledPointCloud transform_cloud(const LabeledPointCloud& cloud, const FramePose& pose, CoordinateFrame result_frame)
{
    const Eigen::Matrix3d r = pose.rotation_matrix();
    const Point3 t = pose.translation;
    const auto& src = cloud.points();
    std::vector<Point3> out(src.size());
    parallel_for(src.size(), [&](std::size_t i) { out[i] = r * src[i] + t; });
    return {std::move(out), cloud.classes(), cloud.frame_id(), result_frame};
}

LabeledPointCloud transform_to_world(const LabeledPointCloud& cloud, const FramePose& pose)
{
    if (cloud.frame() != CoordinateFrame::Sensor)
        throw std::invalid_argument("transform_to_world: cloud '" + cloud.frame_id() + "' is not in the sensor frame");
    return transform_cloud(cloud, pose, CoordinateFrame::World);
}

} // namespace clearance
