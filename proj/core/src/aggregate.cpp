// Copyright 2026 The Clearance Authors
// SPDX-License-Identifier: Apache-2.0

#include "clearance/aggregate.hpp"

#include <stdexcept>

#include "clearance/parallel.hpp"

namespace clearance {

void ConcatConfig::validate() const
{
    if (step < 1)
        throw std::invalid_argument("concatenation step must be >= 1");
}

std::vector<std::size_t> select_frame_indices(std::size_t frame_count, std::size_t step)
{
    if (step < 1)
        throw std::invalid_argument("select_frame_indices: step must be >= 1");
    std::vector<std::size_t> out;
    out.reserve(frame_count / step + 1);
    for (std::size_t i = 0; i < frame_count; i += step)
        out.push_back(i);
    return out;
}

LabeledPointCloud concatenate(const Sequence& sequence, const ConcatConfig& config)
{
    config.validate();
    if (sequence.frames.empty())
        throw std::invalid_argument("concatenate: sequence '" + sequence.sequence_id + "' has no frames");

    const auto selected = select_frame_indices(sequence.frames.size(), config.step);

    std::vector<std::size_t> offsets(selected.size() + 1, 0);
    for (std::size_t k = 0; k < selected.size(); ++k)
        offsets[k + 1] = offsets[k] + sequence.frames[selected[k]].cloud.size();

    std::vector<Point3> points(offsets.back());
    std::vector<SemanticClass> classes(offsets.back());
    for (std::size_t k = 0; k < selected.size(); ++k)
    {
        const Frame& f = sequence.frames[selected[k]];
        if (f.cloud.frame() != CoordinateFrame::Sensor)
            throw std::invalid_argument("concatenate: frame " + std::to_string(f.pose.frame_index) +
                                        " is not in the sensor frame");
        const Eigen::Matrix3d r = f.pose.rotation_matrix();
        const Point3 t = f.pose.translation;
        const auto& src = f.cloud.points();
        const std::size_t base = offsets[k];
        parallel_for(src.size(), [&](std::size_t i) { points[base + i] = r * src[i] + t; });
        std::copy(f.cloud.classes().begin(), f.cloud.classes().end(), classes.begin() + static_cast<std::ptrdiff_t>(base));
    }
    return {std::move(points), std::move(classes), sequence.sequence_id, CoordinateFrame::World};
}

} // namespace clearance
