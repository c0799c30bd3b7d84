// Copyright 2026 The Clearance Authors
// SPDX-License-Identifier: Apache-2.0

#include "clearance/project.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "clearance/image_io.hpp"
#include "clearance/parallel.hpp"

namespace clearance {

namespace fs = std::filesystem;

Point3 world_to_camera(const CameraRig& camera, std::size_t frame_index, const Point3& p)
{
    const FramePose& pose = camera.pose_at(frame_index);
    return pose.rotation_matrix().transpose() * (p - pose.translation);
}

std::optional<Vec2> world_to_pixel(const CameraRig& camera, std::size_t frame_index, const Point3& p)
{
    const Point3 c = world_to_camera(camera, frame_index, p);
    if (!(c.z() > 0.0))
        return std::nullopt;
    const auto& k = camera.intrinsics;
    const double u = k.fx * c.x() / c.z() + k.cx;
    const double v = k.fy * c.y() / c.z() + k.cy;
    if (!(u >= 0.0 && u < camera.width && v >= 0.0 && v < camera.height))
        return std::nullopt;
    return Vec2(u, v);
}

std::vector<PixelHit> project_points(const Sequence& sequence, const LabeledPointCloud& points,
                                     std::span<const std::size_t> frame_indices)
{
    if (points.frame() != CoordinateFrame::World && !points.empty())
        throw std::invalid_argument("project_points: points must be in the world frame");

    std::vector<PixelHit> hits;
    const auto& pts = points.points();
    std::vector<std::optional<Vec2>> uv(pts.size());
    for (const std::size_t frame : frame_indices)
    {
        for (const auto& cam : sequence.cameras)
        {
            if (!cam.poses.contains(frame))
                continue;
            const FramePose& pose = cam.pose_at(frame);
            const Eigen::Matrix3d rt = pose.rotation_matrix().transpose();
            parallel_for(pts.size(), [&](std::size_t i) {
                const Point3 c = rt * (pts[i] - pose.translation);
                uv[i].reset();
                if (!(c.z() > 0.0))
                    return;
                const double u = cam.intrinsics.fx * c.x() / c.z() + cam.intrinsics.cx;
                const double v = cam.intrinsics.fy * c.y() / c.z() + cam.intrinsics.cy;
                if (u >= 0.0 && u < cam.width && v >= 0.0 && v < cam.height)
                    uv[i] = Vec2(u, v);
            });
            for (std::size_t i = 0; i < pts.size(); ++i)
            {
                if (uv[i])
                    hits.push_back({cam.camera_id, frame, uv[i]->x(), uv[i]->y(), i});
            }
        }
    }
    return hits;
}

std::string annotation_file_name(std::size_t frame_index, const std::string& camera_id)
{
    return std::to_string(frame_index) + "_" + camera_id;
}

OverlayManifest render_overlays(const Sequence& sequence, std::span<const PixelHit> hits,
                                std::span<const std::size_t> frame_indices, const fs::path& out_dir)
{
    std::vector<std::size_t> frames(frame_indices.begin(), frame_indices.end());
    {
        std::set<std::size_t> seen(frames.begin(), frames.end());
        for (const auto& h : hits)
        {
            if (seen.insert(h.frame_index).second)
                frames.push_back(h.frame_index);
        }
    }

    std::error_code ec;
    fs::create_directories(out_dir / "annotations", ec);
    if (ec)
        throw std::runtime_error("cannot create " + (out_dir / "annotations").string() + ": " + ec.message());

    OverlayManifest manifest;
    for (const std::size_t frame : frames)
    {
        for (const auto& cam : sequence.cameras)
        {
            const std::string stem = annotation_file_name(frame, cam.camera_id);
            const fs::path csv_path = out_dir / "annotations" / (stem + ".csv");
            std::ofstream csv(csv_path, std::ios::binary | std::ios::trunc);
            if (!csv)
                throw std::runtime_error("cannot write " + csv_path.string());
            csv << "frame,camera,u,v,point_index\n";
            std::vector<const PixelHit*> group;
            for (const auto& h : hits)
            {
                if (h.frame_index == frame && h.camera_id == cam.camera_id)
                    group.push_back(&h);
            }
            char line[256];
            for (const PixelHit* h : group)
            {
                std::snprintf(line, sizeof(line), "%zu,%s,%.6f,%.6f,%zu\n", h->frame_index, h->camera_id.c_str(), h->u,
                              h->v, h->point_index);
                csv << line;
            }
            csv.close();
            if (!csv)
                throw std::runtime_error("failed writing " + csv_path.string());
            manifest.annotation_files.push_back(csv_path);

            const auto source = sequence.image_path(cam.camera_id, frame);
            if (!source)
                continue;
            RgbImage img = read_png(*source);
            for (const PixelHit* h : group)
            {
                draw_disk(img, static_cast<int>(std::floor(h->u + 0.5)), static_cast<int>(std::floor(h->v + 0.5)),
                          kMarkerRadius, kMarkerColor);
            }
            fs::create_directories(out_dir / "overlays", ec);
            if (ec)
                throw std::runtime_error("cannot create " + (out_dir / "overlays").string() + ": " + ec.message());
            const fs::path png_path = out_dir / "overlays" / (stem + ".png");
            write_png(png_path, img);
            manifest.overlay_files.push_back(png_path);
        }
    }
    return manifest;
}

} // namespace clearance
