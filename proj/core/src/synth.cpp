// Copyright 2026 The Clearance Authors
// SPDX-License-Identifier: Apache-2.0

#include "clearance/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "clearance/image_io.hpp"

namespace clearance {

namespace fs = std::filesystem;

void SceneSpec::validate() const
{
    if (road.centerline.size() < 2)
        throw std::invalid_argument("scene: centerline needs at least two vertices");
    if (!(road.width > 0.0))
        throw std::invalid_argument("scene: road width must be > 0");
    if (road.pattern == RoadPattern::Random && !(road.density > 0.0))
        throw std::invalid_argument("scene: road density must be > 0");
    if (road.pattern == RoadPattern::Grid && !(road.grid_spacing > 0.0))
        throw std::invalid_argument("scene: grid spacing must be > 0");
    for (const auto& t : trees)
    {
        if (!(t.crown_density > 0.0) || !(t.crown_radius > 0.0))
            throw std::invalid_argument("scene: tree crown radius and density must be > 0");
    }
    if (frame_count < 1)
        throw std::invalid_argument("scene: frame_count must be >= 1");
    if (!(noise_sigma >= 0.0))
        throw std::invalid_argument("scene: noise_sigma must be >= 0");
    if (!(sensor_range > 0.0))
        throw std::invalid_argument("scene: sensor_range must be > 0");
    if (branch_min_height > branch_max_height)
        throw std::invalid_argument("scene: branch height range is inverted");
}

double SceneSpec::effective_band_width() const
{
    if (band_width > 0.0)
        return band_width;
    if (road.pattern == RoadPattern::Grid)
        return road.grid_spacing;
    return 1.0 / std::sqrt(road.density);
}

RoadRibbon::RoadRibbon(const RoadSpec& spec) : spec_(spec)
{
    cumulative_.push_back(0.0);
    for (std::size_t i = 1; i < spec_.centerline.size(); ++i)
        cumulative_.push_back(cumulative_.back() + (spec_.centerline[i] - spec_.centerline[i - 1]).norm());
    total_length_ = cumulative_.back();
}

std::size_t RoadRibbon::segment_at(double s) const
{
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
    const auto seg = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, it - cumulative_.begin() - 1));
    return std::min(seg, cumulative_.size() - 2);
}

Vec2 RoadRibbon::at(double s, double lateral) const
{
    const std::size_t seg = segment_at(s);
    const Vec2& a = spec_.centerline[seg];
    const Vec2 dir = (spec_.centerline[seg + 1] - a).normalized();
    const Vec2 normal(-dir.y(), dir.x());
    return a + dir * (s - cumulative_[seg]) + normal * lateral;
}

double RoadRibbon::heading(double s) const
{
    const std::size_t seg = segment_at(s);
    const Vec2 d = spec_.centerline[seg + 1] - spec_.centerline[seg];
    return std::atan2(d.y(), d.x());
}

RoadRibbon::Projection RoadRibbon::project(const Vec2& q) const
{
    Projection best{0.0, std::numeric_limits<double>::infinity(), 0.0, false, false};
    const std::size_t last = spec_.centerline.size() - 2;
    for (std::size_t seg = 0; seg <= last; ++seg)
    {
        const Vec2& a = spec_.centerline[seg];
        const Vec2 ab = spec_.centerline[seg + 1] - a;
        const double len2 = ab.squaredNorm();
        const double t_raw = len2 > 0.0 ? (q - a).dot(ab) / len2 : 0.0;
        const double t = std::clamp(t_raw, 0.0, 1.0);
        const Vec2 foot = a + ab * t;
        const double d = (q - foot).norm();
        if (d < best.distance)
        {
            const double cross = ab.x() * (q - a).y() - ab.y() * (q - a).x();
            best.distance = d;
            best.arc_length = cumulative_[seg] + t * std::sqrt(len2);
            best.signed_lateral = cross >= 0.0 ? d : -d;
            best.before_start = seg == 0 && t_raw < 0.0;
            best.after_end = seg == last && t_raw > 1.0;
        }
    }
    return best;
}

bool RoadRibbon::contains(const Vec2& q) const
{
    const auto p = project(q);
    return !p.before_start && !p.after_end && p.distance <= 0.5 * spec_.width;
}

double RoadRibbon::edge_distance(const Vec2& q) const
{
    const auto p = project(q);
    return std::min({0.5 * spec_.width - p.distance, p.arc_length, total_length_ - p.arc_length});
}

LabelMap synth_label_map()
{
    return LabelMap({{kSynthOtherLabel, SemanticClass::Other},
                     {kSynthVegetationLabel, SemanticClass::Vegetation},
                     {kSynthRoadLabel, SemanticClass::Road}});
}

namespace {

struct WorldBuilder
{
    std::vector<Point3> points;
    std::vector<SemanticClass> classes;

    std::size_t add(const Point3& p, SemanticClass c)
    {
        points.push_back(p);
        classes.push_back(c);
        return points.size() - 1;
    }
};

Eigen::Quaterniond yaw_quaternion(double yaw)
{
    return Eigen::Quaterniond(Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitZ()));
}

// Camera axes (x right, y down, z forward) for a camera looking along
// vehicle yaw `yaw`.
Eigen::Quaterniond camera_mount(double yaw)
{
    Eigen::Matrix3d r;
    r.col(0) = Eigen::Vector3d(std::sin(yaw), -std::cos(yaw), 0.0);
    r.col(1) = Eigen::Vector3d(0.0, 0.0, -1.0);
    r.col(2) = Eigen::Vector3d(std::cos(yaw), std::sin(yaw), 0.0);
    Eigen::Quaterniond q(r);
    q.normalize();
    return q;
}

const std::array<std::pair<const char*, double>, 6> kCameraMounts{{{"front", 0.0},
                                                                   {"front_left", 60.0},
                                                                   {"back_left", 120.0},
                                                                   {"back", 180.0},
                                                                   {"back_right", 240.0},
                                                                   {"front_right", 300.0}}};

} // namespace

SyntheticScene generate_scene(const SceneSpec& spec)
{
    spec.validate();
    const RoadRibbon ribbon(spec.road);
    const double length = ribbon.length();
    const double half_width = 0.5 * spec.road.width;
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    WorldBuilder world;
    SyntheticScene scene;
    GroundTruth& truth = scene.truth;

    // road surface
    if (spec.road.pattern == RoadPattern::Grid)
    {
        const double h = spec.road.grid_spacing;
        for (double s = 0.5 * h; s < length; s += h)
        {
            for (double l = -half_width + 0.5 * h; l < half_width; l += h)
            {
                const Vec2 xy = ribbon.at(s, l);
                world.add({xy.x(), xy.y(), ribbon.ground_at_arc(s)}, SemanticClass::Road);
            }
        }
    }
    else
    {
        const auto count = static_cast<std::size_t>(std::llround(spec.road.density * length * spec.road.width));
        for (std::size_t i = 0; i < count; ++i)
        {
            const double s = unit(rng) * length;
            const double l = (unit(rng) - 0.5) * spec.road.width;
            const Vec2 xy = ribbon.at(s, l);
            world.add({xy.x(), xy.y(), ribbon.ground_at_arc(s)}, SemanticClass::Road);
        }
    }

    // trees: trunk cylinder, crown sphere surface, optional branch over the road
    constexpr double kTrunkRadius = 0.2;
    for (const auto& tree : spec.trees)
    {
        const double base = ribbon.ground(tree.trunk);
        const double top = tree.crown_center.z() - tree.crown_radius;
        if (top > base)
        {
            const auto n = static_cast<std::size_t>(
                std::llround(tree.crown_density * 2.0 * std::numbers::pi * kTrunkRadius * (top - base)));
            for (std::size_t i = 0; i < n; ++i)
            {
                const double a = unit(rng) * 2.0 * std::numbers::pi;
                world.add({tree.trunk.x() + kTrunkRadius * std::cos(a), tree.trunk.y() + kTrunkRadius * std::sin(a),
                           base + unit(rng) * (top - base)},
                          SemanticClass::Vegetation);
            }
        }
        const auto n_crown = static_cast<std::size_t>(
            std::llround(tree.crown_density * 4.0 * std::numbers::pi * tree.crown_radius * tree.crown_radius));
        for (std::size_t i = 0; i < n_crown; ++i)
        {
            Point3 dir(gauss(rng), gauss(rng), gauss(rng));
            if (dir.norm() == 0.0)
                dir = Point3::UnitZ();
            world.add(tree.crown_center + tree.crown_radius * dir.normalized(), SemanticClass::Vegetation);
        }
        if (tree.overhang)
        {
            const auto proj = ribbon.project(tree.trunk);
            const double side = proj.signed_lateral >= 0.0 ? 1.0 : -1.0;
            const double reach = std::max(0.0, half_width - spec.branch_edge_inset);
            const double s_lo = std::max(0.5, proj.arc_length - spec.branch_half_length);
            const double s_hi = std::min(length - 0.5, proj.arc_length + spec.branch_half_length);
            for (std::size_t i = 0; i < spec.branch_points; ++i)
            {
                const double s = s_lo + unit(rng) * (s_hi - s_lo);
                const Vec2 xy = ribbon.at(s, side * unit(rng) * reach);
                const double z = ribbon.ground_at_arc(s) + spec.branch_min_height +
                                 unit(rng) * (spec.branch_max_height - spec.branch_min_height);
                truth.planted_branch.push_back(world.add({xy.x(), xy.y(), z}, SemanticClass::Vegetation));
            }
        }
    }

    // clutter around, but never on, the road
    if (spec.clutter_points > 0)
    {
        double min_x = spec.road.centerline[0].x(), max_x = min_x;
        double min_y = spec.road.centerline[0].y(), max_y = min_y;
        for (const auto& c : spec.road.centerline)
        {
            min_x = std::min(min_x, c.x());
            max_x = std::max(max_x, c.x());
            min_y = std::min(min_y, c.y());
            max_y = std::max(max_y, c.y());
        }
        const double margin = half_width + 10.0;
        std::size_t added = 0;
        while (added < spec.clutter_points)
        {
            const Vec2 xy(min_x - margin + unit(rng) * (max_x - min_x + 2 * margin),
                          min_y - margin + unit(rng) * (max_y - min_y + 2 * margin));
            const double z = ribbon.ground(xy) + unit(rng) * 3.0;
            if (ribbon.contains(xy))
                continue;
            world.add({xy.x(), xy.y(), z}, SemanticClass::Other);
            ++added;
        }
    }

    auto in_gauge = [&](const Point3& p) {
        const Vec2 xy = planar(p);
        if (!ribbon.contains(xy))
            return false;
        const double dz = p.z() - ribbon.ground(xy);
        return dz >= -spec.truth_ground_slack && dz <= spec.truth_clearance_height;
    };
    for (std::size_t i = 0; i < world.points.size(); ++i)
    {
        if (world.classes[i] == SemanticClass::Vegetation && in_gauge(world.points[i]))
            truth.world_inliers.push_back(i);
    }

    // frames
    Sequence& seq = scene.sequence;
    seq.sequence_id = spec.sequence_id;
    seq.label_map = synth_label_map();
    scene.label_map = seq.label_map;
    truth.band_width = spec.effective_band_width();

    std::vector<CameraRig> rigs;
    if (spec.cameras.enabled)
    {
        const double fx = 0.5 * spec.cameras.width / std::tan(0.5 * spec.cameras.horizontal_fov_deg * std::numbers::pi / 180.0);
        for (const auto& [name, yaw] : kCameraMounts)
        {
            CameraRig rig;
            rig.camera_id = name;
            rig.intrinsics = {fx, fx, 0.5 * spec.cameras.width, 0.5 * spec.cameras.height};
            rig.width = spec.cameras.width;
            rig.height = spec.cameras.height;
            rigs.push_back(std::move(rig));
        }
    }

    for (std::size_t k = 0; k < spec.frame_count; ++k)
    {
        const double s = std::clamp(spec.start_offset + static_cast<double>(k) * spec.frame_advance, 0.0, length);
        const Vec2 pos = ribbon.at(s, 0.0);
        FramePose pose;
        pose.frame_index = k;
        pose.rotation = yaw_quaternion(ribbon.heading(s));
        pose.translation = Point3(pos.x(), pos.y(), ribbon.ground_at_arc(s) + spec.sensor_height);
        const FramePose to_sensor = pose.inverse();

        FrameTruth ft;
        ft.frame_index = k;
        std::vector<Point3> pts;
        std::vector<SemanticClass> cls;
        for (std::size_t i = 0; i < world.points.size(); ++i)
        {
            const Point3& w = world.points[i];
            if ((planar(w) - pos).norm() > spec.sensor_range)
                continue;
            Point3 observed = w;
            if (spec.noise_sigma > 0.0)
                observed += spec.noise_sigma * Point3(gauss(rng), gauss(rng), gauss(rng));
            const std::size_t row = pts.size();
            if (world.classes[i] == SemanticClass::Vegetation && in_gauge(observed))
                ft.inlier_rows.push_back(row);
            if (world.classes[i] == SemanticClass::Road && ribbon.edge_distance(planar(observed)) <= truth.band_width)
                ft.boundary_band_rows.push_back(row);
            ft.world_index.push_back(i);
            pts.push_back(to_sensor.apply(observed));
            cls.push_back(world.classes[i]);
        }
        seq.frames.push_back(Frame{LabeledPointCloud(std::move(pts), std::move(cls),
                                                     spec.sequence_id + "/" + std::to_string(k),
                                                     CoordinateFrame::Sensor),
                                   pose});
        truth.frames.push_back(std::move(ft));

        for (std::size_t c = 0; c < rigs.size(); ++c)
        {
            FramePose mount;
            mount.rotation = camera_mount(kCameraMounts[c].second * std::numbers::pi / 180.0);
            mount.frame_index = k;
            rigs[c].poses.emplace(k, pose.compose(mount));
        }
    }
    seq.cameras = std::move(rigs);

    truth.world_points = std::move(world.points);
    truth.world_classes = std::move(world.classes);
    return scene;
}

std::string ground_truth_to_json(const GroundTruth& truth, const SceneSpec& spec)
{
    nlohmann::ordered_json j;
    j["sequence_id"] = spec.sequence_id;
    j["seed"] = spec.seed;
    j["band_width"] = truth.band_width;
    j["clearance_height"] = spec.truth_clearance_height;
    j["ground_slack"] = spec.truth_ground_slack;
    j["world_point_count"] = truth.world_points.size();
    j["planted_branch"] = truth.planted_branch;
    j["world_inliers"] = truth.world_inliers;
    auto frames = nlohmann::ordered_json::array();
    for (const auto& f : truth.frames)
    {
        frames.push_back({{"frame", f.frame_index},
                          {"world_index", f.world_index},
                          {"inlier_rows", f.inlier_rows},
                          {"boundary_band_rows", f.boundary_band_rows}});
    }
    j["frames"] = frames;
    return j.dump() + "\n";
}

void write_scene(const fs::path& root, const SyntheticScene& scene, const SceneSpec& spec, bool images)
{
    write_sequence(root, scene.sequence, scene.label_map);
    {
        std::ofstream out(root / "ground_truth.json", std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot write " + (root / "ground_truth.json").string());
        out << ground_truth_to_json(scene.truth, spec);
    }
    if (!images)
        return;
    for (const auto& cam : scene.sequence.cameras)
    {
        const fs::path dir = root / "images" / cam.camera_id;
        fs::create_directories(dir);
        const RgbImage grey(cam.width, cam.height, {128, 128, 128});
        for (const auto& f : scene.sequence.frames)
            write_png(dir / (std::to_string(f.pose.frame_index) + ".png"), grey);
    }
}

SceneSpec branch_scene_spec(std::uint64_t seed)
{
    SceneSpec spec;
    spec.sequence_id = "synthetic-branch";
    spec.road.centerline = {Vec2(0.0, 0.0), Vec2(100.0, 0.0)};
    spec.road.width = 8.0;
    spec.road.density = 4.0;
    spec.trees = {
        // overhanging tree north of the road; crown 6-9 m
        TreeSpec{Vec2(50.0, 6.5), Point3(50.0, 6.5, 7.5), 1.5, 20.0, true},
        // plain tree south of the road
        TreeSpec{Vec2(25.0, -7.0), Point3(25.0, -7.0, 7.5), 1.5, 20.0, false},
        // crown reaching over the road, but above the gauge
        TreeSpec{Vec2(78.0, 7.0), Point3(78.0, 5.0, 7.5), 1.5, 20.0, false},
    };
    spec.clutter_points = 400;
    spec.frame_count = 80;
    spec.start_offset = 10.0;
    spec.frame_advance = 1.0;
    spec.sensor_range = 40.0;
    spec.noise_sigma = 0.02;
    spec.seed = seed;
    return spec;
}

SceneSpec grid_strip_spec(std::uint64_t seed)
{
    SceneSpec spec;
    spec.sequence_id = "synthetic-grid-strip";
    spec.road.centerline = {Vec2(0.0, 0.0), Vec2(100.0, 0.0)};
    spec.road.width = 10.0;
    spec.road.pattern = RoadPattern::Grid;
    spec.road.grid_spacing = 0.5;
    spec.frame_count = 1;
    spec.start_offset = 50.0;
    spec.noise_sigma = 0.02;
    spec.seed = seed;
    return spec;
}

SceneSpec noisy_strip_spec(std::uint64_t seed)
{
    SceneSpec spec;
    spec.sequence_id = "synthetic-noisy-strip";
    spec.road.centerline = {Vec2(0.0, 0.0), Vec2(100.0, 0.0)};
    spec.road.width = 10.0;
    spec.road.density = 4.0;
    spec.frame_count = 1;
    spec.start_offset = 50.0;
    spec.noise_sigma = 0.02;
    spec.seed = seed;
    return spec;
}

} // namespace clearance
