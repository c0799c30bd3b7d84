// Copyright 2026 The Clearance Authors
// SPDX-License-Identifier: Apache-2.0

#include "clearance/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>

#include <json.hpp>

#include "clearance/parallel.hpp"

namespace clearance {

namespace fs = std::filesystem;
using nlohmann::json;

std::optional<SemanticClass> LabelMap::find(int id) const
{
    const auto it = entries_.find(id);
    if (it == entries_.end())
        return std::nullopt;
    return it->second;
}

std::optional<int> LabelMap::id_for(SemanticClass c) const
{
    for (const auto& [id, cls] : entries_)
    {
        if (cls == c)
            return id;
    }
    return std::nullopt;
}

UnmappedLabelError::UnmappedLabelError(int id, std::size_t row, std::filesystem::path path)
    : LoadError("unmapped label id " + std::to_string(id), std::move(path), row), id_(id)
{
}

std::vector<SemanticClass> remap_labels(std::span<const int> raw_ids, const LabelMap& label_map)
{
    std::vector<SemanticClass> out;
    out.reserve(raw_ids.size());
    for (std::size_t i = 0; i < raw_ids.size(); ++i)
    {
        const auto c = label_map.find(raw_ids[i]);
        if (!c)
            throw UnmappedLabelError(raw_ids[i], i);
        out.push_back(*c);
    }
    return out;
}

const FramePose& CameraRig::pose_at(std::size_t frame_index) const
{
    const auto it = poses.find(frame_index);
    if (it == poses.end())
        throw CalibrationError("camera '" + camera_id + "' has no pose for frame " + std::to_string(frame_index));
    return it->second;
}

void CameraRig::validate() const
{
    const auto& k = intrinsics;
    if (!(k.fx > 0.0) || !(k.fy > 0.0))
        throw std::invalid_argument("camera '" + camera_id + "': focal lengths must be positive");
    if (width <= 0 || height <= 0)
        throw std::invalid_argument("camera '" + camera_id + "': image size must be positive");
    if (!(k.cx >= 0.0 && k.cx < width) || !(k.cy >= 0.0 && k.cy < height))
        throw std::invalid_argument("camera '" + camera_id + "': principal point outside the image");
}

std::optional<fs::path> Sequence::image_path(const std::string& camera_id, std::size_t frame_index) const
{
    if (root.empty())
        return std::nullopt;
    auto p = root / "images" / camera_id / (std::to_string(frame_index) + ".png");
    std::error_code ec;
    if (fs::is_regular_file(p, ec))
        return p;
    return std::nullopt;
}

namespace {

json read_meta(const fs::path& root)
{
    const fs::path meta_path = root / "meta.json";
    std::ifstream in(meta_path);
    if (!in)
        throw LoadError("missing meta.json", meta_path);
    try
    {
        return json::parse(in);
    }
    catch (const json::exception& e)
    {
        throw LoadError(std::string("invalid meta.json: ") + e.what(), meta_path);
    }
}

FramePose pose_from_json(const json& j)
{
    const auto& r = j.at("rotation");
    const auto& t = j.at("translation");
    if (r.size() != 4 || t.size() != 3)
        throw LoadError("pose needs rotation [w,x,y,z] and translation [x,y,z]");
    FramePose p;
    p.frame_index = j.at("frame").get<std::size_t>();
    p.rotation = Eigen::Quaterniond(r[0].get<double>(), r[1].get<double>(), r[2].get<double>(), r[3].get<double>());
    p.translation = Point3(t[0].get<double>(), t[1].get<double>(), t[2].get<double>());
    return p;
}

json pose_to_json(const FramePose& p)
{
    const auto& q = p.rotation;
    return json{{"frame", p.frame_index},
                {"rotation", {q.w(), q.x(), q.y(), q.z()}},
                {"translation", {p.translation.x(), p.translation.y(), p.translation.z()}}};
}

LabelMap label_map_from_json(const json& meta, const fs::path& meta_path)
{
    LabelMap map;
    if (!meta.contains("label_map"))
        return map;
    for (const auto& [key, value] : meta.at("label_map").items())
    {
        int id = 0;
        const auto res = std::from_chars(key.data(), key.data() + key.size(), id);
        if (res.ec != std::errc{} || res.ptr != key.data() + key.size())
            throw LoadError("label_map key '" + key + "' is not an integer", meta_path);
        const auto cls = parse_semantic_class(value.get<std::string>());
        if (!cls)
            throw LoadError("label_map value '" + value.get<std::string>() + "' is not road/vegetation/other",
                            meta_path);
        map.set(id, *cls);
    }
    return map;
}

std::optional<std::size_t> frame_index_from_name(const fs::path& p)
{
    if (p.extension() != ".xyzl")
        return std::nullopt;
    const std::string stem = p.stem().string();
    std::size_t idx = 0;
    const auto res = std::from_chars(stem.data(), stem.data() + stem.size(), idx);
    if (stem.empty() || res.ec != std::errc{} || res.ptr != stem.data() + stem.size())
        return std::nullopt;
    return idx;
}

} // namespace

LabelMap read_label_map(const fs::path& root)
{
    return label_map_from_json(read_meta(root), root / "meta.json");
}

Sequence load_sequence(const fs::path& root, LoadReport* report)
{
    return load_sequence(root, read_label_map(root), report);
}

Sequence load_sequence(const fs::path& root, const LabelMap& label_map, LoadReport* report)
{
    const fs::path meta_path = root / "meta.json";
    const json meta = read_meta(root);

    Sequence seq;
    seq.root = root;
    seq.label_map = label_map;
    std::size_t declared_frames = 0;
    std::map<std::size_t, FramePose> lidar_poses;
    try
    {
        seq.sequence_id = meta.at("sequence_id").get<std::string>();
        declared_frames = meta.at("frame_count").get<std::size_t>();
        for (const auto& jp : meta.at("lidar_poses"))
        {
            auto p = pose_from_json(jp);
            if (!lidar_poses.emplace(p.frame_index, p).second)
                throw LoadError("duplicate lidar pose for frame " + std::to_string(p.frame_index), meta_path);
        }
        if (meta.contains("cameras"))
        {
            for (const auto& jc : meta.at("cameras"))
            {
                CameraRig rig;
                rig.camera_id = jc.at("camera_id").get<std::string>();
                rig.intrinsics = {jc.at("fx").get<double>(), jc.at("fy").get<double>(), jc.at("cx").get<double>(),
                                  jc.at("cy").get<double>()};
                rig.width = jc.at("width").get<int>();
                rig.height = jc.at("height").get<int>();
                for (const auto& jp : jc.at("poses"))
                {
                    auto p = pose_from_json(jp);
                    rig.poses.emplace(p.frame_index, p);
                }
                try
                {
                    rig.validate();
                }
                catch (const std::invalid_argument& e)
                {
                    throw LoadError(e.what(), meta_path);
                }
                seq.cameras.push_back(std::move(rig));
            }
        }
    }
    catch (const json::exception& e)
    {
        throw LoadError(std::string("invalid meta.json: ") + e.what(), meta_path);
    }

    const fs::path frames_dir = root / "frames";
    std::vector<std::pair<std::size_t, fs::path>> files;
    std::error_code ec;
    if (fs::is_directory(frames_dir, ec))
    {
        for (const auto& entry : fs::directory_iterator(frames_dir))
        {
            if (!entry.is_regular_file())
                continue;
            const auto idx = frame_index_from_name(entry.path());
            if (!idx)
                throw LoadError("unexpected file in frames/", entry.path());
            files.emplace_back(*idx, entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    for (std::size_t i = 1; i < files.size(); ++i)
    {
        if (files[i].first == files[i - 1].first)
            throw LoadError("two frame files share index " + std::to_string(files[i].first), files[i].second);
    }
    if (files.size() != declared_frames)
    {
        throw LoadError("meta.json declares " + std::to_string(declared_frames) + " frames but " +
                            std::to_string(files.size()) + " frame files exist",
                        frames_dir);
    }
    for (const auto& [idx, path] : files)
    {
        if (!lidar_poses.contains(idx))
            throw LoadError("missing lidar pose for frame " + std::to_string(idx), meta_path);
    }

    std::vector<Frame> frames(files.size());
    std::vector<std::exception_ptr> errors(files.size());
    parallel_for(files.size(), [&](std::size_t i) {
        try
        {
            const auto& [idx, path] = files[i];
            XyzlRows rows = read_xyzl(path);
            std::vector<SemanticClass> classes;
            try
            {
                classes = remap_labels(rows.labels, label_map);
            }
            catch (const UnmappedLabelError& e)
            {
                throw UnmappedLabelError(e.label_id(), e.row().value_or(0), path);
            }
            frames[i].cloud = LabeledPointCloud(std::move(rows.points), std::move(classes),
                                                seq.sequence_id + "/" + std::to_string(idx), CoordinateFrame::Sensor);
            frames[i].pose = lidar_poses.at(idx);
        }
        catch (...)
        {
            errors[i] = std::current_exception();
        }
    });
    for (const auto& e : errors)
    {
        if (e)
            std::rethrow_exception(e);
    }

    seq.frames = std::move(frames);
    if (report)
    {
        report->frames_loaded = seq.frames.size();
        report->rows_loaded = 0;
        report->rows_per_frame.clear();
        for (const auto& f : seq.frames)
        {
            report->rows_loaded += f.cloud.size();
            report->rows_per_frame.push_back(f.cloud.size());
        }
    }
    return seq;
}

void write_sequence(const fs::path& root, const Sequence& sequence, const LabelMap& label_map)
{
    fs::create_directories(root / "frames");

    json meta;
    meta["sequence_id"] = sequence.sequence_id;
    meta["frame_count"] = sequence.frames.size();
    json jmap = json::object();
    for (const auto& [id, cls] : label_map.entries())
        jmap[std::to_string(id)] = std::string(to_string(cls));
    meta["label_map"] = jmap;

    json poses = json::array();
    for (const auto& f : sequence.frames)
        poses.push_back(pose_to_json(f.pose));
    meta["lidar_poses"] = poses;

    json cams = json::array();
    for (const auto& rig : sequence.cameras)
    {
        json jc{{"camera_id", rig.camera_id},
                {"fx", rig.intrinsics.fx},
                {"fy", rig.intrinsics.fy},
                {"cx", rig.intrinsics.cx},
                {"cy", rig.intrinsics.cy},
                {"width", rig.width},
                {"height", rig.height}};
        json jp = json::array();
        for (const auto& [idx, pose] : rig.poses)
            jp.push_back(pose_to_json(pose));
        jc["poses"] = jp;
        cams.push_back(jc);
    }
    meta["cameras"] = cams;

    {
        std::ofstream out(root / "meta.json", std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot write " + (root / "meta.json").string());
        out << meta.dump(2) << '\n';
    }

    for (const auto& f : sequence.frames)
    {
        std::vector<int> ids;
        ids.reserve(f.cloud.size());
        for (const auto c : f.cloud.classes())
        {
            const auto id = label_map.id_for(c);
            if (!id)
                throw std::invalid_argument("label map has no id for class " + std::string(to_string(c)));
            ids.push_back(*id);
        }
        write_xyzl(root / "frames" / (std::to_string(f.pose.frame_index) + ".xyzl"), f.cloud.points(), ids);
    }
}

} // namespace clearance
