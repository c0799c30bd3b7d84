// Copyright 2026 The Clearance Authors
// SPDX-License-Identifier: Apache-2.0

#include "clearance/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "clearance/parallel.hpp"
#include "clearance/xyzl.hpp"

namespace clearance {

namespace fs = std::filesystem;

PipelineError::PipelineError(std::string stage, const std::string& message)
    : std::runtime_error(stage + ": " + message), stage_(std::move(stage))
{
}

void PipelineConfig::validate() const
{
    concat.validate();
    outliers.validate();
    sampling.validate();
    contour.validate();
    gauge.validate();
}

PipelineConfig load_pipeline_config(const fs::path& path, PipelineConfig base)
{
    std::ifstream in(path);
    if (!in)
        throw PipelineError("config", "cannot open " + path.string());
    nlohmann::json j;
    try
    {
        j = nlohmann::json::parse(in);
        if (j.contains("input"))
            base.input = j.at("input").get<std::string>();
        if (j.contains("out"))
            base.output = j.at("out").get<std::string>();
        if (j.contains("step"))
            base.concat.step = j.at("step").get<std::size_t>();
        if (j.contains("samples"))
            base.sampling.target_count = j.at("samples").get<std::size_t>();
        if (j.contains("elimination_exponent"))
            base.sampling.elimination_exponent = j.at("elimination_exponent").get<double>();
        if (j.contains("outlier_k"))
            base.outliers.k_neighbors = j.at("outlier_k").get<std::size_t>();
        if (j.contains("outlier_std_ratio"))
            base.outliers.std_ratio = j.at("outlier_std_ratio").get<double>();
        if (j.contains("radius"))
            base.contour.radius = j.at("radius").get<double>();
        if (j.contains("threshold"))
            base.contour.angle_threshold = j.at("threshold").get<double>();
        if (j.contains("height"))
            base.gauge.clearance_height = j.at("height").get<double>();
        if (j.contains("ground_slack"))
            base.gauge.ground_slack = j.at("ground_slack").get<double>();
        if (j.contains("ring_split_factor"))
        {
            const auto& f = j.at("ring_split_factor");
            base.gauge.ring_split_factor = f.is_string() && f.get<std::string>() == "inf"
                                               ? std::numeric_limits<double>::infinity()
                                               : f.get<double>();
        }
        if (j.contains("threads"))
            base.threads = j.at("threads").get<unsigned>();
        if (j.contains("annotate"))
        {
            const auto& a = j.at("annotate");
            if (a.is_array())
            {
                base.annotate = AnnotationPolicy::ExplicitFrames;
                base.annotate_frames = a.get<std::vector<std::size_t>>();
            }
            else if (a.get<std::string>() == "selected")
                base.annotate = AnnotationPolicy::SelectedFrames;
            else if (a.get<std::string>() == "none")
                base.annotate = AnnotationPolicy::None;
            else
                throw PipelineError("config", "annotate must be \"selected\", \"none\" or a list of frames");
        }
    }
    catch (const nlohmann::json::exception& e)
    {
        throw PipelineError("config", std::string(path.string()) + ": " + e.what());
    }
    return base;
}

namespace {

using Clock = std::chrono::steady_clock;

class StageRunner
{
  public:
    explicit StageRunner(std::vector<StageTiming>& timings) : timings_(timings) {}

    template <typename Fn>
    auto operator()(const std::string& stage, Fn&& fn) -> decltype(fn())
    {
        const auto start = Clock::now();
        try
        {
            if constexpr (std::is_void_v<decltype(fn())>)
            {
                fn();
                record(stage, start);
            }
            else
            {
                auto result = fn();
                record(stage, start);
                return result;
            }
        }
        catch (const PipelineError&)
        {
            throw;
        }
        catch (const std::exception& e)
        {
            throw PipelineError(stage, e.what());
        }
    }

  private:
    void record(const std::string& stage, Clock::time_point start)
    {
        timings_.push_back({stage, std::chrono::duration<double>(Clock::now() - start).count()});
    }

    std::vector<StageTiming>& timings_;
};

std::map<std::string, double> parameters_of(const PipelineConfig& cfg)
{
    return {{"step", static_cast<double>(cfg.concat.step)},
            {"samples", static_cast<double>(cfg.sampling.target_count)},
            {"elimination_exponent", cfg.sampling.elimination_exponent},
            {"outlier_k", static_cast<double>(cfg.outliers.k_neighbors)},
            {"outlier_std_ratio", cfg.outliers.std_ratio},
            {"radius", cfg.contour.radius},
            {"threshold", cfg.contour.angle_threshold},
            {"height", cfg.gauge.clearance_height},
            {"ground_slack", cfg.gauge.ground_slack},
            {"ring_split_factor", cfg.gauge.ring_split_factor},
            {"threads", static_cast<double>(cfg.threads == 0 ? ThreadLimit::default_threads() : cfg.threads)}};
}

} // namespace

PipelineResult analyze_sequence(const Sequence& sequence, const PipelineConfig& cfg)
{
    try
    {
        cfg.validate();
    }
    catch (const std::exception& e)
    {
        throw PipelineError("config", e.what());
    }
    const ThreadLimit limit(cfg.threads);
    const auto start = Clock::now();

    PipelineResult result;
    ClearanceReport& report = result.report;
    report.sequence_id = sequence.sequence_id;
    report.parameters = parameters_of(cfg);
    StageRunner stage(report.timings);

    const LabeledPointCloud world = stage("concatenate", [&] { return concatenate(sequence, cfg.concat); });
    for (const auto pos : select_frame_indices(sequence.frames.size(), cfg.concat.step))
        result.selected_frames.push_back(sequence.frame_index_at(pos));
    report.frames_concatenated = result.selected_frames.size();
    report.total_points = world.size();

    const LabeledPointCloud road = stage("filter_road", [&] {
        auto r = filter_class(world, SemanticClass::Road);
        if (r.empty())
            throw PipelineError("filter_road", "no road points after filtering");
        return r;
    });
    report.road_points = road.size();

    const LabeledPointCloud road_clean =
        stage("outlier_removal", [&] { return remove_statistical_outliers(road, cfg.outliers); });
    report.road_points_after_outliers = road_clean.size();

    result.samples = stage("sampling", [&] { return poisson_downsample(road_clean, cfg.sampling); });
    report.samples = result.samples.size();

    result.contours = stage("contour_detection", [&] { return detect_contours(result.samples, cfg.contour); });
    report.contour_points = result.contours.size();

    result.polygon = stage("polygon", [&] {
        auto poly = order_contour(result.contours, cfg.gauge);
        if (poly.empty())
        {
            throw PipelineError("polygon", "no contour polygon could be formed from " +
                                               std::to_string(result.contours.size()) + " contour points");
        }
        return poly;
    });
    report.polygon_rings = result.polygon.rings.size();
    report.discarded_contour_points = result.polygon.discarded.size();
    report.warnings = result.polygon.warnings;

    const LabeledPointCloud vegetation =
        stage("filter_vegetation", [&] { return filter_class(world, SemanticClass::Vegetation); });
    report.vegetation_points = vegetation.size();

    result.inliers = stage("classification", [&] {
        const PlanarIndex ground = build_index(result.samples);
        return classify_vegetation_inliers(vegetation, result.polygon, ground, cfg.gauge).inliers;
    });
    report.vegetation_inliers = result.inliers.size();
    report.inliers = result.inliers.points();

    switch (cfg.annotate)
    {
    case AnnotationPolicy::SelectedFrames:
        result.annotated_frames = result.selected_frames;
        break;
    case AnnotationPolicy::ExplicitFrames:
        result.annotated_frames = cfg.annotate_frames;
        break;
    case AnnotationPolicy::None:
        break;
    }
    result.hits = stage("projection", [&] { return project_points(sequence, result.inliers, result.annotated_frames); });
    report.pixel_hits = result.hits.size();

    report.timings.push_back({"analysis_total", std::chrono::duration<double>(Clock::now() - start).count()});
    return result;
}

namespace {

// Moves every file below `from` to the same relative place below `to`.
void publish_tree(const fs::path& from, const fs::path& to)
{
    for (const auto& entry : fs::recursive_directory_iterator(from))
    {
        if (!entry.is_regular_file())
            continue;
        const fs::path target = to / fs::relative(entry.path(), from);
        fs::create_directories(target.parent_path());
        fs::rename(entry.path(), target);
    }
}

std::string staging_name()
{
    std::random_device rd;
    char buf[32];
    std::snprintf(buf, sizeof(buf), ".staging-%08x", rd());
    return buf;
}

} // namespace

ClearanceReport run_pipeline(const PipelineConfig& cfg)
{
    const auto start = Clock::now();
    if (cfg.input.empty())
        throw PipelineError("config", "no input directory given");
    if (cfg.output.empty())
        throw PipelineError("config", "no output directory given");

    std::vector<StageTiming> load_timing;
    StageRunner stage(load_timing);
    const Sequence sequence = stage("load", [&] { return load_sequence(cfg.input); });

    PipelineResult result = analyze_sequence(sequence, cfg);
    ClearanceReport& report = result.report;
    report.timings.insert(report.timings.begin(), load_timing.begin(), load_timing.end());

    const bool output_existed = fs::exists(cfg.output);
    const fs::path staging = cfg.output / staging_name();
    try
    {
        stage("write_outputs", [&] {
            fs::create_directories(staging);
            const int veg_id = sequence.label_map.id_for(SemanticClass::Vegetation).value_or(-1);
            const std::vector<int> labels(result.inliers.size(), veg_id);
            write_xyzl(staging / "inliers.xyzl", result.inliers.points(), labels);
            render_overlays(sequence, result.hits, result.annotated_frames, staging);
        });
        report.timings.insert(report.timings.end(), load_timing.end() - 1, load_timing.end());
        report.timings.push_back({"total", std::chrono::duration<double>(Clock::now() - start).count()});
        stage("write_outputs", [&] {
            write_report_json(staging / "report.json", report);
            publish_tree(staging, cfg.output);
            fs::remove_all(staging);
        });
    }
    catch (...)
    {
        std::error_code ec;
        fs::remove_all(staging, ec);
        if (!output_existed)
            fs::remove_all(cfg.output, ec);
        throw;
    }
    return report;
}

std::optional<SweepParameter> parse_sweep_parameter(std::string_view name)
{
    if (name == "step")
        return SweepParameter::Step;
    if (name == "samples")
        return SweepParameter::Samples;
    if (name == "radius")
        return SweepParameter::Radius;
    if (name == "threshold")
        return SweepParameter::Threshold;
    return std::nullopt;
}

std::string_view to_string(SweepParameter p)
{
    switch (p)
    {
    case SweepParameter::Step:
        return "step";
    case SweepParameter::Samples:
        return "samples";
    case SweepParameter::Radius:
        return "radius";
    case SweepParameter::Threshold:
        return "threshold";
    }
    return "step";
}

namespace {

std::size_t as_count(double v, std::string_view what)
{
    if (!(v >= 1.0) || v != std::floor(v) || v > 1e15)
        throw std::invalid_argument(std::string(what) + " must be a positive integer");
    return static_cast<std::size_t>(v);
}

} // namespace

SweepTable run_sweep(const Sequence& sequence, const PipelineConfig& cfg, SweepParameter parameter,
                     std::span<const double> values)
{
    SweepTable table;
    table.parameter = parameter;
    for (const double v : values)
    {
        SweepRow row;
        row.value = v;
        try
        {
            PipelineConfig run = cfg;
            switch (parameter)
            {
            case SweepParameter::Step:
                run.concat.step = as_count(v, "step");
                break;
            case SweepParameter::Samples:
                run.sampling.target_count = as_count(v, "samples");
                break;
            case SweepParameter::Radius:
                run.contour.radius = v;
                break;
            case SweepParameter::Threshold:
                run.contour.angle_threshold = v;
                break;
            }
            row.report = analyze_sequence(sequence, run).report;
        }
        catch (const std::exception& e)
        {
            row.error = e.what();
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

SweepTable run_sweep(const PipelineConfig& cfg, SweepParameter parameter, std::span<const double> values)
{
    if (cfg.input.empty())
        throw PipelineError("config", "no input directory given");
    Sequence sequence;
    try
    {
        sequence = load_sequence(cfg.input);
    }
    catch (const std::exception& e)
    {
        throw PipelineError("load", e.what());
    }
    SweepTable table = run_sweep(sequence, cfg, parameter, values);
    if (!cfg.output.empty())
    {
        fs::create_directories(cfg.output);
        std::ofstream out(cfg.output / "sweep.csv", std::ios::binary | std::ios::trunc);
        if (!out)
            throw PipelineError("write_outputs", "cannot write " + (cfg.output / "sweep.csv").string());
        out << sweep_to_csv(table);
    }
    return table;
}

std::string sweep_to_csv(const SweepTable& table)
{
    static const char* const kTimedStages[] = {"concatenate",       "filter_road", "outlier_removal",
                                               "sampling",          "contour_detection", "polygon",
                                               "filter_vegetation", "classification",    "projection",
                                               "analysis_total"};
    std::ostringstream out;
    out << "parameter,value,frames,total_points,road_points,road_points_after_outliers,samples,contour_points,"
           "polygon_rings,vegetation_points,vegetation_inliers,pixel_hits";
    for (const char* s : kTimedStages)
        out << ",t_" << s;
    out << ",error\n";

    for (const auto& row : table.rows)
    {
        out << to_string(table.parameter) << ',' << format_double(row.value);
        if (row.report)
        {
            const auto& r = *row.report;
            out << ',' << r.frames_concatenated << ',' << r.total_points << ',' << r.road_points << ','
                << r.road_points_after_outliers << ',' << r.samples << ',' << r.contour_points << ','
                << r.polygon_rings << ',' << r.vegetation_points << ',' << r.vegetation_inliers << ','
                << r.pixel_hits;
            for (const char* s : kTimedStages)
            {
                char buf[32];
                std::snprintf(buf, sizeof(buf), ",%.6f", r.timing(s));
                out << buf;
            }
            out << ",\n";
        }
        else
        {
            for (std::size_t i = 0; i < 10 + std::size(kTimedStages); ++i)
                out << ',';
            std::string quoted = "\"";
            for (const char c : row.error)
            {
                if (c == '"')
                    quoted += "\"\"";
                else if (c != '\n')
                    quoted += c;
            }
            quoted += '"';
            out << ',' << quoted << '\n';
        }
    }
    return out.str();
}

} // namespace clearance
