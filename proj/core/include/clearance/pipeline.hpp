// Copyright 2026 The Clearance Authors
// SPDX-License-Identifier: Apache-2.0
//
// End-to-end clearance analysis and parameter sweeps.
//
//   load -> concatenate -> filter(road) -> outlier removal -> sampling
//        -> contour detection -> ring ordering -> filter(vegetation)
//        -> gauge classification -> projection -> overlays

#ifndef CLEARANCE_PIPELINE_HPP_
#define CLEARANCE_PIPELINE_HPP_

#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "clearance/aggregate.hpp"
#include "clearance/contour.hpp"
#include "clearance/gauge.hpp"
#include "clearance/ingest.hpp"
#include "clearance/preprocess.hpp"
#include "clearance/project.hpp"

namespace clearance {

/// A failure inside one pipeline stage; what() reads "<stage>: <message>".
class PipelineError : public std::runtime_error
{
  public:
    PipelineError(std::string stage, const std::string& message);
    const std::string& stage() const noexcept { return stage_; }

  private:
    std::string stage_;
};

enum class AnnotationPolicy : std::uint8_t {
    SelectedFrames, // frames picked by the concatenation step
    ExplicitFrames, // PipelineConfig::annotate_frames
    None,
};

struct PipelineConfig
{
    std::filesystem::path input;
    std::filesystem::path output;
    ConcatConfig concat;
    OutlierConfig outliers;
    SamplingConfig sampling;
    ContourConfig contour;
    GaugeConfig gauge;
    AnnotationPolicy annotate{AnnotationPolicy::SelectedFrames};
    std::vector<std::size_t> annotate_frames;
    unsigned threads{0}; // 0: one per logical CPU

    void validate() const;
};

/// Reads a JSON config file on top of `base`. Recognised keys: input, out,
/// step, samples, elimination_exponent, outlier_k, outlier_std_ratio,
/// radius, threshold, height, ground_slack, ring_split_factor, threads,
/// annotate ("selected", "none" or a list of frame indices).
PipelineConfig load_pipeline_config(const std::filesystem::path& path, PipelineConfig base = {});

struct PipelineResult
{
    ClearanceReport report;
    std::vector<std::size_t> selected_frames; // frame indices
    LabeledPointCloud samples;
    LabeledPointCloud contours;
    ContourPolygon polygon;
    LabeledPointCloud inliers;
    std::vector<PixelHit> hits;
    std::vector<std::size_t> annotated_frames;
};

/// In-memory analysis of a loaded sequence; no files are touched.
PipelineResult analyze_sequence(const Sequence& sequence, const PipelineConfig& cfg);

/// Loads cfg.input, analyzes it and writes report.json, inliers.xyzl,
/// annotations/ and overlays/ under cfg.output. On failure every file this
/// run created is removed and a PipelineError is thrown.
ClearanceReport run_pipeline(const PipelineConfig& cfg);

enum class SweepParameter : std::uint8_t { Step, Samples, Radius, Threshold };

std::optional<SweepParameter> parse_sweep_parameter(std::string_view name);
std::string_view to_string(SweepParameter p);

struct SweepRow
{
    double value{0.0};
    std::optional<ClearanceReport> report; // absent when the run failed
    std::string error;
};

struct SweepTable
{
    SweepParameter parameter{SweepParameter::Step};
    std::vector<SweepRow> rows;
};

/// One analysis per value on the already loaded sequence. Errors are
/// recorded in their row and the sweep continues.
SweepTable run_sweep(const Sequence& sequence, const PipelineConfig& cfg, SweepParameter parameter,
                     std::span<const double> values);

/// Loads cfg.input once, sweeps, and writes cfg.output/sweep.csv.
SweepTable run_sweep(const PipelineConfig& cfg, SweepParameter parameter, std::span<const double> values);

std::string sweep_to_csv(const SweepTable& table);

} // namespace clearance

#endif // CLEARANCE_PIPELINE_HPP_
