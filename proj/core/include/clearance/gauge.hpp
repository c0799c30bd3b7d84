// Copyright 2026 The Clearance Authors
// SPDX-License-Identifier: Apache-2.0
//
// Clearance gauge: contour points are chained into polygon rings, the rings
// are extruded from the local road surface up to the clearance height, and
// vegetation points inside that volume are reported.

#ifndef CLEARANCE_GAUGE_HPP_
#define CLEARANCE_GAUGE_HPP_

#include <cstddef>
#include <filesystem>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "clearance/contour.hpp"
#include "clearance/types.hpp"

namespace clearance {

struct GaugeConfig
{
    double clearance_height{4.0};
    double ground_slack{0.2};
    /// Ring break distance in multiples of the median nearest-neighbour
    /// spacing of the contour points. Infinity disables ring splitting.
    double ring_split_factor{3.0};

    void validate() const;
};

struct RingVertex
{
    Vec2 xy;
    double z{0.0};
    std::size_t source_row{0}; // row in the contour cloud
};

using Ring = std::vector<RingVertex>; // closed implicitly: last connects to first

struct ContourPolygon
{
    std::vector<Ring> rings;
    std::vector<RingVertex> discarded; // chains shorter than 3 vertices
    double split_distance{std::numeric_limits<double>::infinity()};
    std::vector<std::size_t> self_intersecting_rings;
    std::vector<std::string> warnings;

    bool empty() const noexcept { return rings.empty(); }
    std::size_t vertex_count() const noexcept;
};

/// Greedy nearest-neighbour chaining. Starts at the lexicographically
/// smallest (x, then y) point and appends the nearest unvisited point to the
/// chain's tail. When that step would be longer than ring_split_factor *
/// median nearest-neighbour distance, growth continues from the head the
/// same way; when both ends are stuck the ring is closed and the next one
/// starts at the smallest remaining point. Chains of fewer than 3 points are
/// discarded.
ContourPolygon order_contour(const LabeledPointCloud& contour_points, const GaugeConfig& cfg);

/// Boundary-inclusive even-odd test against a single ring.
bool point_in_ring(const Ring& ring, const Vec2& q);

/// True when q is inside (or on) any ring.
bool point_in_polygon(const ContourPolygon& polygon, const Vec2& q);

/// True when two non-adjacent edges of the ring touch or cross.
bool ring_self_intersects(const Ring& ring);

/// z of the xy-nearest road sample (ties: lowest position).
double ground_height_at(const PlanarIndex& road_samples, const Vec2& q);

struct VegetationPartition
{
    LabeledPointCloud inliers;
    LabeledPointCloud outliers;
};

/// A point is an inlier when it lies inside the polygon and its height
/// above the local ground is within [-ground_slack, clearance_height].
VegetationPartition classify_vegetation_inliers(const LabeledPointCloud& vegetation, const ContourPolygon& polygon,
                                                const PlanarIndex& road_samples, const GaugeConfig& cfg);

struct StageTiming
{
    std::string stage;
    double seconds{0.0};
};

struct ClearanceReport
{
    std::string sequence_id;
    std::size_t frames_concatenated{0};
    std::size_t total_points{0};
    std::size_t road_points{0};
    std::size_t road_points_after_outliers{0};
    std::size_t samples{0};
    std::size_t contour_points{0};
    std::size_t polygon_rings{0};
    std::size_t discarded_contour_points{0};
    std::size_t vegetation_points{0};
    std::size_t vegetation_inliers{0};
    std::size_t pixel_hits{0};
    std::vector<StageTiming> timings;
    std::map<std::string, double> parameters;
    std::vector<std::string> warnings;
    std::vector<Point3> inliers;

    /// vegetation_inliers <= vegetation_points <= total_points
    bool counts_consistent() const noexcept;
    double timing(const std::string& stage) const;
};

/// Counts, timings, parameters and warnings as a JSON document (the inlier
/// coordinates go to a separate .xyzl file).
std::string report_to_json(const ClearanceReport& report);
void write_report_json(const std::filesystem::path& path, const ClearanceReport& report);

} // namespace clearance

#endif // CLEARANCE_GAUGE_HPP_
