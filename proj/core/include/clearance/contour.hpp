// Copyright 2026 The Clearance Authors
// SPDX-License-Identifier: Apache-2.0
//
// Road boundary detection by angular gaps.
//
// For a sample point P, take every other sample within `radius` in the xy
// plane and the direction vectors from P to them. Sorted by azimuth, the
// directions split the full turn into gaps that sum to 360 degrees. A point
// deep inside the road is surrounded by neighbours and every gap is small;
// on the boundary one side is empty and one gap is large. P is a contour
// point when its largest gap strictly exceeds `angle_threshold`. A point
// with a single neighbour is always a contour point, an isolated one never.

#ifndef CLEARANCE_CONTOUR_HPP_
#define CLEARANCE_CONTOUR_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "clearance/kdtree.hpp"
#include "clearance/types.hpp"

namespace clearance {

struct ContourConfig
{
    double radius{6.0};           // meters
    double angle_threshold{90.0}; // degrees

    void validate() const;
};

/// Spatial index over the (x, y) projection of a fixed point set. The
/// original 3D points stay available, so the z of a hit can be read back.
class PlanarIndex
{
  public:
    PlanarIndex() = default;
    explicit PlanarIndex(std::vector<Point3> points);

    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }
    const Point3& point(std::size_t position) const { return points_[position]; }
    const std::vector<Point3>& points() const noexcept { return points_; }

    /// Positions with xy-distance <= r from q, ascending.
    std::vector<std::size_t> radius_query(const Vec2& q, double r) const;

    /// Like radius_query around indexed point `position`, without that position.
    std::vector<std::size_t> neighbors_of(std::size_t position, double r) const;

    /// xy-nearest position (ties: lowest position); nullopt when empty.
    std::optional<std::size_t> nearest(const Vec2& q) const;

  private:
    std::vector<Point3> points_;
    KdTree<2> tree_;
};

PlanarIndex build_index(const LabeledPointCloud& points);

/// Indexed points within r of the point at `position`, excluding itself.
std::vector<Point3> radius_neighbors(const PlanarIndex& index, std::size_t position, double r);

/// Gaps between consecutive neighbour azimuths around p, in degrees, in
/// ascending azimuth order with the wraparound gap last. Requires at least
/// two neighbours, none coincident with p in xy.
std::vector<double> angular_gaps(const Point3& p, std::span<const Point3> neighbors);

/// Largest of angular_gaps, in degrees.
double max_angular_gap(const Point3& p, std::span<const Point3> neighbors);

bool is_contour_point(std::size_t position, const PlanarIndex& index, const ContourConfig& cfg);

/// Row positions of `samples` that are contour points, ascending.
std::vector<std::size_t> contour_rows(const LabeledPointCloud& samples, const ContourConfig& cfg);

/// Contour points of `samples`, input order preserved.
LabeledPointCloud detect_contours(const LabeledPointCloud& samples, const ContourConfig& cfg);

} // namespace clearance

#endif // CLEARANCE_CONTOUR_HPP_
