// Copyright 2026 The Clearance Authors
// SPDX-License-Identifier: Apache-2.0

#include "clearance/contour.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "clearance/parallel.hpp"

namespace clearance {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;

std::vector<KdTree<2>::Coord> planar_coords(const std::vector<Point3>& points)
{
    std::vector<KdTree<2>::Coord> coords(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
        coords[i] = {points[i].x(), points[i].y()};
    return coords;
}

// Gaps in radians between sorted azimuths; the wraparound gap is last.
std::vector<double> gaps_radians(const Point3& p, std::span<const Point3> neighbors)
{
    std::vector<double> azimuths;
    azimuths.reserve(neighbors.size());
    for (const auto& n : neighbors)
    {
        const double dx = n.x() - p.x();
        const double dy = n.y() - p.y();
        if (dx == 0.0 && dy == 0.0)
            throw std::invalid_argument("angular gap: neighbour coincides with the query point in xy");
        azimuths.push_back(std::atan2(dy, dx));
    }
    if (azimuths.size() < 2)
        throw std::invalid_argument("angular gap: at least two neighbours required");
    std::sort(azimuths.begin(), azimuths.end());

    std::vector<double> gaps(azimuths.size());
    for (std::size_t i = 0; i + 1 < azimuths.size(); ++i)
        gaps[i] = azimuths[i + 1] - azimuths[i];
    gaps.back() = kTwoPi - (azimuths.back() - azimuths.front());
    return gaps;
}

double max_gap_radians(const Point3& p, std::span<const Point3> neighbors)
{
    const auto gaps = gaps_radians(p, neighbors);
    return *std::max_element(gaps.begin(), gaps.end());
}

} // namespace

void ContourConfig::validate() const
{
    if (!(radius > 0.0))
        throw std::invalid_argument("contour radius must be > 0");
    if (!(angle_threshold > 0.0 && angle_threshold < 360.0))
        throw std::invalid_argument("contour angle_threshold must lie in (0, 360) degrees");
}

PlanarIndex::PlanarIndex(std::vector<Point3> points) : points_(std::move(points)), tree_(planar_coords(points_)) {}

std::vector<std::size_t> PlanarIndex::radius_query(const Vec2& q, double r) const
{
    return tree_.radius_search({q.x(), q.y()}, r);
}

std::vector<std::size_t> PlanarIndex::neighbors_of(std::size_t position, double r) const
{
    auto hits = tree_.radius_search(tree_.coord(position), r);
    hits.erase(std::remove(hits.begin(), hits.end(), position), hits.end());
    return hits;
}

std::optional<std::size_t> PlanarIndex::nearest(const Vec2& q) const
{
    return tree_.nearest({q.x(), q.y()});
}

PlanarIndex build_index(const LabeledPointCloud& points)
{
    return PlanarIndex(points.points());
}

std::vector<Point3> radius_neighbors(const PlanarIndex& index, std::size_t position, double r)
{
    if (!(r > 0.0))
        throw std::invalid_argument("radius_neighbors: radius must be > 0");
    std::vector<Point3> out;
    for (const auto i : index.neighbors_of(position, r))
        out.push_back(index.point(i));
    return out;
}

std::vector<double> angular_gaps(const Point3& p, std::span<const Point3> neighbors)
{
    auto gaps = gaps_radians(p, neighbors);
    for (auto& g : gaps)
        g *= kRadToDeg;
    return gaps;
}

double max_angular_gap(const Point3& p, std::span<const Point3> neighbors)
{
    return max_gap_radians(p, neighbors) * kRadToDeg;
}

bool is_contour_point(std::size_t position, const PlanarIndex& index, const ContourConfig& cfg)
{
    const Point3& p = index.point(position);
    std::vector<Point3> usable;
    for (const auto i : index.neighbors_of(position, cfg.radius))
    {
        const Point3& n = index.point(i);
        if (n.x() != p.x() || n.y() != p.y())
            usable.push_back(n);
    }
    if (usable.empty())
        return false;
    if (usable.size() == 1)
        return true;
    const double threshold = cfg.angle_threshold / kRadToDeg;
    return max_gap_radians(p, usable) > threshold;
}

std::vector<std::size_t> contour_rows(const LabeledPointCloud& samples, const ContourConfig& cfg)
{
    cfg.validate();
    const PlanarIndex index = build_index(samples);
    std::vector<char> flags(samples.size(), 0);
    parallel_for(samples.size(), [&](std::size_t i) { flags[i] = is_contour_point(i, index, cfg) ? 1 : 0; });

    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < flags.size(); ++i)
    {
        if (flags[i])
            rows.push_back(i);
    }
    return rows;
}

LabeledPointCloud detect_contours(const LabeledPointCloud& samples, const ContourConfig& cfg)
{
    if (samples.frame() != CoordinateFrame::World)
        throw std::invalid_argument("detect_contours: samples must be in the world frame");
    return samples.select(contour_rows(samples, cfg));
}

} // namespace clearance
