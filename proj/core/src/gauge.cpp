// Copyright 2026 The Clearance Authors
// SPDX-License-Identifier: Apache-2.0

#include "clearance/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "clearance/parallel.hpp"

namespace clearance {

void GaugeConfig::validate() const
{
    if (!(clearance_height > 0.0))
        throw std::invalid_argument("clearance_height must be > 0");
    if (!(ground_slack >= 0.0))
        throw std::invalid_argument("ground_slack must be >= 0");
    if (!(ring_split_factor > 0.0))
        throw std::invalid_argument("ring_split_factor must be > 0");
}

std::size_t ContourPolygon::vertex_count() const noexcept
{
    std::size_t n = 0;
    for (const auto& r : rings)
        n += r.size();
    return n;
}

namespace {

bool lex_less(const Vec2& a, std::size_t ia, const Vec2& b, std::size_t ib)
{
    if (a.x() != b.x())
        return a.x() < b.x();
    if (a.y() != b.y())
        return a.y() < b.y();
    return ia < ib;
}

double median_positive_nn_distance(const std::vector<Vec2>& xy)
{
    std::vector<KdTree<2>::Coord> coords(xy.size());
    for (std::size_t i = 0; i < xy.size(); ++i)
        coords[i] = {xy[i].x(), xy[i].y()};
    const KdTree<2> tree(std::move(coords));

    std::vector<double> d;
    d.reserve(xy.size());
    for (std::size_t i = 0; i < xy.size(); ++i)
    {
        // nearest distinct location: skip exact duplicates
        for (const auto& nb : tree.knn(tree.coord(i), std::min<std::size_t>(xy.size() - 1, 8), i))
        {
            if (nb.squared_distance > 0.0)
            {
                d.push_back(std::sqrt(nb.squared_distance));
                break;
            }
        }
    }
    if (d.empty())
        return 0.0;
    std::sort(d.begin(), d.end());
    const std::size_t m = d.size();
    return m % 2 == 1 ? d[m / 2] : 0.5 * (d[m / 2 - 1] + d[m / 2]);
}

double cross(const Vec2& o, const Vec2& a, const Vec2& b)
{
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& q)
{
    if (cross(a, b, q) != 0.0)
        return false;
    return std::min(a.x(), b.x()) <= q.x() && q.x() <= std::max(a.x(), b.x()) && std::min(a.y(), b.y()) <= q.y() &&
           q.y() <= std::max(a.y(), b.y());
}

int sign(double v) { return (v > 0.0) - (v < 0.0); }

bool segments_touch(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d)
{
    const int d1 = sign(cross(c, d, a));
    const int d2 = sign(cross(c, d, b));
    const int d3 = sign(cross(a, b, c));
    const int d4 = sign(cross(a, b, d));
    if (d1 * d2 < 0 && d3 * d4 < 0)
        return true;
    return (d1 == 0 && on_segment(c, d, a)) || (d2 == 0 && on_segment(c, d, b)) ||
           (d3 == 0 && on_segment(a, b, c)) || (d4 == 0 && on_segment(a, b, d));
}

} // namespace

ContourPolygon order_contour(const LabeledPointCloud& contour_points, const GaugeConfig& cfg)
{
    cfg.validate();
    ContourPolygon polygon;
    const std::size_t m = contour_points.size();

    std::vector<Vec2> xy(m);
    for (std::size_t i = 0; i < m; ++i)
        xy[i] = planar(contour_points.points()[i]);
    auto vertex = [&](std::size_t i) { return RingVertex{xy[i], contour_points.points()[i].z(), i}; };

    if (m < 3)
    {
        polygon.warnings.push_back("fewer than 3 contour points (" + std::to_string(m) + "), polygon is empty");
        for (std::size_t i = 0; i < m; ++i)
            polygon.discarded.push_back(vertex(i));
        return polygon;
    }

    if (std::isfinite(cfg.ring_split_factor))
    {
        const double median = median_positive_nn_distance(xy);
        if (median > 0.0)
            polygon.split_distance = cfg.ring_split_factor * median;
    }
    const double split2 = polygon.split_distance * polygon.split_distance;

    std::vector<char> visited(m, 0);
    std::size_t remaining = m;
    auto smallest_unvisited = [&] {
        std::size_t best = m;
        for (std::size_t i = 0; i < m; ++i)
        {
            if (!visited[i] && (best == m || lex_less(xy[i], i, xy[best], best)))
                best = i;
        }
        return best;
    };

    auto nearest_unvisited = [&](std::size_t from, double& best_d2) {
        std::size_t best = m;
        for (std::size_t i = 0; i < m; ++i)
        {
            if (visited[i])
                continue;
            const double d2 = (xy[i] - xy[from]).squaredNorm();
            if (best == m || d2 < best_d2)
            {
                best = i;
                best_d2 = d2;
            }
        }
        return best;
    };

    // Each chain grows at its tail; once the tail is stuck it grows at its
    // head, and when both ends are stuck the chain is closed.
    std::vector<std::deque<std::size_t>> chains;
    while (remaining > 0)
    {
        std::deque<std::size_t> chain;
        const std::size_t seed = smallest_unvisited();
        visited[seed] = 1;
        --remaining;
        chain.push_back(seed);
        bool at_tail = true;
        while (remaining > 0)
        {
            double d2 = 0.0;
            const std::size_t next = nearest_unvisited(at_tail ? chain.back() : chain.front(), d2);
            if (d2 > split2)
            {
                if (!at_tail)
                    break;
                at_tail = false;
                continue;
            }
            visited[next] = 1;
            --remaining;
            if (at_tail)
                chain.push_back(next);
            else
                chain.push_front(next);
        }
        chains.push_back(std::move(chain));
    }

    for (const auto& c : chains)
    {
        if (c.size() < 3)
        {
            for (const auto i : c)
                polygon.discarded.push_back(vertex(i));
            continue;
        }
        Ring ring;
        ring.reserve(c.size());
        for (const auto i : c)
            ring.push_back(vertex(i));
        polygon.rings.push_back(std::move(ring));
    }
    if (!polygon.discarded.empty())
    {
        polygon.warnings.push_back(std::to_string(polygon.discarded.size()) +
                                   " contour points discarded in chains shorter than 3");
    }
    for (std::size_t r = 0; r < polygon.rings.size(); ++r)
    {
        if (ring_self_intersects(polygon.rings[r]))
        {
            polygon.self_intersecting_rings.push_back(r);
            polygon.warnings.push_back("ring " + std::to_string(r) + " is self-intersecting");
        }
    }
    if (polygon.rings.empty())
        polygon.warnings.push_back("no ring with 3 or more vertices, polygon is empty");
    return polygon;
}

bool point_in_ring(const Ring& ring, const Vec2& q)
{
    const std::size_t n = ring.size();
    if (n < 3)
        return false;
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++)
    {
        const Vec2& a = ring[i].xy;
        const Vec2& b = ring[j].xy;
        if (on_segment(a, b, q))
            return true;
        if ((a.y() > q.y()) != (b.y() > q.y()))
        {
            const double x_cross = (b.x() - a.x()) * (q.y() - a.y()) / (b.y() - a.y()) + a.x();
            if (q.x() < x_cross)
                inside = !inside;
        }
    }
    return inside;
}

bool point_in_polygon(const ContourPolygon& polygon, const Vec2& q)
{
    return std::any_of(polygon.rings.begin(), polygon.rings.end(), [&](const Ring& r) { return point_in_ring(r, q); });
}

bool ring_self_intersects(const Ring& ring)
{
    const std::size_t n = ring.size();
    if (n < 4)
        return false;
    for (std::size_t i = 0; i < n; ++i)
    {
        const Vec2& a = ring[i].xy;
        const Vec2& b = ring[(i + 1) % n].xy;
        for (std::size_t j = i + 2; j < n; ++j)
        {
            if (i == 0 && j == n - 1)
                continue; // adjacent through the closing edge
            const Vec2& c = ring[j].xy;
            const Vec2& d = ring[(j + 1) % n].xy;
            if (segments_touch(a, b, c, d))
                return true;
        }
    }
    return false;
}

double ground_height_at(const PlanarIndex& road_samples, const Vec2& q)
{
    const auto nearest = road_samples.nearest(q);
    if (!nearest)
        throw std::invalid_argument("ground_height_at: no road samples");
    return road_samples.point(*nearest).z();
}

VegetationPartition classify_vegetation_inliers(const LabeledPointCloud& vegetation, const ContourPolygon& polygon,
                                                const PlanarIndex& road_samples, const GaugeConfig& cfg)
{
    cfg.validate();
    if (polygon.empty())
        throw std::invalid_argument("classify_vegetation_inliers: empty contour polygon");
    if (road_samples.empty())
        throw std::invalid_argument("classify_vegetation_inliers: no road samples");

    const auto& pts = vegetation.points();
    std::vector<char> inside(pts.size(), 0);
    parallel_for(pts.size(), [&](std::size_t i) {
        const Vec2 q = planar(pts[i]);
        if (!point_in_polygon(polygon, q))
            return;
        const double dz = pts[i].z() - ground_height_at(road_samples, q);
        inside[i] = (dz >= -cfg.ground_slack && dz <= cfg.clearance_height) ? 1 : 0;
    });

    std::vector<std::size_t> in_rows, out_rows;
    for (std::size_t i = 0; i < pts.size(); ++i)
        (inside[i] ? in_rows : out_rows).push_back(i);
    return {vegetation.select(in_rows), vegetation.select(out_rows)};
}

bool ClearanceReport::counts_consistent() const noexcept
{
    return vegetation_inliers <= vegetation_points && vegetation_points <= total_points;
}

double ClearanceReport::timing(const std::string& stage) const
{
    for (const auto& t : timings)
    {
        if (t.stage == stage)
            return t.seconds;
    }
    return 0.0;
}

std::string report_to_json(const ClearanceReport& report)
{
    using nlohmann::ordered_json;
    ordered_json j;
    j["sequence_id"] = report.sequence_id;
    j["counts"] = ordered_json{{"frames_concatenated", report.frames_concatenated},
                               {"total_points", report.total_points},
                               {"road_points", report.road_points},
                               {"road_points_after_outliers", report.road_points_after_outliers},
                               {"samples", report.samples},
                               {"contour_points", report.contour_points},
                               {"polygon_rings", report.polygon_rings},
                               {"discarded_contour_points", report.discarded_contour_points},
                               {"vegetation_points", report.vegetation_points},
                               {"vegetation_inliers", report.vegetation_inliers},
                               {"pixel_hits", report.pixel_hits}};
    ordered_json timings = ordered_json::object();
    for (const auto& t : report.timings)
        timings[t.stage] = t.seconds;
    j["timings_s"] = timings;
    ordered_json params = ordered_json::object();
    for (const auto& [k, v] : report.parameters)
        params[k] = v;
    j["parameters"] = params;
    j["warnings"] = report.warnings;
    return j.dump(2) + "\n";
}

void write_report_json(const std::filesystem::path& path, const ClearanceReport& report)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << report_to_json(report);
    if (!out)
        throw std::runtime_error("failed writing " + path.string());
}

} // namespace clearance
