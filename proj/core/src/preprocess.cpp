// Copyright 2026 The Clearance Authors
// SPDX-License-Identifier: Apache-2.0

#include "clearance/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "clearance/kdtree.hpp"
#include "clearance/parallel.hpp"

namespace clearance {

void OutlierConfig::validate() const
{
    if (k_neighbors < 1)
        throw std::invalid_argument("outlier k_neighbors must be >= 1");
    if (!(std_ratio > 0.0))
        throw std::invalid_argument("outlier std_ratio must be > 0");
}

void SamplingConfig::validate() const
{
    if (target_count < 1)
        throw std::invalid_argument("sampling target_count must be >= 1");
    if (!(elimination_exponent > 0.0))
        throw std::invalid_argument("sampling elimination_exponent must be > 0");
}

LabeledPointCloud filter_class(const LabeledPointCloud& cloud, SemanticClass c)
{
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < cloud.size(); ++i)
    {
        if (cloud.classes()[i] == c)
            rows.push_back(i);
    }
    return cloud.select(rows);
}

std::vector<std::size_t> statistical_inlier_rows(const LabeledPointCloud& cloud, const OutlierConfig& cfg)
{
    cfg.validate();
    const std::size_t n = cloud.size();
    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    if (n <= cfg.k_neighbors)
        return rows;

    std::vector<KdTree<3>::Coord> coords(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        const auto& p = cloud.points()[i];
        coords[i] = {p.x(), p.y(), p.z()};
    }
    const KdTree<3> tree(std::move(coords));

    std::vector<double> mean_dist(n);
    parallel_for(n, [&](std::size_t i) {
        const auto nn = tree.knn(tree.coord(i), cfg.k_neighbors, i);
        double s = 0.0;
        for (const auto& nb : nn)
            s += std::sqrt(nb.squared_distance);
        mean_dist[i] = s / static_cast<double>(nn.size());
    });

    double sum = 0.0;
    for (const double d : mean_dist)
        sum += d;
    const double mean = sum / static_cast<double>(n);
    double sq = 0.0;
    for (const double d : mean_dist)
        sq += (d - mean) * (d - mean);
    const double stddev = std::sqrt(sq / static_cast<double>(n - 1));
    const double threshold = mean + cfg.std_ratio * stddev;

    rows.clear();
    for (std::size_t i = 0; i < n; ++i)
    {
        if (!(mean_dist[i] > threshold))
            rows.push_back(i);
    }
    return rows;
}

LabeledPointCloud remove_statistical_outliers(const LabeledPointCloud& cloud, const OutlierConfig& cfg)
{
    const auto rows = statistical_inlier_rows(cloud, cfg);
    if (rows.size() == cloud.size())
        return cloud;
    return cloud.select(rows);
}

double planar_bounding_area(std::span<const Point3> points)
{
    if (points.empty())
        return 0.0;
    double min_x = points[0].x(), max_x = min_x, min_y = points[0].y(), max_y = min_y;
    for (const auto& p : points)
    {
        min_x = std::min(min_x, p.x());
        max_x = std::max(max_x, p.x());
        min_y = std::min(min_y, p.y());
        max_y = std::max(max_y, p.y());
    }
    return (max_x - min_x) * (max_y - min_y);
}

double poisson_disk_radius(double area, std::size_t count)
{
    return std::sqrt(area / (2.0 * std::sqrt(3.0) * static_cast<double>(count)));
}

double elimination_radius(std::span<const Point3> points, std::size_t target_count)
{
    const double area = planar_bounding_area(points);
    if (area > 0.0)
        return poisson_disk_radius(area, target_count);

    double extent = 0.0;
    if (!points.empty())
    {
        double min_x = points[0].x(), max_x = min_x, min_y = points[0].y(), max_y = min_y;
        for (const auto& p : points)
        {
            min_x = std::min(min_x, p.x());
            max_x = std::max(max_x, p.x());
            min_y = std::min(min_y, p.y());
            max_y = std::max(max_y, p.y());
        }
        extent = std::hypot(max_x - min_x, max_y - min_y);
    }
    if (extent > 0.0)
        return extent / (2.0 * static_cast<double>(target_count));
    return 1.0;
}

namespace {

// Binary max-heap over row ids keyed by weight, with decrease-key. Heaviest
// first; among equal weights the larger row comes first.
class EliminationHeap
{
  public:
    explicit EliminationHeap(const std::vector<double>& weights) : weights_(weights), slot_(weights.size())
    {
        heap_.resize(weights.size());
        std::iota(heap_.begin(), heap_.end(), std::size_t{0});
        for (std::size_t i = 0; i < heap_.size(); ++i)
            slot_[i] = i;
        for (std::size_t i = heap_.size() / 2; i-- > 0;)
            sift_down(i);
    }

    std::size_t pop()
    {
        const std::size_t top = heap_.front();
        move_to(0, heap_.back());
        heap_.pop_back();
        if (!heap_.empty())
            sift_down(0);
        return top;
    }

    // Call after weights[row] decreased.
    void decreased(std::size_t row) { sift_down(slot_[row]); }

  private:
    bool before(std::size_t a, std::size_t b) const
    {
        if (weights_[a] != weights_[b])
            return weights_[a] > weights_[b];
        return a > b;
    }

    void move_to(std::size_t pos, std::size_t row)
    {
        heap_[pos] = row;
        slot_[row] = pos;
    }

    void sift_down(std::size_t pos)
    {
        const std::size_t row = heap_[pos];
        const std::size_t n = heap_.size();
        while (true)
        {
            std::size_t best = pos;
            std::size_t best_row = row;
            for (std::size_t c = 2 * pos + 1; c <= 2 * pos + 2 && c < n; ++c)
            {
                if (before(heap_[c], best_row))
                {
                    best = c;
                    best_row = heap_[c];
                }
            }
            if (best == pos)
                break;
            move_to(pos, best_row);
            pos = best;
        }
        move_to(pos, row);
    }

    const std::vector<double>& weights_;
    std::vector<std::size_t> heap_;
    std::vector<std::size_t> slot_;
};

} // namespace

std::vector<std::size_t> sample_elimination_rows(const LabeledPointCloud& cloud, const SamplingConfig& cfg)
{
    cfg.validate();
    const std::size_t n = cloud.size();
    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    if (n <= cfg.target_count)
        return rows;

    const double r_max = elimination_radius(cloud.points(), cfg.target_count);
    const double reach = 2.0 * r_max;
    const double reach2 = reach * reach;
    const double alpha = cfg.elimination_exponent;
    const bool integral = alpha == std::floor(alpha) && alpha <= 64.0;
    const auto power = static_cast<unsigned>(alpha);
    auto weight_of = [&](double d2) {
        if (d2 >= reach2)
            return 0.0;
        const double base = 1.0 - std::sqrt(d2) / reach;
        if (!integral)
            return std::pow(base, alpha);
        double w = 1.0, b = base;
        for (unsigned e = power; e != 0; e >>= 1)
        {
            if (e & 1U)
                w *= b;
            b *= b;
        }
        return w;
    };

    std::vector<KdTree<2>::Coord> coords(n);
    for (std::size_t i = 0; i < n; ++i)
        coords[i] = {cloud.points()[i].x(), cloud.points()[i].y()};
    const KdTree<2> tree(std::move(coords));

    // Sums run in tree order, which depends only on the input.
    std::vector<double> weights(n, 0.0);
    parallel_for(n, [&](std::size_t i) {
        double w = 0.0;
        tree.radius_visit(tree.coord(i), reach, [&](std::size_t j, double d2) {
            if (j != i)
                w += weight_of(d2);
        });
        weights[i] = w;
    });

    EliminationHeap heap(weights);
    std::vector<char> alive(n, 1);
    std::size_t remaining = n;
    while (remaining > cfg.target_count)
    {
        const std::size_t removed = heap.pop();
        alive[removed] = 0;
        --remaining;
        // every neighbour loses exactly one term, so visiting order is free
        tree.radius_visit(tree.coord(removed), reach, [&](std::size_t j, double d2) {
            if (!alive[j])
                return;
            const double w = weight_of(d2);
            if (w == 0.0)
                return;
            weights[j] -= w;
            heap.decreased(j);
        });
    }

    rows.clear();
    for (std::size_t i = 0; i < n; ++i)
    {
        if (alive[i])
            rows.push_back(i);
    }
    return rows;
}

LabeledPointCloud poisson_downsample(const LabeledPointCloud& cloud, const SamplingConfig& cfg)
{
    if (cloud.empty())
        throw std::invalid_argument("poisson_downsample: empty cloud");
    const auto rows = sample_elimination_rows(cloud, cfg);
    if (rows.size() == cloud.size())
        return cloud;
    return cloud.select(rows);
}

} // namespace clearance
