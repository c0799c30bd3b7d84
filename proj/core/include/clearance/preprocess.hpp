// Copyright 2026 The Clearance Authors
// SPDX-License-Identifier: Apache-2.0
//
// Road cloud preparation: class filtering, statistical outlier removal and
// Poisson-disk downsampling by weighted sample elimination.

#ifndef CLEARANCE_PREPROCESS_HPP_
#define CLEARANCE_PREPROCESS_HPP_

#include <cstddef>
#include <vector>

#include "clearance/types.hpp"

namespace clearance {

struct OutlierConfig
{
    std::size_t k_neighbors{20};
    double std_ratio{2.0};

    void validate() const;
};

struct SamplingConfig
{
    std::size_t target_count{1000};
    double elimination_exponent{8.0};

    void validate() const;
};

/// Points of class `c`, order preserved.
LabeledPointCloud filter_class(const LabeledPointCloud& cloud, SemanticClass c);

/// Row positions kept by remove_statistical_outliers.
std::vector<std::size_t> statistical_inlier_rows(const LabeledPointCloud& cloud, const OutlierConfig& cfg);

/// Drops points whose mean 3D distance to their k nearest neighbours exceeds
/// mean + std_ratio * stddev of that statistic over the cloud. Clouds with
/// at most k points are returned unchanged.
LabeledPointCloud remove_statistical_outliers(const LabeledPointCloud& cloud, const OutlierConfig& cfg);

/// Area of the axis-aligned (x, y) bounding box.
double planar_bounding_area(std::span<const Point3> points);

/// Maximal Poisson-disk radius for `count` samples over `area` in the
/// plane: sqrt(area / (2*sqrt(3)*count)).
double poisson_disk_radius(double area, std::size_t count);

/// Radius used by poisson_downsample for this input. Falls back to a 1D
/// packing radius for collinear input and to 1.0 for coincident input.
double elimination_radius(std::span<const Point3> points, std::size_t target_count);

/// Row positions kept by poisson_downsample, ascending.
std::vector<std::size_t> sample_elimination_rows(const LabeledPointCloud& cloud, const SamplingConfig& cfg);

/// Weighted sample elimination in (x, y). Each point weighs
/// sum_j (1 - d_ij / (2 r_max))^exponent over neighbours closer than 2 r_max;
/// the heaviest point (ties: larger row) is removed and its neighbours'
/// weights are reduced until exactly min(target, size) points remain.
LabeledPointCloud poisson_downsample(const LabeledPointCloud& cloud, const SamplingConfig& cfg);

} // namespace clearance

#endif // CLEARANCE_PREPROCESS_HPP_
