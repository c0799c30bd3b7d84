// Copyright 2026 The Clearance Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "clearance/parallel.hpp"
#include "clearance/preprocess.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace clearance;

TEST(FilterClass, SelectsRows)
{
    const LabeledPointCloud c({Point3(0, 0, 0), Point3(1, 0, 0), Point3(2, 0, 0)},
                              {SemanticClass::Road, SemanticClass::Vegetation, SemanticClass::Road}, "c",
                              CoordinateFrame::World);
    const auto road = filter_class(c, SemanticClass::Road);
    ASSERT_EQ(road.size(), 2u);
    EXPECT_EQ(road.points()[0].x(), 0.0);
    EXPECT_EQ(road.points()[1].x(), 2.0);
    EXPECT_TRUE(filter_class(c, SemanticClass::Other).empty());
    EXPECT_EQ(filter_class(c, SemanticClass::Road).size() + filter_class(c, SemanticClass::Vegetation).size() +
                  filter_class(c, SemanticClass::Other).size(),
              c.size());
}

TEST(StatisticalOutliers, GridPlusFarPoint)
{
    auto pts = fixtures::grid(10, 10, 1.0);
    pts.emplace_back(50.0, 50.0, 0.0);
    const auto cloud = fixtures::world_cloud(pts);
    const OutlierConfig cfg{5, 2.0};

    const auto mean_d = oracle::knn_mean_distance(fixtures::to_p3(pts), 5);
    const double mu = std::accumulate(mean_d.begin(), mean_d.end(), 0.0) / mean_d.size();
    double ss = 0;
    for (double d : mean_d)
        ss += (d - mu) * (d - mu);
    const double threshold = mu + 2.0 * std::sqrt(ss / (mean_d.size() - 1));
    std::vector<std::size_t> expected;
    for (std::size_t i = 0; i < mean_d.size(); ++i)
    {
        if (mean_d[i] <= threshold)
            expected.push_back(i);
    }

    const auto kept = statistical_inlier_rows(cloud, cfg);
    EXPECT_EQ(kept, expected);
    ASSERT_EQ(kept.size(), 100u);
    EXPECT_EQ(kept.back(), 99u);
    EXPECT_EQ(remove_statistical_outliers(cloud, cfg).size(), 100u);
}

TEST(StatisticalOutliers, SmallCloudUnchanged)
{
    const auto cloud = fixtures::world_cloud({Point3(0, 0, 0), Point3(1, 0, 0), Point3(100, 0, 0)});
    EXPECT_EQ(remove_statistical_outliers(cloud, OutlierConfig{3, 1.0}).points(), cloud.points());
}

TEST(StatisticalOutliers, CoincidentPointsSurvive)
{
    const auto cloud = fixtures::world_cloud(std::vector<Point3>(40, Point3(1, 2, 3)));
    EXPECT_EQ(remove_statistical_outliers(cloud, OutlierConfig{}).size(), 40u);
}

TEST(StatisticalOutliers, InvalidConfig)
{
    const auto cloud = fixtures::world_cloud({Point3(0, 0, 0)});
    EXPECT_THROW(remove_statistical_outliers(cloud, OutlierConfig{0, 1.0}), std::invalid_argument);
    EXPECT_THROW(remove_statistical_outliers(cloud, OutlierConfig{3, -1.0}), std::invalid_argument);
}

TEST(PoissonRadius, MatchesFormula)
{
    EXPECT_DOUBLE_EQ(poisson_disk_radius(1000.0, 1000), oracle::poisson_rmax(1000.0, 1000));
    const auto pts = fixtures::grid(11, 3, 1.0);
    EXPECT_DOUBLE_EQ(planar_bounding_area(pts), 20.0);
    EXPECT_DOUBLE_EQ(elimination_radius(pts, 5), oracle::poisson_rmax(20.0, 5));
}

TEST(PoissonDownsample, SmallInputUnchanged)
{
    const auto cloud = fixtures::world_cloud(fixtures::grid(5, 5, 1.0));
    EXPECT_EQ(poisson_downsample(cloud, SamplingConfig{25}).points(), cloud.points());
    EXPECT_EQ(poisson_downsample(cloud, SamplingConfig{100}).points(), cloud.points());
}

TEST(PoissonDownsample, CoincidentPairKeepsOne)
{
    const auto cloud = fixtures::world_cloud({Point3(1, 1, 0), Point3(1, 1, 0)});
    const auto out = poisson_downsample(cloud, SamplingConfig{1});
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out.points()[0], Point3(1, 1, 0));
}

TEST(PoissonDownsample, ContractOnRandomStrip)
{
    const auto pts = fixtures::uniform_strip(3000, 100.0, 10.0, 21);
    const auto cloud = fixtures::world_cloud(pts);
    const auto rows = sample_elimination_rows(cloud, SamplingConfig{300});
    ASSERT_EQ(rows.size(), 300u);
    EXPECT_TRUE(std::is_sorted(rows.begin(), rows.end()));
    EXPECT_EQ(std::set<std::size_t>(rows.begin(), rows.end()).size(), 300u);
    EXPECT_LT(rows.back(), pts.size());

    std::vector<oracle::P2> kept;
    for (auto r : rows)
        kept.push_back({pts[r].x(), pts[r].y()});
    double lx = 0, hx = 0, ly = 0, hy = 0;
    lx = ly = 1e300;
    hx = hy = -1e300;
    for (const auto& p : pts)
    {
        lx = std::min(lx, p.x());
        hx = std::max(hx, p.x());
        ly = std::min(ly, p.y());
        hy = std::max(hy, p.y());
    }
    const double rmax = oracle::poisson_rmax((hx - lx) * (hy - ly), 300);
    EXPECT_GE(oracle::min_pairwise_xy(kept), 0.5 * rmax);
}

TEST(PoissonDownsample, DeterministicAcrossThreads)
{
    const auto cloud = fixtures::world_cloud(fixtures::uniform_strip(2000, 50.0, 10.0, 4));
    std::vector<std::size_t> a, b;
    {
        ThreadLimit limit(1);
        a = sample_elimination_rows(cloud, SamplingConfig{200});
    }
    {
        ThreadLimit limit(8);
        b = sample_elimination_rows(cloud, SamplingConfig{200});
    }
    EXPECT_EQ(a, b);
}

TEST(PoissonDownsample, CollinearInput)
{
    std::vector<Point3> pts;
    for (int i = 0; i < 100; ++i)
        pts.emplace_back(i * 0.1, 0, 0);
    const auto out = poisson_downsample(fixtures::world_cloud(pts), SamplingConfig{10});
    EXPECT_EQ(out.size(), 10u);
}

TEST(PoissonDownsample, RejectsEmptyAndZeroTarget)
{
    EXPECT_THROW(poisson_downsample(fixtures::world_cloud({}), SamplingConfig{}), std::invalid_argument);
    EXPECT_THROW(poisson_downsample(fixtures::world_cloud({Point3::Zero()}), SamplingConfig{0}),
                 std::invalid_argument);
}
