// Copyright 2026 The Clearance Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "clearance/kdtree.hpp"

using clearance::KdTree;

namespace {

std::vector<std::array<double, 3>> random_coords(std::size_t n, std::uint64_t seed, bool quantised)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0, 10);
    std::vector<std::array<double, 3>> out(n);
    for (auto& c : out)
    {
        for (auto& v : c)
            v = quantised ? std::floor(u(rng)) : u(rng);
    }
    return out;
}

} // namespace

TEST(KdTree, EmptyTree)
{
    const KdTree<3> tree;
    EXPECT_TRUE(tree.radius_search({0, 0, 0}, 10).empty());
    EXPECT_TRUE(tree.knn({0, 0, 0}, 3).empty());
    EXPECT_FALSE(tree.nearest({0, 0, 0}).has_value());
}

TEST(KdTree, RadiusSearchMatchesScan)
{
    for (bool quantised : {false, true})
    {
        const auto pts = random_coords(800, 5, quantised);
        const KdTree<3> tree(pts);
        std::mt19937_64 rng(6);
        std::uniform_real_distribution<double> u(0, 10), ur(0, 3);
        for (int q = 0; q < 100; ++q)
        {
            const std::array<double, 3> c{u(rng), u(rng), u(rng)};
            const double r = quantised ? std::floor(ur(rng)) : ur(rng);
            std::vector<std::size_t> expected;
            for (std::size_t i = 0; i < pts.size(); ++i)
            {
                if (KdTree<3>::squared_distance(pts[i], c) <= r * r)
                    expected.push_back(i);
            }
            EXPECT_EQ(tree.radius_search(c, r), expected);
        }
    }
}

TEST(KdTree, KnnMatchesSortedScanWithIndexTieBreak)
{
    const auto pts = random_coords(600, 7, true); // many exact ties
    const KdTree<3> tree(pts);
    for (std::size_t q = 0; q < 60; ++q)
    {
        std::vector<std::pair<double, std::size_t>> all;
        for (std::size_t i = 0; i < pts.size(); ++i)
        {
            if (i != q)
                all.emplace_back(KdTree<3>::squared_distance(pts[i], pts[q]), i);
        }
        std::sort(all.begin(), all.end());
        const auto got = tree.knn(pts[q], 15, q);
        ASSERT_EQ(got.size(), 15u);
        for (std::size_t j = 0; j < got.size(); ++j)
        {
            EXPECT_EQ(got[j].index, all[j].second);
            EXPECT_EQ(got[j].squared_distance, all[j].first);
        }
    }
}

TEST(KdTree, KnnLargerThanTree)
{
    const KdTree<2> tree(std::vector<std::array<double, 2>>{{0, 0}, {1, 0}, {2, 0}});
    const auto got = tree.knn({0, 0}, 10, 0);
    ASSERT_EQ(got.size(), 2u);
    EXPECT_EQ(got[0].index, 1u);
    EXPECT_EQ(got[1].index, 2u);
}

TEST(KdTree, AllCoincident)
{
    const KdTree<2> tree(std::vector<std::array<double, 2>>(50, {3, 3}));
    EXPECT_EQ(tree.radius_search({3, 3}, 0).size(), 50u);
    EXPECT_EQ(tree.nearest({0, 0}), 0u);
}
