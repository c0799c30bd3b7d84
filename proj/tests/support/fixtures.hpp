// Copyright 2026 The Clearance Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CLEARANCE_TESTS_FIXTURES_HPP_
#define CLEARANCE_TESTS_FIXTURES_HPP_

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "clearance/types.hpp"
#include "oracles.hpp"

namespace fixtures {

inline std::vector<oracle::P2> to_p2(const std::vector<clearance::Point3>& pts)
{
    std::vector<oracle::P2> out;
    out.reserve(pts.size());
    for (const auto& p : pts)
        out.push_back({p.x(), p.y()});
    return out;
}

inline std::vector<oracle::P3> to_p3(const std::vector<clearance::Point3>& pts)
{
    std::vector<oracle::P3> out;
    out.reserve(pts.size());
    for (const auto& p : pts)
        out.push_back({p.x(), p.y(), p.z()});
    return out;
}

inline clearance::LabeledPointCloud world_cloud(std::vector<clearance::Point3> pts,
                                                clearance::SemanticClass c = clearance::SemanticClass::Road)
{
    std::vector<clearance::SemanticClass> cls(pts.size(), c);
    return {std::move(pts), std::move(cls), "test", clearance::CoordinateFrame::World};
}

// nx * ny points at (x0 + i*spacing, y0 + j*spacing, z), row-major in x.
inline std::vector<clearance::Point3> grid(int nx, int ny, double spacing, double x0 = 0, double y0 = 0, double z = 0)
{
    std::vector<clearance::Point3> out;
    for (int j = 0; j < ny; ++j)
    {
        for (int i = 0; i < nx; ++i)
            out.emplace_back(x0 + i * spacing, y0 + j * spacing, z);
    }
    return out;
}

inline std::vector<clearance::Point3> uniform_strip(std::size_t n, double lx, double ly, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(0.0, lx), uy(0.0, ly);
    std::vector<clearance::Point3> out;
    for (std::size_t i = 0; i < n; ++i)
    {
        const double x = ux(rng);
        out.emplace_back(x, uy(rng), 0.0);
    }
    return out;
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / ("clearance-test-" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text)
{
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
}

} // namespace fixtures

#endif // CLEARANCE_TESTS_FIXTURES_HPP_
