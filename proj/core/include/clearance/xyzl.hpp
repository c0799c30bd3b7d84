// Copyright 2026 The Clearance Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CLEARANCE_XYZL_HPP_
#define CLEARANCE_XYZL_HPP_

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "clearance/types.hpp"

namespace clearance {

/// Malformed or inconsistent input data. `row()` is the 0-based line index
/// inside `path()` when the problem is tied to one row.
class LoadError : public std::runtime_error
{
  public:
    LoadError(const std::string& message, std::filesystem::path path = {}, std::optional<std::size_t> row = {});

    const std::filesystem::path& path() const noexcept { return path_; }
    std::optional<std::size_t> row() const noexcept { return row_; }

  private:
    std::filesystem::path path_;
    std::optional<std::size_t> row_;
};

struct XyzlRows
{
    std::vector<Point3> points;
    std::vector<int> labels;
};

/// Parses `x y z label_id` lines (ASCII, space separated, LF). Rejects
/// non-finite coordinates with the offending row index.
XyzlRows read_xyzl(const std::filesystem::path& path);
XyzlRows parse_xyzl(std::string_view text, const std::filesystem::path& origin = {});

/// Writes shortest round-trip decimal representations, so reading the file
/// back reproduces every coordinate bit for bit.
void write_xyzl(const std::filesystem::path& path, std::span<const Point3> points, std::span<const int> labels);

/// Shortest round-trip representation of a double.
std::string format_double(double v);

} // namespace clearance

#endif // CLEARANCE_XYZL_HPP_
