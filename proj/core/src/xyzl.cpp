// Copyright 2026 The Clearance Authors
// SPDX-License-Identifier: Apache-2.0

#include "clearance/xyzl.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace clearance {

LoadError::LoadError(const std::string& message, std::filesystem::path path, std::optional<std::size_t> row)
    : std::runtime_error([&] {
          std::string m = message;
          if (!path.empty())
              m += " [" + path.string() + (row ? ":" + std::to_string(*row) : std::string{}) + "]";
          else if (row)
              m += " [row " + std::to_string(*row) + "]";
          return m;
      }()),
      path_(std::move(path)), row_(row)
{
}

namespace {

template <typename T>
bool parse_token(std::string_view& line, T& value)
{
    std::size_t start = 0;
    while (start < line.size() && line[start] == ' ')
        ++start;
    std::size_t end = start;
    while (end < line.size() && line[end] != ' ')
        ++end;
    if (start == end)
        return false;
    const auto res = std::from_chars(line.data() + start, line.data() + end, value);
    if (res.ec != std::errc{} || res.ptr != line.data() + end)
        return false;
    line.remove_prefix(end);
    return true;
}

} // namespace

XyzlRows parse_xyzl(std::string_view text, const std::filesystem::path& origin)
{
    XyzlRows rows;
    std::size_t row = 0;
    while (!text.empty())
    {
        const std::size_t nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        if (!line.empty() && line.back() == '\r')
            throw LoadError("CRLF line ending (LF required)", origin, row);

        double x = 0, y = 0, z = 0;
        int label = 0;
        if (!parse_token(line, x) || !parse_token(line, y) || !parse_token(line, z) || !parse_token(line, label))
            throw LoadError("malformed row, expected 'x y z label_id'", origin, row);
        while (!line.empty() && line.front() == ' ')
            line.remove_prefix(1);
        if (!line.empty())
            throw LoadError("malformed row, trailing fields", origin, row);
        if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z))
            throw LoadError("non-finite coordinate", origin, row);

        rows.points.emplace_back(x, y, z);
        rows.labels.push_back(label);
        ++row;
    }
    return rows;
}

XyzlRows read_xyzl(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw LoadError("cannot open point file", path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_xyzl(buf.str(), path);
}

std::string format_double(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return {buf, res.ptr};
}

void write_xyzl(const std::filesystem::path& path, std::span<const Point3> points, std::span<const int> labels)
{
    if (points.size() != labels.size())
        throw std::invalid_argument("write_xyzl: points/labels length mismatch");
    std::string out;
    out.reserve(points.size() * 48);
    for (std::size_t i = 0; i < points.size(); ++i)
    {
        out += format_double(points[i].x());
        out += ' ';
        out += format_double(points[i].y());
        out += ' ';
        out += format_double(points[i].z());
        out += ' ';
        out += std::to_string(labels[i]);
        out += '\n';
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw std::runtime_error("cannot write " + path.string());
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f)
        throw std::runtime_error("failed writing " + path.string());
}

} // namespace clearance
