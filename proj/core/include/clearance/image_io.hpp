// Copyright 2026 The Clearance Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CLEARANCE_IMAGE_IO_HPP_
#define CLEARANCE_IMAGE_IO_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace clearance {

/// Interleaved 8-bit RGB, row-major.
struct RgbImage
{
    int width{0};
    int height{0};
    std::vector<std::uint8_t> pixels;

    RgbImage() = default;
    RgbImage(int w, int h, std::array<std::uint8_t, 3> fill = {0, 0, 0});

    std::array<std::uint8_t, 3> at(int x, int y) const;
    void set(int x, int y, std::array<std::uint8_t, 3> rgb);
};

/// Any PNG libpng can decode, converted to 8-bit RGB.
RgbImage read_png(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const RgbImage& image);

/// Filled disk of pixels with (dx^2 + dy^2) <= radius^2 around (cx, cy),
/// clipped to the image.
void draw_disk(RgbImage& image, int cx, int cy, int radius, std::array<std::uint8_t, 3> rgb);

} // namespace clearance

#endif // CLEARANCE_IMAGE_IO_HPP_
