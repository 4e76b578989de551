#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "spatialviz/document.hpp"

namespace spatialviz {

/// 8-bit RGB, row-major, top row first.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;
  std::array<std::uint8_t, 3> pixel(int x, int y) const;
};

/// "#rrggbb" to bytes. Throws Error on anything else.
std::array<std::uint8_t, 3> parse_color(const std::string& hex);

inline constexpr int kSupersample = 2;  // per axis

/// Scanline rasterization of the document scaled to `width_px` pixels wide,
/// with kSupersample x kSupersample samples per pixel.
Image rasterize(const Document& doc, int width_px);
std::vector<std::uint8_t> encode_png(const Image& image);

}  // namespace spatialviz
