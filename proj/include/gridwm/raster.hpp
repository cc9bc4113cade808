#pragma once

#include <cstdint>
#include <vector>

#include "gridwm/board.hpp"

namespace gridwm::world {

// 8-bit RGB raster, row-major, 3 channels interleaved.
struct RasterImage {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> pixels;  // height * width * 3

  size_t index(int y, int x) const {
    return (static_cast<size_t>(y) * width + x) * 3;
  }
};

inline constexpr int kCellPixels = 8;  // square tile per board cell

// Deterministic rasterization: identical boards render byte-for-byte equal,
// and any single-cell difference changes at least one pixel.
RasterImage render(const Board& board);

}  // namespace gridwm::world
