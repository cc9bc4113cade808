#include "gridwm/raster.hpp"

#include <array>
#include <cmath>

namespace gridwm::world {

namespace {

constexpr uint8_t kBackground = 235;

constexpr std::array<std::array<uint8_t, 3>, 4> kColorRgb = {{
    {210, 40, 40},    // red
    {40, 170, 60},    // green
    {50, 80, 210},    // blue
    {230, 200, 40},   // yellow
}};

bool shape_mask(Shape s, int y, int x) {
  // 8x8 tile, 1px margin around each glyph.
  switch (s) {
    case Shape::Square:
      return y >= 1 && y <= 6 && x >= 1 && x <= 6;
    case Shape::Circle: {
      const double dy = y - 3.5, dx = x - 3.5;
      return dy * dy + dx * dx <= 2.6 * 2.6;
    }
    case Shape::Triangle:
      // upward triangle: widens with y
      return y >= 1 && y <= 6 && x >= 4 - (y + 1) / 2 && x <= 3 + (y + 1) / 2;
  }
  return false;
}

}  // namespace

RasterImage render(const Board& board) {
  RasterImage img;
  img.width = board.width * kCellPixels;
  img.height = board.height * kCellPixels;
  img.pixels.assign(static_cast<size_t>(img.width) * img.height * 3,
                    kBackground);

  for (int r = 0; r < board.height; ++r) {
    for (int c = 0; c < board.width; ++c) {
      const Cell cell = board.at(r, c);
      if (cell.is_empty()) continue;
      const auto& rgb = kColorRgb[static_cast<int>(cell.color())];
      for (int y = 0; y < kCellPixels; ++y) {
        for (int x = 0; x < kCellPixels; ++x) {
          if (!shape_mask(cell.shape(), y, x)) continue;
          const size_t i =
              img.index(r * kCellPixels + y, c * kCellPixels + x);
          img.pixels[i] = rgb[0];
          img.pixels[i + 1] = rgb[1];
          img.pixels[i + 2] = rgb[2];
        }
      }
    }
  }
  return img;
}

}  // namespace gridwm::world
