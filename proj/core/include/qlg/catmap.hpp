#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qlg {

// Square pixel image, row-major: pix[y * n + x].
struct PixelImage {
  std::size_t n = 0;
  std::vector<std::uint8_t> pix;

  static PixelImage zeros(std::size_t n);
  std::uint8_t& at(std::size_t x, std::size_t y) { return pix[y * n + x]; }
  std::uint8_t at(std::size_t x, std::size_t y) const { return pix[y * n + x]; }
  bool operator==(const PixelImage&) const = default;
};

// One application of (x,y) -> ((2x+y) mod N, (x+y) mod N). A permutation.
PixelImage cat_step(const PixelImage& img);

// Pixel map (x,y) -> (-x mod N, -y mod N). An involution.
PixelImage point_inversion(const PixelImage& img);

// Smallest t >= 1 with [[2,1],[1,1]]^t = I (mod n), and whether the map at
// half period is exactly the point inversion (t even and M^(t/2) = -I mod n).
struct CatPeriod {
  std::uint64_t period = 0;
  bool half_inversion = false;
};
CatPeriod cat_period(std::uint64_t n);

// Binary (P5) PGM, maxval <= 255. Square images only. Throws IoError on
// malformed headers, truncation, or non-square dims.
PixelImage load_pgm(const std::string& path);
void save_pgm(const PixelImage& img, const std::string& path);

// Deterministic test pattern with distinct-rich structure (gradient + rings),
// useful when no input image is supplied.
PixelImage test_pattern(std::size_t n);

} // namespace qlg
