#pragma once

#include <cstddef>
#include <cstdint>

namespace qlg {

// Periodic cubic lattice extents. Site (x,y,z) maps to a flat index with z
// fastest, then y, then x (row-major).
struct GridSpec {
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::size_t nz = 0;

  std::size_t sites() const { return nx * ny * nz; }
  std::size_t idx(std::size_t x, std::size_t y, std::size_t z) const {
    return (x * ny + y) * nz + z;
  }
  std::size_t extent(int axis) const { return axis == 0 ? nx : (axis == 1 ? ny : nz); }

  bool operator==(const GridSpec&) const = default;

  // Throws ConfigError unless every extent is at least 4.
  void validate() const;
};

} // namespace qlg
