#pragma once

// Bit-exact binary grid layout shared by the density cache, geodesic grid
// export and GridField serialization:
//   "RHO01" | u16 version | f64 xmin, xmax, ymin, ymax | u32 nx, ny |
//   u8 tag | f64 tolerance | planes of nx*ny f64, row-major (j outer, i inner)
// All numbers little-endian. The number of planes follows from the file size.

#include <cstdint>
#include <filesystem>
#include <vector>

namespace harnack {

struct GridRegion {
  double xmin = -1.0, xmax = 1.0, ymin = -1.0, ymax = 1.0;
  bool operator==(const GridRegion&) const = default;
};

namespace grid_tag {
// Low nibble: density method (DensityMethod values). High bits: payload kind.
inline constexpr std::uint8_t kMethodMask = 0x0F;
inline constexpr std::uint8_t kDensity = 0x00;       // one plane: density
inline constexpr std::uint8_t kComplexField = 0x10;  // two planes: re, im
inline constexpr std::uint8_t kGeodesic = 0x20;      // two planes: density, distance
// Bits 6-7 carry the DomainTag of geodesic grids.
inline constexpr int kDomainShift = 6;
}  // namespace grid_tag

inline constexpr std::uint16_t kGridFileVersion = 1;
inline constexpr std::size_t kGridHeaderBytes = 5 + 2 + 4 * 8 + 2 * 4 + 1 + 8;

struct GridFileHeader {
  GridRegion region;
  std::uint32_t nx = 0, ny = 0;
  std::uint8_t tag = 0;
  double tolerance = 0.0;
};

struct GridFile {
  GridFileHeader header;
  std::vector<std::vector<double>> planes;
};

std::vector<unsigned char> encode_grid(const GridFile& g);
// Throws DataIntegrityError (naming `origin`) on any malformed input.
GridFile decode_grid(const std::vector<unsigned char>& bytes, const std::string& origin);

void write_grid_file(const std::filesystem::path& path, const GridFile& g);
GridFile read_grid_file(const std::filesystem::path& path);

}  // namespace harnack
