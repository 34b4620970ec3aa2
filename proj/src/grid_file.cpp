#include <harnack/errors.hpp>
#include <harnack/grid_file.hpp>

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace harnack {

namespace {

constexpr char kMagic[5] = {'R', 'H', 'O', '0', '1'};

template <class T>
void put(std::vector<unsigned char>& out, T v) {
  unsigned char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  out.insert(out.end(), buf, buf + sizeof(T));
}

template <class T>
T get(const std::vector<unsigned char>& in, std::size_t& pos) {
  unsigned char buf[sizeof(T)];
  std::memcpy(buf, in.data() + pos, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  pos += sizeof(T);
  T v;
  std::memcpy(&v, buf, sizeof(T));
  return v;
}

}  // namespace

std::vector<unsigned char> encode_grid(const GridFile& g) {
  const std::size_t n = static_cast<std::size_t>(g.header.nx) * g.header.ny;
  std::vector<unsigned char> out;
  out.reserve(kGridHeaderBytes + 8 * n * g.planes.size());
  out.insert(out.end(), kMagic, kMagic + 5);
  put<std::uint16_t>(out, kGridFileVersion);
  put(out, g.header.region.xmin);
  put(out, g.header.region.xmax);
  put(out, g.header.region.ymin);
  put(out, g.header.region.ymax);
  put(out, g.header.nx);
  put(out, g.header.ny);
  put(out, g.header.tag);
  put(out, g.header.tolerance);
  for (const auto& plane : g.planes) {
    if (plane.size() != n) throw InternalError("encode_grid: plane size does not match nx*ny");
    for (double v : plane) put(out, v);
  }
  return out;
}

GridFile decode_grid(const std::vector<unsigned char>& bytes, const std::string& origin) {
  if (bytes.size() < kGridHeaderBytes || std::memcmp(bytes.data(), kMagic, 5) != 0) {
    throw DataIntegrityError("grid file: bad magic or truncated header", origin);
  }
  std::size_t pos = 5;
  if (get<std::uint16_t>(bytes, pos) != kGridFileVersion) {
    throw DataIntegrityError("grid file: unsupported version", origin);
  }
  GridFile g;
  g.header.region.xmin = get<double>(bytes, pos);
  g.header.region.xmax = get<double>(bytes, pos);
  g.header.region.ymin = get<double>(bytes, pos);
  g.header.region.ymax = get<double>(bytes, pos);
  g.header.nx = get<std::uint32_t>(bytes, pos);
  g.header.ny = get<std::uint32_t>(bytes, pos);
  g.header.tag = get<std::uint8_t>(bytes, pos);
  g.header.tolerance = get<double>(bytes, pos);
  const std::size_t n = static_cast<std::size_t>(g.header.nx) * g.header.ny;
  const std::size_t payload = bytes.size() - kGridHeaderBytes;
  if (n == 0 || payload % (8 * n) != 0 || payload == 0) {
    throw DataIntegrityError("grid file: payload size does not match the grid dimensions", origin);
  }
  g.planes.assign(payload / (8 * n), std::vector<double>(n));
  for (auto& plane : g.planes) {
    for (double& v : plane) v = get<double>(bytes, pos);
  }
  return g;
}

void write_grid_file(const std::filesystem::path& path, const GridFile& g) {
  const auto bytes = encode_grid(g);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataIntegrityError("grid file: cannot open for writing", path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataIntegrityError("grid file: write failed", path.string());
}

GridFile read_grid_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataIntegrityError("grid file: cannot open", path.string());
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                         std::istreambuf_iterator<char>());
  return decode_grid(bytes, path.string());
}

}  // namespace harnack
