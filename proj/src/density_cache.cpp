#include <harnack/density_cache.hpp>
#include <harnack/errors.hpp>
#include <harnack/rng.hpp>

#include <json.hpp>
#include <zlib.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <mutex>

namespace harnack {

namespace fs = std::filesystem;

namespace {

constexpr const char* kManifest = "manifest.json";
constexpr const char* kPrefix = "rho01-";
constexpr const char* kSuffix = ".bin";

std::uint32_t crc_of(const std::vector<unsigned char>& bytes) {
  return static_cast<std::uint32_t>(
      crc32(0L, bytes.data(), static_cast<uInt>(bytes.size())));
}

std::vector<unsigned char> read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw DataIntegrityError("cache: cannot read file", p.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_atomic(const fs::path& p, const std::string& data) {
  const fs::path tmp = p.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataIntegrityError("cache: cannot write file", tmp.string());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw DataIntegrityError("cache: write failed", tmp.string());
  }
  fs::rename(tmp, p);
}

GridFileHeader header_of(const DensityGridKey& k) {
  GridFileHeader h;
  h.region = k.region;
  h.nx = k.nx;
  h.ny = k.ny;
  h.tag = static_cast<std::uint8_t>(k.method) | grid_tag::kDensity;
  h.tolerance = k.tolerance;
  return h;
}

bool is_cache_file(const fs::path& p) {
  const std::string name = p.filename().string();
  return name.rfind(kPrefix, 0) == 0 && p.extension() == kSuffix;
}

double node_x(const DensityGridKey& k, std::uint32_t i) {
  return k.region.xmin + (k.region.xmax - k.region.xmin) / (k.nx - 1) * i;
}
double node_y(const DensityGridKey& k, std::uint32_t j) {
  return k.region.ymin + (k.region.ymax - k.region.ymin) / (k.ny - 1) * j;
}

double live_value(const DensityModel& m, Complex z) {
  if (!m.contains(z)) return std::nan("");
  try {
    return m(z);
  } catch (const Error&) {
    return std::nan("");
  }
}

}  // namespace

std::string DensityGridKey::file_name() const {
  GridFile g;
  g.header = header_of(*this);
  char buf[16];
  std::snprintf(buf, sizeof buf, "%08x", static_cast<unsigned>(crc_of(encode_grid(g))));
  return std::string(kPrefix) + buf + kSuffix;
}

DensityCache::DensityCache(fs::path directory) : dir_(std::move(directory)) {}

fs::path DensityCache::default_directory() {
  if (const char* d = std::getenv("HARNACK_CACHE_DIR"); d != nullptr && *d != '\0') return d;
  if (const char* d = std::getenv("XDG_CACHE_HOME"); d != nullptr && *d != '\0') {
    return fs::path(d) / "harnack";
  }
  if (const char* d = std::getenv("HOME"); d != nullptr && *d != '\0') {
    return fs::path(d) / ".cache" / "harnack";
  }
  return ".harnack-cache";
}

std::map<std::string, DensityCache::ManifestRecord> DensityCache::read_manifest() const {
  std::map<std::string, ManifestRecord> out;
  const fs::path p = dir_ / kManifest;
  if (!fs::exists(p)) return out;
  const auto bytes = read_bytes(p);
  try {
    const auto j = nlohmann::json::parse(bytes.begin(), bytes.end());
    for (const auto& [name, rec] : j.at("files").items()) {
      out[name] = {rec.at("crc32").get<std::uint32_t>(), rec.at("size").get<std::uintmax_t>()};
    }
  } catch (const nlohmann::json::exception&) {
    throw DataIntegrityError("cache: unreadable manifest", p.string());
  }
  return out;
}

void DensityCache::write_manifest(const std::map<std::string, ManifestRecord>& m) const {
  nlohmann::json j;
  j["version"] = kGridFileVersion;
  j["files"] = nlohmann::json::object();
  for (const auto& [name, rec] : m) j["files"][name] = {{"crc32", rec.crc}, {"size", rec.size}};
  write_atomic(dir_ / kManifest, j.dump(2) + "\n");
}

DensityCache::Entry DensityCache::load_file(const std::string& name,
                                            const ManifestRecord& rec) const {
  const fs::path p = dir_ / name;
  if (!fs::exists(p)) throw DataIntegrityError("cache: listed file is missing", p.string());
  const auto bytes = read_bytes(p);
  if (bytes.size() != rec.size || crc_of(bytes) != rec.crc) {
    throw DataIntegrityError("cache: checksum mismatch", p.string());
  }
  const GridFile g = decode_grid(bytes, p.string());
  DensityGridKey key{g.header.region, g.header.nx, g.header.ny,
                     static_cast<DensityMethod>(g.header.tag & grid_tag::kMethodMask),
                     g.header.tolerance};
  if (g.planes.size() != 1 || (g.header.tag & ~grid_tag::kMethodMask) != 0 ||
      key.file_name() != name) {
    throw DataIntegrityError("cache: header does not match the file name", p.string());
  }
  return {key, g.planes[0]};
}

void DensityCache::build(const DensityGridKey& key) {
  if (key.nx < 2 || key.ny < 2 || !(key.region.xmax > key.region.xmin) ||
      !(key.region.ymax > key.region.ymin) || !(key.tolerance > 0.0)) {
    throw DomainError("cache: invalid grid key");
  }
  std::unique_lock lock(mutex_);
  for (const auto& e : grids_) {
    if (e.key == key) return;
  }
  fs::create_directories(dir_);
  auto manifest = read_manifest();
  const std::string name = key.file_name();
  if (const auto it = manifest.find(name); it != manifest.end() && fs::exists(dir_ / name)) {
    grids_.push_back(load_file(name, it->second));
    return;
  }
  const DensityModel model(DomainTag::twice_punctured_plane, key.method, key.tolerance);
  GridFile g;
  g.header = header_of(key);
  g.planes.emplace_back(static_cast<std::size_t>(key.nx) * key.ny);
  auto& values = g.planes[0];
  for (std::uint32_t j = 0; j < key.ny; ++j) {
    for (std::uint32_t i = 0; i < key.nx; ++i) {
      values[static_cast<std::size_t>(j) * key.nx + i] =
          live_value(model, {node_x(key, i), node_y(key, j)});
    }
  }
  const auto bytes = encode_grid(g);
  write_atomic(dir_ / name, std::string(bytes.begin(), bytes.end()));
  manifest[name] = {crc_of(bytes), bytes.size()};
  write_manifest(manifest);
  grids_.push_back({key, std::move(values)});
}

void DensityCache::load_all() {
  std::unique_lock lock(mutex_);
  for (const auto& [name, rec] : read_manifest()) {
    Entry e = load_file(name, rec);
    bool have = false;
    for (const auto& g : grids_) have = have || g.key == e.key;
    if (!have) grids_.push_back(std::move(e));
  }
}

std::optional<DensityEvaluation> DensityCache::lookup(Complex z, DensityMethod method,
                                                      double tolerance) const {
  std::shared_lock lock(mutex_);
  for (const auto& e : grids_) {
    const auto& k = e.key;
    if (k.method != method || k.tolerance != tolerance) continue;
    const double fx = (z.real() - k.region.xmin) / (k.region.xmax - k.region.xmin) * (k.nx - 1);
    const double fy = (z.imag() - k.region.ymin) / (k.region.ymax - k.region.ymin) * (k.ny - 1);
    if (!(fx >= -0.5 && fy >= -0.5 && fx < k.nx - 0.5 && fy < k.ny - 0.5)) continue;
    const auto i = static_cast<std::uint32_t>(std::lround(fx));
    const auto j = static_cast<std::uint32_t>(std::lround(fy));
    if (node_x(k, i) != z.real() || node_y(k, j) != z.imag()) continue;
    const double v = e.values[static_cast<std::size_t>(j) * k.nx + i];
    if (std::isnan(v)) continue;
    const double err = method == DensityMethod::modular ? 1e-13 * v : tolerance * v;
    return DensityEvaluation{v, err, method};
  }
  return std::nullopt;
}

CacheVerifyReport DensityCache::verify(double fraction, std::uint64_t seed) const {
  std::shared_lock lock(mutex_);
  CacheVerifyReport report;
  if (!fs::exists(dir_)) return report;
  const auto manifest = read_manifest();
  for (const auto& f : fs::directory_iterator(dir_)) {
    if (is_cache_file(f.path()) && !manifest.contains(f.path().filename().string())) {
      throw DataIntegrityError("cache: file not listed in the manifest", f.path().string());
    }
  }
  std::uint64_t index = 0;
  for (const auto& [name, rec] : manifest) {
    const Entry e = load_file(name, rec);
    const auto& k = e.key;
    const DensityModel model(DomainTag::twice_punctured_plane, k.method, k.tolerance);
    const std::size_t n = e.values.size();
    const auto count = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(fraction * n)));
    Rng rng(seed, index++);
    for (std::size_t c = 0; c < count; ++c) {
      const auto node = static_cast<std::size_t>(rng.integer(0, static_cast<int>(n) - 1));
      const auto i = static_cast<std::uint32_t>(node % k.nx);
      const auto j = static_cast<std::uint32_t>(node / k.nx);
      const double stored = e.values[node];
      const double live = live_value(model, {node_x(k, i), node_y(k, j)});
      if (std::isnan(stored) != std::isnan(live)) {
        throw DataIntegrityError("cache: stored value disagrees with the evaluator",
                                 (dir_ / name).string());
      }
      if (!std::isnan(stored)) {
        const double dev = std::abs(stored - live) / live;
        report.worst_relative_deviation = std::max(report.worst_relative_deviation, dev);
        if (!(dev <= std::max(10.0 * k.tolerance, 1e-12))) {
          throw DataIntegrityError("cache: stored value disagrees with the evaluator",
                                   (dir_ / name).string());
        }
      }
      ++report.nodes_checked;
    }
    ++report.files;
  }
  return report;
}

std::size_t DensityCache::clear() {
  std::unique_lock lock(mutex_);
  grids_.clear();
  std::size_t removed = 0;
  if (!fs::exists(dir_)) return 0;
  for (const auto& f : fs::directory_iterator(dir_)) {
    const std::string name = f.path().filename().string();
    const bool tmp = f.path().extension() == ".tmp";
    if (is_cache_file(f.path()) || name == kManifest || tmp) {
      fs::remove(f.path());
      if (is_cache_file(f.path())) ++removed;
    }
  }
  return removed;
}

std::vector<DensityGridKey> DensityCache::keys() const {
  std::shared_lock lock(mutex_);
  std::vector<DensityGridKey> out;
  for (const auto& e : grids_) out.push_back(e.key);
  return out;
}

}  // namespace harnack
