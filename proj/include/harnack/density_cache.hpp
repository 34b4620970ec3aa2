#pragma once

// Persisted rho grids of C \ {0,1} in the grid_file layout, keyed by
// (region, resolution, method, tolerance). A manifest records the crc32 and
// size of every file. Node hits return the stored double unchanged.

#include <harnack/grid_file.hpp>
#include <harnack/rho01.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

namespace harnack {

struct DensityGridKey {
  GridRegion region;
  std::uint32_t nx = 0, ny = 0;
  DensityMethod method = DensityMethod::automatic;
  double tolerance = 1e-9;

  // "rho01-<crc32 of the encoded header>.bin"
  std::string file_name() const;
  bool operator==(const DensityGridKey&) const = default;
};

struct CacheVerifyReport {
  std::size_t files = 0;
  std::size_t nodes_checked = 0;
  double worst_relative_deviation = 0.0;
};

class DensityCache {
 public:
  explicit DensityCache(std::filesystem::path directory);

  // $HARNACK_CACHE_DIR, else $XDG_CACHE_HOME/harnack, else ~/.cache/harnack,
  // else ./.harnack-cache.
  static std::filesystem::path default_directory();

  const std::filesystem::path& directory() const { return dir_; }

  // Evaluates (or loads, if present and intact) the grid and keeps it in memory.
  // Node values outside C \ {0,1} are stored as NaN.
  void build(const DensityGridKey& key);
  // Loads every manifest entry; DataIntegrityError on the first bad file.
  void load_all();

  // Stored value when z is exactly a node of a loaded grid with the same
  // method and tolerance.
  std::optional<DensityEvaluation> lookup(Complex z, DensityMethod method, double tolerance) const;

  // Checks every file against the manifest, then re-evaluates a random
  // `fraction` of the nodes (at least one per file) with the live evaluator.
  // Throws DataIntegrityError naming the offending file.
  CacheVerifyReport verify(double fraction = 0.01, std::uint64_t seed = 0) const;

  // Removes cache files and the manifest; returns the number of files removed.
  std::size_t clear();

  std::vector<DensityGridKey> keys() const;

 private:
  struct Entry {
    DensityGridKey key;
    std::vector<double> values;
  };
  struct ManifestRecord {
    std::uint32_t crc = 0;
    std::uintmax_t size = 0;
  };

  std::map<std::string, ManifestRecord> read_manifest() const;
  void write_manifest(const std::map<std::string, ManifestRecord>& m) const;
  Entry load_file(const std::string& name, const ManifestRecord& rec) const;

  std::filesystem::path dir_;
  mutable std::shared_mutex mutex_;
  std::vector<Entry> grids_;
};

}  // namespace harnack
