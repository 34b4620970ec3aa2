#include <harnack/density_cache.hpp>
#include <harnack/errors.hpp>

#include <gtest/gtest.h>

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iterator>
#include <atomic>
#include <thread>

using namespace harnack;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("harnack_cache_" + name);
  fs::remove_all(p);
  return p;
}

DensityGridKey small_key(DensityMethod m = DensityMethod::modular) {
  return {{-2.0, 3.0, -1.5, 1.5}, 21, 13, m, 1e-9};
}

std::vector<unsigned char> bytes_of(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Complex node_of(const DensityGridKey& k, std::uint32_t i, std::uint32_t j) {
  return {k.region.xmin + (k.region.xmax - k.region.xmin) / (k.nx - 1) * i,
          k.region.ymin + (k.region.ymax - k.region.ymin) / (k.ny - 1) * j};
}

}  // namespace

TEST(GridFile, HeaderLayoutIsBitExact) {
  GridFile g;
  g.header = {{-1.0, 2.0, -3.0, 4.0}, 2, 1, 1, 1e-9};
  g.planes = {{0.5, -0.25}};
  const auto b = encode_grid(g);
  ASSERT_EQ(b.size(), kGridHeaderBytes + 16);
  EXPECT_EQ(std::string(b.begin(), b.begin() + 5), "RHO01");
  EXPECT_EQ(b[5], 1);
  EXPECT_EQ(b[6], 0);
  double xmin;
  std::memcpy(&xmin, b.data() + 7, 8);
  EXPECT_EQ(xmin, -1.0);
  std::uint32_t nx;
  std::memcpy(&nx, b.data() + 39, 4);
  EXPECT_EQ(nx, 2u);
  EXPECT_EQ(b[47], 1);
  double tol, first;
  std::memcpy(&tol, b.data() + 48, 8);
  std::memcpy(&first, b.data() + 56, 8);
  EXPECT_EQ(tol, 1e-9);
  EXPECT_EQ(first, 0.5);
  const GridFile back = decode_grid(b, "mem");
  EXPECT_EQ(back.planes, g.planes);
  auto bad = b;
  bad[0] = 'X';
  EXPECT_THROW(decode_grid(bad, "mem"), DataIntegrityError);
  bad = b;
  bad.pop_back();
  EXPECT_THROW(decode_grid(bad, "mem"), DataIntegrityError);
}

TEST(DensityCache, HitsAreBitIdentical) {
  const auto dir = fresh_dir("hits");
  auto cache = std::make_shared<DensityCache>(dir);
  const auto key = small_key();
  cache->build(key);
  ASSERT_TRUE(fs::exists(dir / key.file_name()));
  DensityModel live(DomainTag::twice_punctured_plane, DensityMethod::modular);
  DensityModel cached(DomainTag::twice_punctured_plane, DensityMethod::modular);
  cached.attach_cache(cache);
  int hits = 0;
  for (std::uint32_t j = 0; j < key.ny; ++j) {
    for (std::uint32_t i = 0; i < key.nx; ++i) {
      const Complex z = node_of(key, i, j);
      const auto hit = cache->lookup(z, key.method, key.tolerance);
      if (!live.contains(z)) {
        EXPECT_FALSE(hit.has_value());
        continue;
      }
      ASSERT_TRUE(hit.has_value());
      const double a = live(z), b = cached(z);
      EXPECT_EQ(std::memcmp(&a, &b, sizeof a), 0) << z;
      ++hits;
    }
  }
  EXPECT_GT(hits, 200);
  EXPECT_FALSE(cache->lookup(Complex(0.123, 0.456), key.method, key.tolerance).has_value());
  EXPECT_FALSE(cache->lookup(node_of(key, 3, 3), DensityMethod::agard, key.tolerance));
  EXPECT_FALSE(cache->lookup(node_of(key, 3, 3), key.method, 1e-8));
  fs::remove_all(dir);
}

TEST(DensityCache, ReloadAndDeterminism) {
  const auto d1 = fresh_dir("det1"), d2 = fresh_dir("det2");
  const auto key = small_key(DensityMethod::automatic);
  DensityCache(d1).build(key);
  DensityCache(d2).build(key);
  EXPECT_EQ(bytes_of(d1 / key.file_name()), bytes_of(d2 / key.file_name()));
  DensityCache reopened(d1);
  reopened.load_all();
  ASSERT_EQ(reopened.keys().size(), 1u);
  EXPECT_TRUE(reopened.keys()[0] == key);
  const Complex z = node_of(key, 4, 7);
  EXPECT_EQ(reopened.lookup(z, key.method, key.tolerance)->value,
            DensityModel(DomainTag::twice_punctured_plane)(z));
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST(DensityCache, VerifyAndTamper) {
  const auto dir = fresh_dir("tamper");
  DensityCache cache(dir);
  const auto key = small_key();
  cache.build(key);
  const auto report = cache.verify(0.5, 3);
  EXPECT_EQ(report.files, 1u);
  EXPECT_GE(report.nodes_checked, 100u);
  EXPECT_EQ(report.worst_relative_deviation, 0.0);

  const fs::path file = dir / key.file_name();
  auto b = bytes_of(file);
  b[kGridHeaderBytes + 100] ^= 0x01;
  std::ofstream(file, std::ios::binary | std::ios::trunc)
      .write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size()));
  try {
    cache.verify();
    FAIL() << "expected DataIntegrityError";
  } catch (const DataIntegrityError& e) {
    EXPECT_EQ(fs::path(e.file()).filename(), key.file_name());
  }
  EXPECT_EQ(cache.clear(), 1u);
  EXPECT_FALSE(fs::exists(dir / "manifest.json"));
  EXPECT_EQ(cache.verify().files, 0u);
  fs::remove_all(dir);
}

TEST(DensityCache, UnlistedAndManifestCorruption) {
  const auto dir = fresh_dir("unlisted");
  DensityCache cache(dir);
  cache.build(small_key());
  std::ofstream(dir / "rho01-deadbeef.bin") << "junk";
  EXPECT_THROW(cache.verify(), DataIntegrityError);
  fs::remove(dir / "rho01-deadbeef.bin");
  std::ofstream(dir / "manifest.json", std::ios::trunc) << "{not json";
  EXPECT_THROW(cache.verify(), DataIntegrityError);
  fs::remove_all(dir);
}

TEST(DensityCache, ClearOnMissingDirectory) {
  DensityCache cache(fresh_dir("missing"));
  EXPECT_EQ(cache.clear(), 0u);
}

TEST(DensityCache, EnvironmentOverride) {
  ::setenv("HARNACK_CACHE_DIR", "/tmp/harnack-override", 1);
  EXPECT_EQ(DensityCache::default_directory(), fs::path("/tmp/harnack-override"));
  ::unsetenv("HARNACK_CACHE_DIR");
  EXPECT_NE(DensityCache::default_directory(), fs::path("/tmp/harnack-override"));
}

TEST(DensityCache, ConcurrentReaders) {
  const auto dir = fresh_dir("readers");
  DensityCache cache(dir);
  const auto key = small_key();
  cache.build(key);
  std::vector<std::thread> pool;
  std::atomic<int> misses{0};
  for (int t = 0; t < 4; ++t) {
    pool.emplace_back([&] {
      for (std::uint32_t i = 0; i < key.nx; ++i) {
        if (!cache.lookup(node_of(key, i, 0), key.method, key.tolerance)) ++misses;
      }
    });
  }
  for (auto& th : pool) th.join();
  EXPECT_EQ(misses.load(), 0);
  fs::remove_all(dir);
}

TEST(DensityCache, RejectsBadKeys) {
  DensityCache cache(fresh_dir("bad"));
  DensityGridKey k = small_key();
  k.tolerance = 0.0;
  EXPECT_THROW(cache.build(k), DomainError);
  k = small_key();
  k.nx = 1;
  EXPECT_THROW(cache.build(k), DomainError);
}
