// harnack: density evaluation, distance queries, certification suites and
// cache management. Every command prints one JSON document on stdout.
//
// Exit codes: 0 pass, 1 certified failure, 2 usage, 3 domain, 4 data integrity.

#include "suites.hpp"

#include <harnack/density_cache.hpp>
#include <harnack/errors.hpp>
#include <harnack/kobayashi.hpp>
#include <harnack/rho01.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>

namespace {

using Json = nlohmann::json;
using harnack::Complex;

constexpr const char* kSchemaVersion = "1.0";

enum Exit : int { kPass = 0, kFailed = 1, kUsage = 2, kDomain = 3, kIntegrity = 4 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Complex parse_point(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw UsageError("expected RE,IM but got '" + s + "'");
  try {
    std::size_t a = 0, b = 0;
    const std::string re = s.substr(0, comma), im = s.substr(comma + 1);
    const double x = std::stod(re, &a), y = std::stod(im, &b);
    if (a != re.size() || b != im.size()) throw std::invalid_argument(s);
    return {x, y};
  } catch (const std::logic_error&) {
    throw UsageError("expected RE,IM but got '" + s + "'");
  }
}

harnack::GridRegion parse_region(const std::string& s) {
  std::stringstream in(s);
  std::string part;
  double v[4];
  int k = 0;
  while (std::getline(in, part, ',')) {
    if (k == 4) throw UsageError("region needs 4 numbers");
    try {
      std::size_t used = 0;
      v[k++] = std::stod(part, &used);
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::logic_error&) {
      throw UsageError("bad region number '" + part + "'");
    }
  }
  if (k != 4) throw UsageError("region needs XMIN,XMAX,YMIN,YMAX");
  return {v[0], v[1], v[2], v[3]};
}

Json point_json(Complex z) { return Json::array({z.real(), z.imag()}); }

void print(const Json& j) { std::cout << j.dump(2) << '\n'; }

int error_exit(int code, const std::string& kind, const std::string& message, const std::string& file = {}) {
  Json e{{"kind", kind}, {"message", message}};
  if (!file.empty()) e["file"] = file;
  print(Json{{"schema_version", kSchemaVersion}, {"error", e}});
  return code;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::filesystem::path cache_dir(const std::string& flag) {
  return flag.empty() ? harnack::DensityCache::default_directory() : std::filesystem::path(flag);
}

struct Args {
  std::string cache_dir;
  // eval rho01
  std::string z, method = "auto";
  double tol = 1e-9;
  bool use_cache = false;
  // eval kobayashi
  std::string domain = "disk", from, to, region;
  unsigned grid = 257;
  // certify
  std::string suite, out;
  std::optional<std::uint64_t> seed;
  std::size_t samples = 200;
  double R = 1.0986122886681098, Rprime = 1.0;
  // cache
  unsigned nodes = 65;
  double fraction = 0.01;
  std::uint64_t verify_seed = 0;
};

int eval_rho01(const Args& a) {
  const Complex z = parse_point(a.z);
  harnack::DensityModel model(harnack::DomainTag::twice_punctured_plane, harnack::method_from_string(a.method), a.tol);
  if (a.use_cache) {
    auto cache = std::make_shared<harnack::DensityCache>(cache_dir(a.cache_dir));
    cache->load_all();
    model.attach_cache(cache);
  }
  const harnack::DensityEvaluation e = model.evaluate(z);
  print(Json{{"schema_version", kSchemaVersion},
             {"z", point_json(z)},
             {"rho", e.value},
             {"method", harnack::to_string(e.method)},
             {"err_est", e.error_estimate}});
  return kPass;
}

int eval_kobayashi(const Args& a) {
  const Complex from = parse_point(a.from), to = parse_point(a.to);
  const harnack::DomainTag domain = harnack::domain_from_string(a.domain);
  Json out{{"schema_version", kSchemaVersion}, {"domain", harnack::to_string(domain)},
           {"from", point_json(from)}, {"to", point_json(to)}};
  if (domain == harnack::DomainTag::unit_disk) {
    out["distance"] = harnack::kobayashi_disk(from, to);
    out["method"] = "closed_form";
    out["err_est"] = 0.0;
    print(out);
    return kPass;
  }
  if (a.grid < 3) throw UsageError("--grid must be at least 3");
  const harnack::GridRegion region =
      !a.region.empty() ? parse_region(a.region)
      : domain == harnack::DomainTag::punctured_disk ? harnack::GridRegion{-1, 1, -1, 1}
                                                     : harnack::GridRegion{-4, 4, -4, 4};
  const harnack::DensityModel model(domain);
  const harnack::GeodesicGrid g(model, region, a.grid, a.grid);
  const harnack::GeodesicGrid solved = harnack::kobayashi_grid_solve(g, from);
  const auto d = solved.distance_at(to);
  if (!d) throw harnack::DomainError("target is not reachable on the grid");
  const double h = std::max(g.hx(), g.hy());
  out["distance"] = *d;
  out["method"] = "fast_marching";
  out["err_est"] = h * std::max(model(from), model(to)) + solved.excision_error_bound();
  out["grid"] = a.grid;
  print(out);
  return kPass;
}

int certify(const Args& a) {
  harnack::cli::SuiteOptions o;
  o.seed = a.seed ? *a.seed : std::random_device{}();
  o.samples = a.samples;
  o.R = a.R;
  o.Rprime = a.Rprime;
  if (o.samples < 1) throw UsageError("--samples must be >= 1");
  Json certs;
  try {
    certs = harnack::cli::run_suite(a.suite, o);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  bool pass = true;
  for (const Json& c : certs) pass = pass && c.at("pass").get<bool>();
  const Json report{{"schema_version", kSchemaVersion},
                    {"command", "certify"},
                    {"suite", a.suite},
                    {"seed", o.seed},
                    {"samples", o.samples},
                    {"pass", pass},
                    {"certificates", certs},
                    {"generated_at", utc_now()}};
  if (!a.out.empty()) {
    std::ofstream f(a.out);
    if (!f) throw harnack::DomainError("cannot write " + a.out);
    f << report.dump(2) << '\n';
  }
  print(report);
  return pass ? kPass : kFailed;
}

int cache_build(const Args& a) {
  harnack::DensityCache cache(cache_dir(a.cache_dir));
  harnack::DensityGridKey key;
  key.region = a.region.empty() ? harnack::GridRegion{-2, 3, -2, 2} : parse_region(a.region);
  const double h = (key.region.xmax - key.region.xmin) / (a.nodes - 1);
  key.nx = a.nodes;
  key.ny = static_cast<std::uint32_t>(std::lround((key.region.ymax - key.region.ymin) / h)) + 1;
  key.method = harnack::method_from_string(a.method);
  key.tolerance = a.tol;
  cache.build(key);
  print(Json{{"schema_version", kSchemaVersion},
             {"command", "cache build"},
             {"directory", cache.directory().string()},
             {"file", key.file_name()},
             {"nx", key.nx},
             {"ny", key.ny}});
  return kPass;
}

int cache_verify(const Args& a) {
  harnack::DensityCache cache(cache_dir(a.cache_dir));
  const harnack::CacheVerifyReport r = cache.verify(a.fraction, a.verify_seed);
  print(Json{{"schema_version", kSchemaVersion},
             {"command", "cache verify"},
             {"directory", cache.directory().string()},
             {"files", r.files},
             {"nodes_checked", r.nodes_checked},
             {"worst_relative_deviation", r.worst_relative_deviation}});
  return kPass;
}

int cache_clear(const Args& a) {
  harnack::DensityCache cache(cache_dir(a.cache_dir));
  const std::size_t removed = cache.clear();
  print(Json{{"schema_version", kSchemaVersion},
             {"command", "cache clear"},
             {"directory", cache.directory().string()},
             {"removed", removed}});
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  Args a;
  CLI::App app{"Hyperbolic densities, distances and inequality certificates"};
  app.require_subcommand(1);
  app.add_option("--cache-dir", a.cache_dir, "Density cache directory (default: HARNACK_CACHE_DIR, XDG cache)");

  auto* eval = app.add_subcommand("eval", "Evaluate a density or a distance");
  eval->require_subcommand(1);
  auto* rho = eval->add_subcommand("rho01", "Density of the twice-punctured plane");
  rho->add_option("--z", a.z, "Point RE,IM")->required();
  rho->add_option("--method", a.method, "agard|modular|auto")->check(CLI::IsMember({"agard", "modular", "auto"}));
  rho->add_option("--tol", a.tol, "Relative quadrature tolerance")->check(CLI::PositiveNumber);
  rho->add_flag("--cache", a.use_cache, "Consult the density cache");
  auto* kob = eval->add_subcommand("kobayashi", "Kobayashi distance");
  kob->add_option("--domain", a.domain, "disk|punctured-disk|c01");
  kob->add_option("--from", a.from, "Point RE,IM")->required();
  kob->add_option("--to", a.to, "Point RE,IM")->required();
  kob->add_option("--grid", a.grid, "Fast-marching nodes per side");
  kob->add_option("--region", a.region, "XMIN,XMAX,YMIN,YMAX");

  auto* cert = app.add_subcommand("certify", "Run a certification suite");
  std::vector<std::string> suites = harnack::cli::suite_names();
  suites.push_back("all");
  cert->add_option("suite", a.suite, "Suite name")->required()->check(CLI::IsMember(suites));
  cert->add_option("--seed", a.seed, "Seed (generated and recorded when absent)");
  cert->add_option("--samples", a.samples, "Sample count")->check(CLI::PositiveNumber);
  cert->add_option("--R", a.R, "Kobayashi radius")->check(CLI::NonNegativeNumber);
  cert->add_option("--Rprime", a.Rprime, "Bound on |f(0)| (schottky)")->check(CLI::PositiveNumber);
  cert->add_option("--out", a.out, "Also write the report to this file");

  auto* cache = app.add_subcommand("cache", "Manage the density cache");
  cache->require_subcommand(1);
  auto* build = cache->add_subcommand("build", "Precompute a density grid");
  build->add_option("--region", a.region, "XMIN,XMAX,YMIN,YMAX");
  build->add_option("--nodes", a.nodes, "Nodes along x")->check(CLI::Range(2u, 4097u));
  build->add_option("--method", a.method, "agard|modular|auto")->check(CLI::IsMember({"agard", "modular", "auto"}));
  build->add_option("--tol", a.tol, "Relative quadrature tolerance")->check(CLI::PositiveNumber);
  auto* verify = cache->add_subcommand("verify", "Re-evaluate a sample of cached nodes");
  verify->add_option("--fraction", a.fraction, "Fraction of nodes")->check(CLI::Range(0.0, 1.0));
  verify->add_option("--seed", a.verify_seed, "Sampling seed");
  auto* clear = cache->add_subcommand("clear", "Remove cached grids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return error_exit(kUsage, "usage", e.what());
  }

  try {
    if (rho->parsed()) return eval_rho01(a);
    if (kob->parsed()) return eval_kobayashi(a);
    if (cert->parsed()) return certify(a);
    if (build->parsed()) return cache_build(a);
    if (verify->parsed()) return cache_verify(a);
    if (clear->parsed()) return cache_clear(a);
  } catch (const UsageError& e) {
    return error_exit(kUsage, "usage", e.what());
  } catch (const harnack::DataIntegrityError& e) {
    return error_exit(kIntegrity, e.kind(), e.what(), e.file());
  } catch (const harnack::Error& e) {
    return error_exit(kDomain, e.kind(), e.what());
  } catch (const std::invalid_argument& e) {
    return error_exit(kUsage, "usage", e.what());
  }
  return error_exit(kUsage, "usage", "no command");
}
