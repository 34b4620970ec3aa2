#include <harnack/geometry.hpp>
#include <harnack/kobayashi.hpp>

#include "quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <string>

namespace harnack {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<Complex> punctures_of(DomainTag d) {
  switch (d) {
    case DomainTag::unit_disk: return {};
    case DomainTag::punctured_disk: return {Complex{0.0}};
    case DomainTag::twice_punctured_plane: return {Complex{0.0}, Complex{1.0}};
  }
  return {};
}

double safe_density(const DensityModel& model, Complex z) {
  if (!model.contains(z)) return kNaN;
  try {
    const double v = model(z);
    return std::isfinite(v) && v > 0.0 ? v : kNaN;
  } catch (const Error&) {
    return kNaN;
  }
}

// Neighbour offsets in counter-clockwise order; even entries are axial.
constexpr std::array<std::array<int, 2>, 8> kRing = {{
    {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}}};

}  // namespace

void audit_chain(const DiskChain& c, double tol) {
  require_finite(c.start, "audit_chain");
  require_finite(c.end, "audit_chain");
  const std::size_t n = c.steps.size();
  if (n == 0) {
    if (std::abs(c.start - c.end) > tol) {
      throw MalformedChainError("empty chain with distinct endpoints", 0);
    }
    return;
  }
  Complex previous = c.start;
  for (std::size_t j = 0; j < n; ++j) {
    const auto& step = c.steps[j];
    if (!(std::abs(step.zeta) < 1.0)) {
      throw MalformedChainError("chain parameter " + std::to_string(j + 1) + " not in the disk",
                                j + 1);
    }
    const Complex origin = step.disk_map(Complex{0.0});
    if (!(std::abs(origin - previous) <= tol)) {
      throw MalformedChainError("chain broken at joint " + std::to_string(j), j);
    }
    previous = step.disk_map(step.zeta);
  }
  if (!(std::abs(previous - c.end) <= tol)) {
    throw MalformedChainError("chain misses its end point", n);
  }
}

double chain_length(const DiskChain& c, double tol) {
  audit_chain(c, tol);
  double total = 0.0;
  for (const auto& step : c.steps) {
    const double r = std::abs(step.zeta);
    total += std::log1p(r) - std::log1p(-r);
  }
  return total;
}

double kobayashi_disk(Complex z1, Complex z2) {
  require_finite(z1, "kobayashi_disk");
  require_finite(z2, "kobayashi_disk");
  if (!(std::abs(z1) < 1.0) || !(std::abs(z2) < 1.0)) {
    throw DomainError("kobayashi_disk: points must lie in the open unit disk");
  }
  return poincare_disk_distance(z1, z2);
}

double kobayashi_ball_center(std::span<const Complex> z, double R) {
  if (!(R > 0.0) || !std::isfinite(R)) throw DomainError("kobayashi_ball_center: R must be positive");
  for (const Complex& c : z) require_finite(c, "kobayashi_ball_center");
  const double r = hermitian_norm(z);
  if (!(r < R)) throw DomainError("kobayashi_ball_center: point outside the ball");
  return std::log((R + r) / (R - r));
}

// ---------------------------------------------------------------- grid

GeodesicGrid::GeodesicGrid(const DensityModel& model, GridRegion region, std::uint32_t nx,
                           std::uint32_t ny)
    : region_(region),
      domain_(model.domain()),
      method_(model.method()),
      tolerance_(model.tolerance()),
      nx_(nx),
      ny_(ny) {
  if (nx < 3 || ny < 3) throw DomainError("GeodesicGrid: need at least 3 x 3 nodes");
  if (!(region.xmax > region.xmin) || !(region.ymax > region.ymin) ||
      !std::isfinite(region.xmax - region.xmin) || !std::isfinite(region.ymax - region.ymin)) {
    throw DomainError("GeodesicGrid: empty or non-finite rectangle");
  }
  hx_ = (region.xmax - region.xmin) / (nx - 1);
  hy_ = (region.ymax - region.ymin) / (ny - 1);
  excision_ = 3.0 * std::max(hx_, hy_);
  punctures_ = punctures_of(domain_);

  const std::uint32_t fx = 2 * nx - 1, fy = 2 * ny - 1;
  fine_.assign(static_cast<std::size_t>(fx) * fy, kNaN);
  for (std::uint32_t J = 0; J < fy; ++J) {
    for (std::uint32_t I = 0; I < fx; ++I) {
      const Complex z{region.xmin + 0.5 * hx_ * I, region.ymin + 0.5 * hy_ * J};
      fine_[fine_index(I, J)] = safe_density(model, z);
    }
  }
  excluded_.assign(static_cast<std::size_t>(nx) * ny, 0);
  for (std::uint32_t j = 0; j < ny; ++j) {
    for (std::uint32_t i = 0; i < nx; ++i) {
      const Complex z = node(i, j);
      bool out = std::isnan(fine_[fine_index(2 * i, 2 * j)]);
      for (const Complex& p : punctures_) out = out || std::abs(z - p) < excision_;
      excluded_[index(i, j)] = out ? 1 : 0;
    }
  }
  distance_.assign(excluded_.size(), kInf);

  for (const Complex& p : punctures_) {
    double top = 0.0;
    for (int k = 0; k < 64; ++k) {
      const double v =
          safe_density(model, p + std::polar(excision_, 2.0 * std::numbers::pi * (k + 0.5) / 64));
      if (std::isfinite(v)) top = std::max(top, v);
    }
    excision_bound_ += std::numbers::pi * excision_ * top;
  }
}

Complex GeodesicGrid::node(std::uint32_t i, std::uint32_t j) const {
  return {region_.xmin + hx_ * i, region_.ymin + hy_ * j};
}

bool GeodesicGrid::excluded(std::uint32_t i, std::uint32_t j) const {
  return excluded_.at(index(i, j)) != 0;
}

double GeodesicGrid::density(std::uint32_t i, std::uint32_t j) const {
  if (i >= nx_ || j >= ny_) throw DomainError("GeodesicGrid: node index out of range");
  return excluded(i, j) ? kNaN : fine_[fine_index(2 * i, 2 * j)];
}

std::optional<double> GeodesicGrid::distance(std::uint32_t i, std::uint32_t j) const {
  if (!solved_ || excluded(i, j)) return std::nullopt;
  const double t = distance_[index(i, j)];
  if (!std::isfinite(t)) return std::nullopt;
  return t;
}

std::optional<double> GeodesicGrid::distance_at(Complex z) const {
  require_finite(z, "GeodesicGrid::distance_at");
  if (!solved_) return std::nullopt;
  const double fx = (z.real() - region_.xmin) / hx_, fy = (z.imag() - region_.ymin) / hy_;
  if (fx < -1e-9 || fy < -1e-9 || fx > nx_ - 1 + 1e-9 || fy > ny_ - 1 + 1e-9) {
    throw DomainError("GeodesicGrid: query outside the grid");
  }
  const auto i0 = static_cast<std::uint32_t>(std::clamp(std::floor(fx), 0.0, double(nx_ - 2)));
  const auto j0 = static_cast<std::uint32_t>(std::clamp(std::floor(fy), 0.0, double(ny_ - 2)));
  const double s = std::clamp(fx - i0, 0.0, 1.0), t = std::clamp(fy - j0, 0.0, 1.0);
  const std::array<std::optional<double>, 4> c = {distance(i0, j0), distance(i0 + 1, j0),
                                                  distance(i0, j0 + 1), distance(i0 + 1, j0 + 1)};
  if (c[0] && c[1] && c[2] && c[3]) {
    return (1 - s) * (1 - t) * *c[0] + s * (1 - t) * *c[1] + (1 - s) * t * *c[2] + s * t * *c[3];
  }
  const std::array<double, 4> w = {std::hypot(s, t), std::hypot(1 - s, t), std::hypot(s, 1 - t),
                                   std::hypot(1 - s, 1 - t)};
  std::optional<double> best;
  double best_w = kInf;
  for (int k = 0; k < 4; ++k) {
    if (c[k] && w[k] < best_w) {
      best = c[k];
      best_w = w[k];
    }
  }
  return best;
}

double GeodesicGrid::eikonal_defect() const {
  double worst = 0.0;
  for (std::uint32_t j = 0; j < ny_; ++j) {
    for (std::uint32_t i = 0; i < nx_; ++i) {
      const auto tx = distance(i, j);
      if (!tx) continue;
      for (const auto& [di, dj] : kRing) {
        const long ni = long(i) + di, nj = long(j) + dj;
        if (ni < 0 || nj < 0 || ni >= long(nx_) || nj >= long(ny_)) continue;
        const auto ty = distance(std::uint32_t(ni), std::uint32_t(nj));
        const double rho = mid_density(i, j, di, dj);
        if (!ty || std::isnan(rho)) continue;
        worst = std::max(worst, *tx - (*ty + rho * std::hypot(di * hx_, dj * hy_)));
      }
    }
  }
  return worst;
}

void GeodesicGrid::write(const std::filesystem::path& path) const {
  GridFile f;
  f.header.region = region_;
  f.header.nx = nx_;
  f.header.ny = ny_;
  f.header.tolerance = tolerance_;
  f.header.tag = static_cast<std::uint8_t>(
      static_cast<std::uint8_t>(method_) |
      static_cast<std::uint8_t>(static_cast<int>(domain_) << grid_tag::kDomainShift) |
      (solved_ ? grid_tag::kGeodesic : grid_tag::kDensity));
  std::vector<double> dens(excluded_.size());
  for (std::uint32_t j = 0; j < ny_; ++j) {
    for (std::uint32_t i = 0; i < nx_; ++i) dens[index(i, j)] = density(i, j);
  }
  f.planes.push_back(std::move(dens));
  if (solved_) f.planes.push_back(distance_);
  write_grid_file(path, f);
}

GeodesicGrid GeodesicGrid::read(const std::filesystem::path& path) {
  const GridFile f = read_grid_file(path);
  const auto tag = f.header.tag;
  const int dom = tag >> grid_tag::kDomainShift;
  const auto method = static_cast<DensityMethod>(tag & grid_tag::kMethodMask);
  const bool geodesic = (tag & grid_tag::kGeodesic) != 0;
  if (dom > 2 || static_cast<int>(method) > 3 || (tag & grid_tag::kComplexField) != 0 ||
      f.planes.size() != (geodesic ? 2u : 1u) || f.header.nx < 3 || f.header.ny < 3 ||
      !(f.header.tolerance > 0.0)) {
    throw DataIntegrityError("geodesic grid: inconsistent header", path.string());
  }
  GeodesicGrid g;
  g.region_ = f.header.region;
  g.domain_ = static_cast<DomainTag>(dom);
  g.method_ = method;
  g.tolerance_ = f.header.tolerance;
  g.nx_ = f.header.nx;
  g.ny_ = f.header.ny;
  g.hx_ = (g.region_.xmax - g.region_.xmin) / (g.nx_ - 1);
  g.hy_ = (g.region_.ymax - g.region_.ymin) / (g.ny_ - 1);
  if (!(g.hx_ > 0.0) || !(g.hy_ > 0.0)) {
    throw DataIntegrityError("geodesic grid: empty rectangle", path.string());
  }
  g.excision_ = 3.0 * std::max(g.hx_, g.hy_);
  g.punctures_ = punctures_of(g.domain_);
  const auto& nodes = f.planes[0];
  g.excluded_.resize(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (!std::isnan(nodes[k]) && !(nodes[k] > 0.0)) {
      throw DataIntegrityError("geodesic grid: non-positive density", path.string());
    }
    g.excluded_[k] = std::isnan(nodes[k]) ? 1 : 0;
  }
  const std::uint32_t fx = 2 * g.nx_ - 1, fy = 2 * g.ny_ - 1;
  g.fine_.assign(static_cast<std::size_t>(fx) * fy, kNaN);
  for (std::uint32_t J = 0; J < fy; ++J) {
    for (std::uint32_t I = 0; I < fx; ++I) {
      double sum = 0.0;
      int count = 0;
      for (std::uint32_t j = J / 2; j <= (J + 1) / 2; ++j) {
        for (std::uint32_t i = I / 2; i <= (I + 1) / 2; ++i) {
          const double v = nodes[g.index(i, j)];
          if (!std::isnan(v)) {
            sum += v;
            ++count;
          }
        }
      }
      if (count > 0) g.fine_[g.fine_index(I, J)] = sum / count;
    }
  }
  if (geodesic) {
    g.distance_ = f.planes[1];
    for (std::size_t k = 0; k < g.distance_.size(); ++k) {
      const double t = g.distance_[k];
      if (std::isnan(t) || t < 0.0) {
        throw DataIntegrityError("geodesic grid: invalid distance value", path.string());
      }
    }
    g.solved_ = true;
    g.source_ = Complex{kNaN, kNaN};
  } else {
    g.distance_.assign(nodes.size(), kInf);
  }
  const DensityModel model(g.domain_, g.method_, g.tolerance_);
  for (const Complex& p : g.punctures_) {
    double top = 0.0;
    for (int k = 0; k < 64; ++k) {
      const double v = safe_density(
          model, p + std::polar(g.excision_, 2.0 * std::numbers::pi * (k + 0.5) / 64));
      if (std::isfinite(v)) top = std::max(top, v);
    }
    g.excision_bound_ += std::numbers::pi * g.excision_ * top;
  }
  return g;
}

// ---------------------------------------------------------------- fast marching

GeodesicGrid kobayashi_grid_solve(const GeodesicGrid& grid, Complex source) {
  require_finite(source, "kobayashi_grid_solve");
  GeodesicGrid g = grid;
  const GridRegion& r = g.region_;
  if (source.real() < r.xmin || source.real() > r.xmax || source.imag() < r.ymin ||
      source.imag() > r.ymax) {
    throw DomainError("kobayashi_grid_solve: source outside the grid");
  }
  const DensityModel model(g.domain_, g.method_, g.tolerance_);
  if (!model.contains(source)) throw DomainError("kobayashi_grid_solve: source outside the domain");
  const double fx = (source.real() - r.xmin) / g.hx_, fy = (source.imag() - r.ymin) / g.hy_;
  const auto ni = static_cast<std::uint32_t>(std::lround(fx));
  const auto nj = static_cast<std::uint32_t>(std::lround(fy));
  if (g.excluded(ni, nj)) throw DomainError("kobayashi_grid_solve: source on an excluded node");

  const std::size_t n = g.excluded_.size();
  std::fill(g.distance_.begin(), g.distance_.end(), kInf);
  std::vector<char> known(n, 0);
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;

  const auto i0 = static_cast<std::uint32_t>(std::min<double>(std::floor(fx), g.nx_ - 2));
  const auto j0 = static_cast<std::uint32_t>(std::min<double>(std::floor(fy), g.ny_ - 2));
  for (std::uint32_t j = j0; j <= j0 + 1; ++j) {
    for (std::uint32_t i = i0; i <= i0 + 1; ++i) {
      if (g.excluded(i, j)) continue;
      const Complex z = g.node(i, j);
      double t = 0.0;
      if (z != source) {
        const double rho = safe_density(model, 0.5 * (z + source));
        if (std::isnan(rho)) continue;
        t = rho * std::abs(z - source);
      }
      g.distance_[g.index(i, j)] = t;
      heap.emplace(t, g.index(i, j));
    }
  }

  const auto value = [&](long i, long j) -> double {
    if (i < 0 || j < 0 || i >= long(g.nx_) || j >= long(g.ny_)) return kInf;
    const std::size_t k = g.index(std::uint32_t(i), std::uint32_t(j));
    return known[k] ? g.distance_[k] : kInf;
  };

  // Smallest arrival time at node (i, j) from its known neighbours.
  const auto update = [&](std::uint32_t i, std::uint32_t j) {
    double best = kInf;
    std::array<double, 8> t{}, rho{};
    std::array<double, 8> len{};
    for (int k = 0; k < 8; ++k) {
      const auto [di, dj] = kRing[k];
      t[k] = value(long(i) + di, long(j) + dj);
      rho[k] = std::isfinite(t[k]) ? g.mid_density(i, j, di, dj) : kNaN;
      len[k] = std::hypot(di * g.hx_, dj * g.hy_);
      if (std::isfinite(t[k]) && !std::isnan(rho[k])) best = std::min(best, t[k] + rho[k] * len[k]);
    }
    for (int a = 0; a < 8; a += 2) {
      const double ha = kRing[a][0] != 0 ? g.hx_ : g.hy_;
      const double hb = kRing[a][0] != 0 ? g.hy_ : g.hx_;
      for (int b : {(a + 1) % 8, (a + 7) % 8}) {
        if (!std::isfinite(t[a]) || !std::isfinite(t[b]) || std::isnan(rho[a]) ||
            std::isnan(rho[b])) {
          continue;
        }
        const double p = 0.5 * (rho[a] + rho[b]);
        const double c = (t[a] - t[b]) / (p * hb);
        if (!(c > 0.0 && c < 1.0)) continue;
        const double s = c / std::sqrt(1.0 - c * c) * ha / hb;
        if (s >= 1.0) continue;
        best = std::min(best, (1.0 - s) * t[a] + s * t[b] + p * std::hypot(ha, s * hb));
      }
    }
    return best;
  };

  double front = 0.0;
  while (!heap.empty()) {
    const auto [t, k] = heap.top();
    heap.pop();
    if (known[k] || t != g.distance_[k]) continue;
    if (t < front - 1e-12 * (1.0 + front)) {
      throw InternalError("kobayashi_grid_solve: accepted value below the marching front");
    }
    front = std::max(front, t);
    known[k] = 1;
    const auto i = static_cast<std::uint32_t>(k % g.nx_), j = static_cast<std::uint32_t>(k / g.nx_);
    for (const auto& [di, dj] : kRing) {
      const long ii = long(i) + di, jj = long(j) + dj;
      if (ii < 0 || jj < 0 || ii >= long(g.nx_) || jj >= long(g.ny_)) continue;
      const std::size_t m = g.index(std::uint32_t(ii), std::uint32_t(jj));
      if (known[m] || g.excluded_[m]) continue;
      const double cand = update(std::uint32_t(ii), std::uint32_t(jj));
      if (cand < t - 1e-12 * (1.0 + t)) {
        throw InternalError("kobayashi_grid_solve: non-monotone update");
      }
      if (cand < g.distance_[m]) {
        g.distance_[m] = cand;
        heap.emplace(cand, m);
      }
    }
  }
  g.solved_ = true;
  g.source_ = source;
  return g;
}

// ---------------------------------------------------------------- Schwarz

Certificate verify_schwarz_contraction(const AnalyticFunction& f, DomainTag source,
                                       DomainTag target, std::span<const PointPair> pairs,
                                       const CheckOptions& opts) {
  Certificate cert("schwarz_contraction", opts.seed, opts.tolerance);
  const DensityModel src(source), tgt(target);
  const auto audit = [&](Complex w) {
    const Complex fw = f(w);
    if (!tgt.contains(fw)) {
      throw AuditError("schwarz_contraction: f leaves the target domain",
                       {w.real(), w.imag(), fw.real(), fw.imag()});
    }
    return fw;
  };
  for (const auto& [z, z0] : pairs) {
    if (!src.contains(z) || !src.contains(z0)) {
      throw DomainError("schwarz_contraction: pair outside the source domain");
    }
    for (int k = 0; k <= 16; ++k) audit(z0 + (z - z0) * (k / 16.0));
    if (source == DomainTag::unit_disk && target == DomainTag::unit_disk) {
      const double ks = opts.bound_scale * kobayashi_disk(z, z0);
      const double kt = kobayashi_disk(f(z), f(z0));
      cert.record(ks - kt, {z.real(), z.imag(), z0.real(), z0.imag()});
      continue;
    }
    const Complex dz = z - z0;
    const double step = std::abs(dz);
    const double ls = detail::integrate(
        [&](double t) { return src(z0 + t * dz) * step; }, 0.0, 1.0, 1e-11, nullptr);
    const double lt = detail::integrate(
        [&](double t) {
          const Complex w = z0 + t * dz;
          return tgt(audit(w)) * std::abs(f.derivative(w)) * step;
        },
        0.0, 1.0, 1e-11, nullptr);
    const double scaled = opts.bound_scale * ls;
    const double slack = (scaled - lt) / std::max(std::abs(scaled), std::abs(lt));
    cert.record(slack, {z.real(), z.imag(), z0.real(), z0.imag()});
  }
  cert.details["source_domain"] = static_cast<int>(source);
  cert.details["target_domain"] = static_cast<int>(target);
  cert.finalize();
  return cert;
}

}  // namespace harnack
