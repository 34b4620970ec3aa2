#include <harnack/dbar.hpp>

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <string>

namespace harnack {
namespace {

constexpr double kPi = std::numbers::pi;

bool is_zero(Complex v) { return v.real() == 0.0 && v.imag() == 0.0; }

std::vector<double> node_witness(Complex z) { return {z.real(), z.imag()}; }

// Visits every node as (i, j, z).
template <class Fn>
void for_each_node(const GridField& g, Fn&& fn) {
  for (std::uint32_t j = 0; j < g.ny(); ++j)
    for (std::uint32_t i = 0; i < g.nx(); ++i) fn(i, j, g.node(i, j));
}

struct FftwPlan {
  fftw_plan plan = nullptr;
  ~FftwPlan() {
    if (plan) fftw_destroy_plan(plan);
  }
};

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n)
      : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))), size(n) {
    if (!data) throw std::bad_alloc();
    std::fill_n(reinterpret_cast<double*>(data), 2 * n, 0.0);
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  Complex get(std::size_t k) const { return {data[k][0], data[k][1]}; }
  void set(std::size_t k, Complex v) {
    data[k][0] = v.real();
    data[k][1] = v.imag();
  }
  fftw_complex* data;
  std::size_t size;
};

void forward(FftwBuffer& buf, int n0, int n1) {
  FftwPlan p;
  p.plan = fftw_plan_dft_2d(n0, n1, buf.data, buf.data, FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_execute(p.plan);
}

void backward(FftwBuffer& buf, int n0, int n1) {
  FftwPlan p;
  p.plan = fftw_plan_dft_2d(n0, n1, buf.data, buf.data, FFTW_BACKWARD, FFTW_ESTIMATE);
  fftw_execute(p.plan);
}

// Un-normalized transform by zero-padded FFT convolution with the node kernel.
GridField transform_fft(const GridField& a) {
  const std::uint32_t nx = a.nx(), ny = a.ny();
  const std::size_t px = 2 * static_cast<std::size_t>(nx), py = 2 * static_cast<std::size_t>(ny);
  const double h = a.h();
  FftwBuffer data(px * py), kernel(px * py);
  for (std::uint32_t j = 0; j < ny; ++j)
    for (std::uint32_t i = 0; i < nx; ++i) data.set(j * px + i, a.at(i, j));
  for (long dy = -static_cast<long>(ny) + 1; dy < static_cast<long>(ny); ++dy)
    for (long dx = -static_cast<long>(nx) + 1; dx < static_cast<long>(nx); ++dx) {
      if (dx == 0 && dy == 0) continue;
      const std::size_t ix = static_cast<std::size_t>((dx + static_cast<long>(px)) % static_cast<long>(px));
      const std::size_t iy = static_cast<std::size_t>((dy + static_cast<long>(py)) % static_cast<long>(py));
      kernel.set(iy * px + ix, 1.0 / (h * Complex(static_cast<double>(dx), static_cast<double>(dy))));
    }
  forward(data, static_cast<int>(py), static_cast<int>(px));
  forward(kernel, static_cast<int>(py), static_cast<int>(px));
  for (std::size_t k = 0; k < px * py; ++k) data.set(k, data.get(k) * kernel.get(k));
  backward(data, static_cast<int>(py), static_cast<int>(px));
  // 1/(zeta_j - z_i) = -K[i - j], so T = (h^2/pi) (a * K).
  const double scale = h * h / kPi / static_cast<double>(px * py);
  GridField out(a.region(), nx, ny);
  for (std::uint32_t j = 0; j < ny; ++j)
    for (std::uint32_t i = 0; i < nx; ++i) out.at(i, j) = scale * data.get(j * px + i);
  return out;
}

Complex transform_direct(const GridField& a, Complex z) {
  const double h = a.h();
  const double coincide = 1e-9 * h;
  Complex sum{};
  for_each_node(a, [&](std::uint32_t i, std::uint32_t j, Complex zeta) {
    const Complex v = a.at(i, j);
    if (is_zero(v)) return;
    const Complex d = zeta - z;
    if (std::abs(d) <= coincide) return;
    sum += v / d;
  });
  return -h * h / kPi * sum;
}

void validate_exponents(double p, double pp) {
  if (!(p > 2.0) || !std::isfinite(p)) throw DomainError("exponent p must exceed 2");
  if (!(pp > 1.0 && pp < 2.0)) throw DomainError("exponent p' must lie in (1, 2)");
}

// Norms of the admissible A and the hypothesis audits shared by both factories.
void finish_witness(LogLipschitzWitness& w) {
  const GridField& a = w.a;
  if (!a.contains(Complex{})) throw DomainError("witness grid must contain 0");
  GridField A(a.region(), a.nx(), a.ny());
  if (w.domain == WitnessDomain::disk) {
    if (w.M != 1.0) throw DomainError("disk witness requires M = 1");
    for_each_node(a, [&](std::uint32_t i, std::uint32_t j, Complex z) {
      if (std::abs(z) >= 1.0) {
        if (!is_zero(a.at(i, j)))
          throw HypothesisError("coefficient is not supported in the unit disk", node_witness(z));
        return;
      }
      const Complex g = w.g(z);
      if (!(g.real() > 1.0)) throw HypothesisError("|f| >= 1/e on the disk", node_witness(z));
      A.at(i, j) = std::abs(a.at(i, j)) * std::abs(g) / g.real();
    });
    w.norm_p = lp_norm(A, w.p, true);
    w.norm_pp = lp_norm(A, w.pp, true);
    return;
  }
  const double logM = std::log(w.M);
  for_each_node(a, [&](std::uint32_t i, std::uint32_t j, Complex z) {
    const bool edge = i == 0 || j == 0 || i + 1 == a.nx() || j + 1 == a.ny();
    if (edge && !is_zero(a.at(i, j)))
      throw HypothesisError("coefficient does not vanish on the grid boundary", node_witness(z));
    if (!(w.g(z).real() > logM)) throw HypothesisError("|f| >= 1 on the plane", node_witness(z));
    A.at(i, j) = std::abs(a.at(i, j));
  });
  const Complex g_inf = w.g0 * std::exp(w.ahat_infinity);
  if (!(g_inf.real() > logM))
    throw HypothesisError("|f| >= 1 at infinity", {std::numeric_limits<double>::infinity(), 0.0});
  w.norm_p = lp_norm(A, w.p);
  w.norm_pp = lp_norm(A, w.pp);
}

void validate_witness_inputs(Complex g0, double M, double p, double pp) {
  if (!(g0.real() > 1.0) || !std::isfinite(g0.imag())) throw DomainError("Re g0 must exceed 1");
  if (!(M >= 1.0) || !std::isfinite(M)) throw DomainError("M must be finite and >= 1");
  validate_exponents(p, pp);
}

// Sup and inf of Re a_hat over the grid nodes, infinity (plane) and extra points.
std::pair<double, double> re_ahat_range(const LogLipschitzWitness& w, std::span<const Complex> extra) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  auto take = [&](double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  };
  for_each_node(w.ahat, [&](std::uint32_t, std::uint32_t, Complex z) {
    if (w.domain == WitnessDomain::disk && std::abs(z) >= 1.0) return;
    take(w.ahat_at(z).real());
  });
  if (w.domain == WitnessDomain::plane) take(w.ahat_infinity.real());
  for (Complex z : extra) take(w.ahat_at(z).real());
  return {lo, hi};
}

}  // namespace

GridField::GridField(GridRegion region, std::uint32_t nx, std::uint32_t ny)
    : region_(region), nx_(nx), ny_(ny) {
  if (nx < 2 || ny < 2) throw DomainError("grid needs at least 2 x 2 nodes");
  if (!(region.xmax > region.xmin) || !(region.ymax > region.ymin) || !std::isfinite(region.xmin) ||
      !std::isfinite(region.xmax) || !std::isfinite(region.ymin) || !std::isfinite(region.ymax))
    throw DomainError("grid region must be a finite non-empty rectangle");
  const double hx = (region.xmax - region.xmin) / (nx - 1);
  const double hy = (region.ymax - region.ymin) / (ny - 1);
  if (std::abs(hx - hy) > 1e-9 * std::max(hx, hy)) throw DomainError("grid cells must be square");
  h_ = hx;
  values_.assign(static_cast<std::size_t>(nx) * ny, Complex{});
}

GridField GridField::sample(GridRegion region, std::uint32_t nx, std::uint32_t ny,
                            const std::function<Complex(Complex)>& fn) {
  GridField g(region, nx, ny);
  for (std::uint32_t j = 0; j < ny; ++j)
    for (std::uint32_t i = 0; i < nx; ++i) {
      const Complex v = fn(g.node(i, j));
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw DomainError("field sample is not finite");
      g.at(i, j) = v;
    }
  return g;
}

Complex GridField::node(std::uint32_t i, std::uint32_t j) const {
  return {region_.xmin + i * h_, region_.ymin + j * h_};
}

bool GridField::contains(Complex z) const {
  const double eps = 1e-12 * h_;
  return z.real() >= region_.xmin - eps && z.real() <= region_.xmax + eps &&
         z.imag() >= region_.ymin - eps && z.imag() <= region_.ymax + eps;
}

std::optional<std::pair<std::uint32_t, std::uint32_t>> GridField::node_index(Complex z) const {
  if (!contains(z)) return std::nullopt;
  const double fi = (z.real() - region_.xmin) / h_, fj = (z.imag() - region_.ymin) / h_;
  const double ri = std::round(fi), rj = std::round(fj);
  if (std::abs(fi - ri) > 1e-9 || std::abs(fj - rj) > 1e-9) return std::nullopt;
  return std::pair{static_cast<std::uint32_t>(ri), static_cast<std::uint32_t>(rj)};
}

Complex GridField::interpolate(Complex z) const {
  if (!contains(z)) throw DomainError("point lies outside the grid");
  if (auto n = node_index(z)) return at(n->first, n->second);
  const double fi = std::clamp((z.real() - region_.xmin) / h_, 0.0, double(nx_ - 1));
  const double fj = std::clamp((z.imag() - region_.ymin) / h_, 0.0, double(ny_ - 1));
  const auto i0 = std::min<std::uint32_t>(static_cast<std::uint32_t>(fi), nx_ - 2);
  const auto j0 = std::min<std::uint32_t>(static_cast<std::uint32_t>(fj), ny_ - 2);
  const double s = fi - i0, t = fj - j0;
  return (1 - s) * (1 - t) * at(i0, j0) + s * (1 - t) * at(i0 + 1, j0) +
         (1 - s) * t * at(i0, j0 + 1) + s * t * at(i0 + 1, j0 + 1);
}

double GridField::max_abs() const {
  double m = 0.0;
  for (const Complex& v : values_) m = std::max(m, std::abs(v));
  return m;
}

void GridField::write(const std::filesystem::path& path, std::uint8_t kind) const {
  if (kind > grid_tag::kMethodMask) throw DomainError("field kind must fit in 4 bits");
  GridFile f;
  f.header.region = region_;
  f.header.nx = nx_;
  f.header.ny = ny_;
  f.header.tag = static_cast<std::uint8_t>(grid_tag::kComplexField | kind);
  f.header.tolerance = 0.0;
  std::vector<double> re(values_.size()), im(values_.size());
  for (std::size_t k = 0; k < values_.size(); ++k) {
    re[k] = values_[k].real();
    im[k] = values_[k].imag();
  }
  f.planes = {std::move(re), std::move(im)};
  write_grid_file(path, f);
}

GridField GridField::read(const std::filesystem::path& path, std::uint8_t* kind) {
  const GridFile f = read_grid_file(path);
  const std::string origin = path.string();
  if ((f.header.tag & ~grid_tag::kMethodMask) != grid_tag::kComplexField || f.planes.size() != 2)
    throw DataIntegrityError("not a complex field grid", origin);
  GridField g = [&] {
    try {
      return GridField(f.header.region, f.header.nx, f.header.ny);
    } catch (const DomainError& e) {
      throw DataIntegrityError(e.what(), origin);
    }
  }();
  for (std::size_t k = 0; k < g.values_.size(); ++k) {
    const Complex v{f.planes[0][k], f.planes[1][k]};
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw DataIntegrityError("non-finite field value", origin);
    g.values_[k] = v;
  }
  if (kind) *kind = f.header.tag & grid_tag::kMethodMask;
  return g;
}

GridField cauchy_transform(const GridField& a, bool normalize_at_zero, TransformMethod method) {
  GridField out(a.region(), a.nx(), a.ny());
  if (method == TransformMethod::fft) {
    out = transform_fft(a);
  } else {
    for_each_node(a, [&](std::uint32_t i, std::uint32_t j, Complex z) { out.at(i, j) = transform_direct(a, z); });
  }
  if (normalize_at_zero) {
    const auto zero = a.node_index(Complex{});
    const Complex t0 = zero ? out.at(zero->first, zero->second) : transform_direct(a, Complex{});
    for (Complex& v : out.values()) v -= t0;
    if (zero) out.at(zero->first, zero->second) = Complex{};
  }
  return out;
}

Complex cauchy_transform_at(const GridField& a, Complex z, bool normalize_at_zero) {
  require_finite(z, "z");
  const Complex t = transform_direct(a, z);
  return normalize_at_zero ? t - transform_direct(a, Complex{}) : t;
}

GridField dbar(const GridField& u) {
  GridField out(u.region(), u.nx(), u.ny());
  const double h = u.h();
  for (std::uint32_t j = 1; j + 1 < u.ny(); ++j)
    for (std::uint32_t i = 1; i + 1 < u.nx(); ++i) {
      const Complex dx = (u.at(i + 1, j) - u.at(i - 1, j)) / (2 * h);
      const Complex dy = (u.at(i, j + 1) - u.at(i, j - 1)) / (2 * h);
      out.at(i, j) = 0.5 * (dx + Complex(0, 1) * dy);
    }
  return out;
}

Complex disk_indicator_transform(Complex z, Complex center, double radius) {
  if (!(radius > 0.0)) throw DomainError("radius must be positive");
  const Complex d = z - center;
  if (std::abs(d) < radius) return std::conj(d);
  return radius * radius / d;
}

GridField disk_indicator_field(GridRegion region, std::uint32_t n, Complex center, double radius,
                               Complex value, int sub) {
  if (!(radius > 0.0)) throw DomainError("radius must be positive");
  if (sub < 1) throw DomainError("sub-sampling must be positive");
  const double h = (region.xmax - region.xmin) / (n - 1);
  const std::uint32_t ny = static_cast<std::uint32_t>(std::lround((region.ymax - region.ymin) / h)) + 1;
  return GridField::sample(region, n, ny, [&](Complex z) {
    if (std::abs(z - center) > radius + h) return Complex{};
    if (std::abs(z - center) < radius - h) return value;
    int inside = 0;
    for (int b = 0; b < sub; ++b)
      for (int c = 0; c < sub; ++c) {
        const Complex q = z + h * Complex((c + 0.5) / sub - 0.5, (b + 0.5) / sub - 0.5);
        if (std::abs(q - center) < radius) ++inside;
      }
    return value * (static_cast<double>(inside) / (sub * sub));
  });
}

double c0_constant(double p) {
  if (!(p > 2.0)) throw DomainError("exponent p must exceed 2");
  const double q = p / (p - 1.0);
  return 2.0 / kPi * std::pow(2.0 * kPi / (2.0 - q), 1.0 / q);
}

double c1_constant(double p, double pp) {
  validate_exponents(p, pp);
  const double q = p / (p - 1.0), qq = pp / (pp - 1.0);
  const double near = std::pow(2.0 * kPi / (2.0 - q), 1.0 / q);
  const double far = std::pow(2.0 * kPi / (qq - 2.0), 1.0 / qq);
  return 4.0 / kPi * std::max(near, far);
}

double prop5_constant(double p, double norm_p) {
  if (!(norm_p >= 0.0)) throw DomainError("norm must be non-negative");
  return kPi + 3.0 * std::pow(2.0, 1.0 - 2.0 / p) * c0_constant(p) * norm_p;
}

double lp_norm(const GridField& v, double p, bool unit_disk_only) {
  if (!(p >= 1.0)) throw DomainError("exponent must be >= 1");
  double sum = 0.0;
  for_each_node(v, [&](std::uint32_t i, std::uint32_t j, Complex z) {
    if (unit_disk_only && std::abs(z) >= 1.0) return;
    sum += std::pow(std::abs(v.at(i, j)), p);
  });
  return std::pow(sum * v.h() * v.h(), 1.0 / p);
}

SchwarzIntegral::SchwarzIntegral(std::vector<double> im_boundary) : im_(std::move(im_boundary)) {
  if (im_.size() < 8) throw DomainError("need at least 8 boundary samples");
  for (double v : im_)
    if (!std::isfinite(v)) throw DomainError("boundary sample is not finite");
  const std::size_t n = im_.size();
  zeta_.reserve(n);
  for (std::size_t k = 0; k < n; ++k) zeta_.push_back(std::polar(1.0, 2.0 * kPi * k / n));
}

Complex SchwarzIntegral::operator()(Complex z) const {
  require_finite(z, "z");
  if (!(std::abs(z) < 1.0)) throw DomainError("Schwarz integral needs |z| < 1");
  Complex sum{};
  for (std::size_t k = 0; k < im_.size(); ++k) sum += im_[k] * (zeta_[k] + z) / (zeta_[k] - z);
  return Complex(0, 1) * sum / static_cast<double>(im_.size());
}

GridField SchwarzIntegral::on_grid(GridRegion region, std::uint32_t n, double radius) const {
  if (!(radius > 0.0 && radius < 1.0)) throw DomainError("radius must lie in (0, 1)");
  const double h = (region.xmax - region.xmin) / (n - 1);
  const std::uint32_t ny = static_cast<std::uint32_t>(std::lround((region.ymax - region.ymin) / h)) + 1;
  return GridField::sample(region, n, ny,
                           [&](Complex z) { return std::abs(z) <= radius ? (*this)(z) : Complex{}; });
}

double cauchy_riemann_residual(const SchwarzIntegral& h, GridRegion region, std::uint32_t n, double radius,
                               double delta) {
  if (!(radius > 0.0 && radius + 2 * delta < 1.0)) throw DomainError("radius + delta must lie in (0, 1)");
  GridField nodes(region, n, n);
  double worst = 0.0;
  for_each_node(nodes, [&](std::uint32_t, std::uint32_t, Complex z) {
    if (std::abs(z) > radius) return;
    // Fourth-order central differences.
    auto diff = [&](Complex step) {
      return (8.0 * (h(z + step) - h(z - step)) - (h(z + 2.0 * step) - h(z - 2.0 * step))) / (12.0 * delta);
    };
    const Complex dx = diff(delta), dy = diff(Complex(0, delta));
    worst = std::max(worst, std::abs(0.5 * (dx + Complex(0, 1) * dy)));
  });
  return worst;
}

Complex LogLipschitzWitness::ahat_at(Complex z) const {
  require_finite(z, "z");
  if (ahat_exact) return ahat_exact(z);
  return ahat.interpolate(z);
}

double LogLipschitzWitness::dbar_f_abs(Complex z) const {
  const Complex av = a.contains(z) ? a.interpolate(z) : Complex{};
  return std::abs(av * g(z) * f(z));
}

double LogLipschitzWitness::A_at(Complex z) const {
  const double av = a.contains(z) ? std::abs(a.interpolate(z)) : 0.0;
  if (domain == WitnessDomain::plane) return av;
  const Complex gz = g(z);
  return av * std::abs(gz) / gz.real();
}

LogLipschitzWitness make_witness(GridField a, Complex g0, double M, WitnessDomain domain, double p, double pp) {
  validate_witness_inputs(g0, M, p, pp);
  if (!a.contains(Complex{})) throw DomainError("witness grid must contain 0");
  LogLipschitzWitness w{domain, a, cauchy_transform(a, true), g0, M, p, pp, {}, {}, 0.0, 0.0};
  w.ahat_infinity = -transform_direct(w.a, Complex{});
  finish_witness(w);
  return w;
}

LogLipschitzWitness make_indicator_witness(Complex c, Complex center, double radius, Complex g0, double M,
                                           WitnessDomain domain, GridRegion region, std::uint32_t n, double p,
                                           double pp) {
  validate_witness_inputs(g0, M, p, pp);
  GridField a = disk_indicator_field(region, n, center, radius, c);
  // Coverage of a disk inside the closed unit disk is clipped to its nodes.
  if (domain == WitnessDomain::disk && std::abs(center) + radius <= 1.0)
    for (std::uint32_t j = 0; j < a.ny(); ++j)
      for (std::uint32_t i = 0; i < a.nx(); ++i)
        if (std::abs(a.node(i, j)) >= 1.0) a.at(i, j) = Complex{};
  const Complex t0 = c * disk_indicator_transform(Complex{}, center, radius);
  auto exact = [c, center, radius, t0](Complex z) { return c * disk_indicator_transform(z, center, radius) - t0; };
  GridField ahat = GridField::sample(a.region(), a.nx(), a.ny(), exact);
  LogLipschitzWitness w{domain, std::move(a), std::move(ahat), g0, M, p, pp, {}, {}, 0.0, 0.0};
  w.ahat_exact = exact;
  w.ahat_infinity = -t0;
  finish_witness(w);
  return w;
}

Certificate check_prop5(const LogLipschitzWitness& w, std::span<const Complex> points, const CheckOptions& opts) {
  if (w.domain != WitnessDomain::disk) throw DomainError("prop5 needs a disk witness");
  Certificate cert("prop5", opts.seed, opts.tolerance);
  const double c = prop5_constant(w.p, w.norm_p);
  const double base = w.g(Complex{}).real();
  const double lower_exp = 2.0 - 2.0 / w.p;
  const double log_scale = std::log(opts.bound_scale);
  double worst_ratio = 0.0;
  for (Complex z : points) {
    require_finite(z, "z");
    const double r = std::abs(z);
    if (!(r < 1.0)) throw DomainError("prop5 points must lie in the unit disk");
    const double log_ratio = std::log(w.g(z).real() / base);
    worst_ratio = std::max(worst_ratio, std::abs(log_ratio));
    const double upper = c / (1.0 - r) + log_scale - log_ratio;
    const double lower = c / std::pow(1.0 - r, lower_exp) + log_scale + log_ratio;
    cert.record(std::min(upper, lower), node_witness(z));
  }
  cert.details["c"] = c;
  cert.details["c0"] = c0_constant(w.p);
  cert.details["norm_p"] = w.norm_p;
  cert.details["p"] = w.p;
  cert.details["max_abs_log_ratio"] = worst_ratio;
  cert.finalize();
  return cert;
}

Certificate check_prop6(const LogLipschitzWitness& w, std::span<const Complex> points, const CheckOptions& opts) {
  if (w.domain != WitnessDomain::plane) throw DomainError("prop6 needs a plane witness");
  Certificate cert("prop6", opts.seed, opts.tolerance);
  const auto [lo, hi] = re_ahat_range(w, points);
  const double log_c = hi - lo;
  const double base = std::abs(w.g(Complex{}));
  const double log_scale = std::log(opts.bound_scale);
  double max_ratio = 0.0, min_ratio = std::numeric_limits<double>::infinity();
  for (Complex z : points) {
    const double ratio = std::abs(w.g(z)) / base;
    max_ratio = std::max(max_ratio, ratio);
    min_ratio = std::min(min_ratio, ratio);
    cert.record(log_c + log_scale - std::abs(std::log(ratio)), node_witness(z));
    // Right inequality with the proof's constant sup e^{Re a_hat}.
    cert.record(hi + log_scale - std::log(ratio), node_witness(z));
  }
  const double c1 = c1_constant(w.p, w.pp);
  cert.details["C"] = std::exp(log_c);
  cert.details["C_right"] = std::exp(hi);
  cert.details["max_ratio"] = max_ratio;
  cert.details["min_ratio"] = points.empty() ? 0.0 : min_ratio;
  cert.details["c1"] = c1;
  cert.details["c1_bound"] = std::exp(c1 * (w.norm_p + w.norm_pp));
  cert.details["norm_p"] = w.norm_p;
  cert.details["norm_pp"] = w.norm_pp;
  cert.details["p"] = w.p;
  cert.details["pp"] = w.pp;
  cert.finalize();
  return cert;
}

Certificate check_prop6_corollaries(const LogLipschitzWitness& w, const CheckOptions& opts) {
  if (w.domain != WitnessDomain::plane) throw DomainError("prop6 corollaries need a plane witness");
  Certificate cert("prop6_corollaries", opts.seed, opts.tolerance);
  const auto [lo, hi] = re_ahat_range(w, {});
  const double log_c = hi - lo;
  double re_min = std::numeric_limits<double>::infinity(), re_max = 0.0, cos_min = 1.0;
  Complex at_min{}, at_max{};
  auto visit = [&](Complex g, Complex where) {
    if (g.real() < re_min) {
      re_min = g.real();
      at_min = where;
    }
    if (g.real() > re_max) {
      re_max = g.real();
      at_max = where;
    }
    cos_min = std::min(cos_min, g.real() / std::abs(g));
  };
  for_each_node(w.ahat, [&](std::uint32_t, std::uint32_t, Complex z) { visit(w.g(z), z); });
  visit(w.g0 * std::exp(w.ahat_infinity), Complex(std::numeric_limits<double>::infinity(), 0.0));
  const double inf_f = w.M * std::exp(-re_max), sup_f = w.M * std::exp(-re_min);
  // Cor. 1: a nonvanishing witness with |f| bounded below everywhere.
  cert.record(inf_f / w.M, node_witness(at_max));
  // Cor. 2: log(M/sup|f|) >= log(M/inf|f|) / C2.
  const double c2 = std::exp(log_c) / cos_min;
  cert.record((re_min - re_max / (opts.bound_scale * c2)) / re_min, node_witness(at_min));
  // Cor. 3 for f = e^{a_hat}: sup|f| / inf|f| = e^{osc Re a_hat}.
  const double c1 = c1_constant(w.p, w.pp);
  const double norm_p = lp_norm(GridField::sample(w.a.region(), w.a.nx(), w.a.ny(),
                                                  [&](Complex z) { return Complex(std::abs(w.a.interpolate(z))); }),
                                w.p);
  const double norm_pp = lp_norm(GridField::sample(w.a.region(), w.a.nx(), w.a.ny(),
                                                   [&](Complex z) { return Complex(std::abs(w.a.interpolate(z))); }),
                                 w.pp);
  const double log_bound = c1 * (norm_p + norm_pp);
  cert.record(log_bound + std::log(opts.bound_scale) - log_c, {});
  cert.details["C"] = std::exp(log_c);
  cert.details["C2"] = c2;
  cert.details["cos_min"] = cos_min;
  cert.details["inf_f"] = inf_f;
  cert.details["sup_f"] = sup_f;
  cert.details["cor3_ratio"] = std::exp(log_c);
  cert.details["cor3_bound"] = std::exp(log_bound);
  cert.finalize();
  return cert;
}

}  // namespace harnack
