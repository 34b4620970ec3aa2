#pragma once

// Sampled fields on square-cell grids, the discrete Cauchy transform
// T a(z) = -(1/pi) int a(zeta) / (zeta - z) dS, the Schwarz integral on the
// unit circle, and exact log-Lipschitz witnesses for the d-bar estimates.

#include <harnack/certificate.hpp>
#include <harnack/errors.hpp>
#include <harnack/grid_file.hpp>
#include <harnack/inequalities.hpp>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace harnack {

class GridField {
 public:
  // Cells must be square: (xmax - xmin)/(nx - 1) == (ymax - ymin)/(ny - 1).
  GridField(GridRegion region, std::uint32_t nx, std::uint32_t ny);
  static GridField sample(GridRegion region, std::uint32_t nx, std::uint32_t ny,
                          const std::function<Complex(Complex)>& fn);

  const GridRegion& region() const { return region_; }
  std::uint32_t nx() const { return nx_; }
  std::uint32_t ny() const { return ny_; }
  double h() const { return h_; }
  Complex node(std::uint32_t i, std::uint32_t j) const;
  Complex& at(std::uint32_t i, std::uint32_t j) { return values_[index(i, j)]; }
  const Complex& at(std::uint32_t i, std::uint32_t j) const { return values_[index(i, j)]; }
  const std::vector<Complex>& values() const { return values_; }
  std::vector<Complex>& values() { return values_; }

  // Node index when z is a node (within 1e-9 h).
  std::optional<std::pair<std::uint32_t, std::uint32_t>> node_index(Complex z) const;
  bool contains(Complex z) const;
  // Bilinear interpolation; DomainError outside the rectangle.
  Complex interpolate(Complex z) const;
  double max_abs() const;

  // Two planes (re, im); the low nibble of the tag holds `kind`.
  void write(const std::filesystem::path& path, std::uint8_t kind = 0) const;
  static GridField read(const std::filesystem::path& path, std::uint8_t* kind = nullptr);

 private:
  std::size_t index(std::uint32_t i, std::uint32_t j) const {
    return static_cast<std::size_t>(j) * nx_ + i;
  }
  GridRegion region_;
  std::uint32_t nx_, ny_;
  double h_;
  std::vector<Complex> values_;
};

enum class TransformMethod { fft, direct };

// Node sum of -(h^2/pi) a(zeta_k) / (zeta_k - z) over the grid; the cell
// containing z contributes 0 (the kernel integrates to 0 over a centred
// square). Normalized: the value at 0 is subtracted.
GridField cauchy_transform(const GridField& a, bool normalize_at_zero = true,
                           TransformMethod method = TransformMethod::fft);
// Same discrete sum at one arbitrary point.
Complex cauchy_transform_at(const GridField& a, Complex z, bool normalize_at_zero = true);

// Central-difference (1/2)(d/dx + i d/dy); zero on the boundary nodes.
GridField dbar(const GridField& u);

// Transform of the indicator of |zeta - center| < radius:
// conj(z - center) inside, radius^2 / (z - center) outside.
Complex disk_indicator_transform(Complex z, Complex center, double radius);
// value * (fraction of each cell inside the disk), by sub x sub sub-sampling.
GridField disk_indicator_field(GridRegion region, std::uint32_t n, Complex center, double radius,
                               Complex value, int sub = 8);

// (2/pi) (2 pi / (2 - q))^{1/q}, q = p/(p - 1): |T a - T a(0)| <= c0 ||a||_p on the disk.
double c0_constant(double p);
// (4/pi) max((2 pi/(2 - q))^{1/q}, (2 pi/(q' - 2))^{1/q'}): oscillation of Re T a on the
// plane is at most c1 (||a||_p + ||a||_p').
double c1_constant(double p, double pp);
// pi + 3 * 2^{1 - 2/p} c0(p) ||A||_p.
double prop5_constant(double p, double norm_p);

// (sum |v|^p h^2)^{1/p} over the nodes (optionally only |z| < 1).
double lp_norm(const GridField& v, double p, bool unit_disk_only = false);

// Schwarz integral h(z) = (i/2pi) int Im h(zeta) (zeta + z)/(zeta - z) dt from
// uniform samples Im h(e^{2 pi i k/n}).
class SchwarzIntegral {
 public:
  explicit SchwarzIntegral(std::vector<double> im_boundary);
  Complex operator()(Complex z) const;
  // Values on the grid nodes with |z| <= radius (others 0).
  GridField on_grid(GridRegion region, std::uint32_t n, double radius) const;
  std::size_t samples() const { return im_.size(); }

 private:
  std::vector<double> im_;
  std::vector<Complex> zeta_;
};

// Largest |d-bar h| over nodes with |z| <= radius, by fourth-order differences of step delta.
double cauchy_riemann_residual(const SchwarzIntegral& h, GridRegion region, std::uint32_t n,
                               double radius, double delta = 1e-3);

enum class WitnessDomain { disk, plane };

// a supported inside the grid, a_hat its normalized transform, g = g0 e^{a_hat},
// f = M e^{-g}. Then f_zbar = -a g f, so |f_zbar| = |a| |f| |log M/f| exactly.
struct LogLipschitzWitness {
  WitnessDomain domain = WitnessDomain::plane;
  GridField a;
  GridField ahat;
  Complex g0{3.0};
  double M = 1.0;
  double p = 4.0;
  double pp = 1.5;
  std::function<Complex(Complex)> ahat_exact;  // empty unless built in closed form
  Complex ahat_infinity{};                     // plane: limit of a_hat at infinity
  double norm_p = 0.0;   // ||A||_p
  double norm_pp = 0.0;  // ||A||_p'

  Complex ahat_at(Complex z) const;
  Complex g(Complex z) const { return g0 * std::exp(ahat_at(z)); }
  Complex f(Complex z) const { return M * std::exp(-g(z)); }
  // |f_zbar| at z, from the analytic identity -a g f.
  double dbar_f_abs(Complex z) const;
  // Admissible A: |a| |g| / Re g (disk), |a| (plane).
  double A_at(Complex z) const;
};

// Audits: Re g0 > 1 and M >= 1 (DomainError); disk: M = 1, a = 0 outside
// the unit disk, |f| < 1/e on every node of the disk; plane: a = 0 on the
// grid boundary, |f| < 1. Failures throw HypothesisError naming the node.
LogLipschitzWitness make_witness(GridField a, Complex g0, double M, WitnessDomain domain,
                                 double p = 4.0, double pp = 1.5);
// a = c * indicator(|z - center| < radius) with the closed-form transform. Disk
// witnesses drop the coverage on nodes with |z| >= 1 when the disk lies in the
// closed unit disk.
LogLipschitzWitness make_indicator_witness(Complex c, Complex center, double radius, Complex g0,
                                           double M, WitnessDomain domain, GridRegion region,
                                           std::uint32_t n, double p = 4.0, double pp = 1.5);

// e^{-c/(1-|z|)^{2-2/p}} <= log(1/|f(z)|)/log(1/|f(0)|) <= e^{c/(1-|z|)},
// c = prop5_constant(p, ||A||_p). Log-space slack.
Certificate check_prop5(const LogLipschitzWitness& w, std::span<const Complex> points,
                        const CheckOptions& opts = {});

// C^{-1} <= |log M/f(z)| / |log M/f(0)| <= C with C = e^{osc Re a_hat}
// (sup over the grid nodes, the points and infinity), and the right inequality
// alone with sup e^{Re a_hat}. Log-space slack.
Certificate check_prop6(const LogLipschitzWitness& w, std::span<const Complex> points,
                        const CheckOptions& opts = {});

// Over the grid nodes and infinity: inf|f| > 0 (Cor. 1 contrapositive);
// log(M/sup|f|) >= log(M/inf|f|) / C2 with C2 = C / min(Re g/|g|) (Cor. 2);
// for f = e^{a_hat}, sup|f|/inf|f| <= e^{c1 (||a||_p + ||a||_p')} (Cor. 3).
Certificate check_prop6_corollaries(const LogLipschitzWitness& w, const CheckOptions& opts = {});

}  // namespace harnack
