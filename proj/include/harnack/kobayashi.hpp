#pragma once

// Kobayashi distance: closed forms on the disk and from the center of a
// ball, chain upper bounds, a fast-marching solver for rho |dz| on planar
// grids, and a randomized Schwarz-contraction certifier.

#include <harnack/analytic_function.hpp>
#include <harnack/certificate.hpp>
#include <harnack/grid_file.hpp>
#include <harnack/inequalities.hpp>
#include <harnack/rho01.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace harnack {

struct ChainStep {
  AnalyticFunction disk_map;  // h_j : D -> target domain
  Complex zeta;               // |zeta_j| < 1
};

struct DiskChain {
  Complex start;  // z'
  Complex end;    // z
  std::vector<ChainStep> steps;
};

// Joint k: k = 0 is h_1(0) = start, 1 <= k < N is h_{k+1}(0) = h_k(zeta_k),
// k = N is h_N(zeta_N) = end (for an empty chain, start = end).
// Throws MalformedChainError naming the first failing joint.
void audit_chain(const DiskChain& c, double tol = 1e-9);

// Sum log((1 + |zeta_j|) / (1 - |zeta_j|)) after audit_chain.
double chain_length(const DiskChain& c, double tol = 1e-9);

// Poincare distance; DomainError outside the open disk.
double kobayashi_disk(Complex z1, Complex z2);

// log((R + |z|) / (R - |z|)) in the ball of radius R in C^n.
double kobayashi_ball_center(std::span<const Complex> z, double R);

// Uniform nx x ny grid over a rectangle. Densities are sampled on the twice
// refined lattice so that every 8-neighbour edge has its midpoint value.
// Nodes outside the domain, or within excision_radius() = 3h of a puncture,
// are excluded.
class GeodesicGrid {
 public:
  GeodesicGrid(const DensityModel& model, GridRegion region, std::uint32_t nx, std::uint32_t ny);

  // Reads node densities and distances written by write(). Midpoint
  // densities are the means of the adjacent node values.
  static GeodesicGrid read(const std::filesystem::path& path);
  void write(const std::filesystem::path& path) const;

  const GridRegion& region() const { return region_; }
  DomainTag domain() const { return domain_; }
  DensityMethod method() const { return method_; }
  std::uint32_t nx() const { return nx_; }
  std::uint32_t ny() const { return ny_; }
  double hx() const { return hx_; }
  double hy() const { return hy_; }
  double excision_radius() const { return excision_; }
  const std::vector<Complex>& punctures() const { return punctures_; }

  Complex node(std::uint32_t i, std::uint32_t j) const;
  bool excluded(std::uint32_t i, std::uint32_t j) const;
  double density(std::uint32_t i, std::uint32_t j) const;
  // nullopt before a solve or when the node is unreachable or excluded.
  std::optional<double> distance(std::uint32_t i, std::uint32_t j) const;
  // Bilinear interpolation over the enclosing cell, falling back to the
  // nearest reachable corner; nullopt if no corner is reachable.
  std::optional<double> distance_at(Complex z) const;

  bool solved() const { return solved_; }
  Complex source() const { return source_; }

  // Length bound for detours around excised disks: sum over punctures of
  // pi * r_ex * max rho on the circle |z - p| = r_ex.
  double excision_error_bound() const { return excision_bound_; }

  // Largest violation of T(x) <= T(y) + rho_mid |x - y| over 8-neighbour edges
  // between reachable nodes (0 for an exact discrete solution).
  double eikonal_defect() const;

 private:
  friend GeodesicGrid kobayashi_grid_solve(const GeodesicGrid& g, Complex source);
  GeodesicGrid() = default;

  std::size_t fine_index(std::uint32_t I, std::uint32_t J) const {
    return static_cast<std::size_t>(J) * (2 * nx_ - 1) + I;
  }
  std::size_t index(std::uint32_t i, std::uint32_t j) const {
    return static_cast<std::size_t>(j) * nx_ + i;
  }
  double mid_density(std::uint32_t i, std::uint32_t j, int di, int dj) const {
    return fine_[fine_index(2 * i + di, 2 * j + dj)];
  }

  GridRegion region_;
  DomainTag domain_ = DomainTag::unit_disk;
  DensityMethod method_ = DensityMethod::automatic;
  double tolerance_ = 0.0;
  std::uint32_t nx_ = 0, ny_ = 0;
  double hx_ = 0.0, hy_ = 0.0, excision_ = 0.0, excision_bound_ = 0.0;
  std::vector<Complex> punctures_;
  std::vector<double> fine_;      // (2nx-1) x (2ny-1), NaN where unusable
  std::vector<char> excluded_;    // nx x ny
  std::vector<double> distance_;  // nx x ny, +inf unreachable
  bool solved_ = false;
  Complex source_{};
};

// First-arrival distances from `source` for the metric rho |dz|.
// DomainError if the source is outside the grid, outside the domain, or its
// nearest node is excluded. InternalError on a non-monotone update.
GeodesicGrid kobayashi_grid_solve(const GeodesicGrid& g, Complex source);

// Certifies kappa_target(f(z), f(z0)) <= kappa_source(z, z0). Between unit
// disks the exact distances are compared (absolute slack); otherwise the
// target length of f along the segment is compared with the source length
// of the segment (relative slack). The range of f is audited on the
// segments; a point mapped outside the target throws AuditError.
Certificate verify_schwarz_contraction(const AnalyticFunction& f, DomainTag source,
                                       DomainTag target, std::span<const PointPair> pairs,
                                       const CheckOptions& opts = {});

}  // namespace harnack
