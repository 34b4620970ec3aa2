#pragma once

// Normalized holomorphic motions of finite label sets over the unit disk,
// with grid audits for conditions (1)-(3) and Holder certificates.

#include <harnack/analytic_function.hpp>
#include <harnack/certificate.hpp>
#include <harnack/geometry.hpp>
#include <harnack/inequalities.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace harnack {

// Track of one label. The label at infinity carries no track (it stays put).
struct MotionTrack {
  ExtendedPoint label;
  std::optional<AnalyticFunction> track;
};

struct MotionAuditOptions {
  double R = 2.0;         // Kobayashi radius of the audited ball around z0
  int grid = 64;          // initial grid nodes per side
  double stability = 0.1; // relative change of the minimum separation to stop doubling
  int max_doublings = 3;
  double collision = 0.0;  // spherical separation treated as a collision
  bool require_normalized = true;  // 0, 1 and infinity must be labels
};

struct MotionAudit {
  double min_separation = 0.0;  // spherical, over grid points and label pairs
  int grid = 0;                 // final grid size
  Complex where{};              // base point of the minimum
  std::size_t first = 0, second = 0;
};

class FiniteMotion {
 public:
  Complex base_point() const { return z0_; }
  std::size_t size() const { return labels_.size(); }
  const ExtendedPoint& label(std::size_t k) const { return labels_.at(k); }
  const std::vector<ExtendedPoint>& labels() const { return labels_; }
  // nullopt for labels that stay fixed.
  const std::optional<AnalyticFunction>& track(std::size_t k) const { return tracks_.at(k); }
  bool normalized() const { return normalized_; }

  // phi(z, w_k).
  ExtendedPoint operator()(Complex z, std::size_t k) const;
  // d/dz phi(z, w_k) (zero for the fixed labels).
  Complex derivative(Complex z, std::size_t k) const;
  // Index of a label, if present.
  std::optional<std::size_t> find(const ExtendedPoint& w) const;

  nlohmann::json to_json() const;

 private:
  friend FiniteMotion build_motion(std::vector<MotionTrack>, Complex, const MotionAuditOptions&);
  Complex z0_{};
  std::vector<ExtendedPoint> labels_;
  std::vector<std::optional<AnalyticFunction>> tracks_;
  bool normalized_ = false;
};

// Checks distinct labels, phi(z0, w) = w (1e-12), constant tracks at 0 and 1
// and injectivity on the audit grid. InjectivityError carries
// (z, w1, w2); NormalizationError carries (z, w, phi(z, w)).
FiniteMotion build_motion(std::vector<MotionTrack> tracks, Complex z0,
                          const MotionAuditOptions& opts = {});

// Reads the JSON written by FiniteMotion::to_json and audits it.
FiniteMotion motion_from_json(const nlohmann::json& j, const MotionAuditOptions& opts = {});

// Minimum pairwise spherical separation over a square grid covering the
// Kobayashi ball of radius opts.R, doubled until stable; then a Newton search
// for a zero of each track difference starting from its grid minimum.
// Throws InjectivityError on a separation below opts.collision or a zero
// inside the ball.
MotionAudit audit_motion(const FiniteMotion& m, const MotionAuditOptions& opts = {});

// The motion 1/phi with labels 1/w (0 and infinity exchanged).
FiniteMotion invert_motion(const FiniteMotion& m, const MotionAuditOptions& opts = {});

// The motion with labels listed in the order given by `order`.
FiniteMotion relabel_motion(const FiniteMotion& m, std::span<const std::size_t> order,
                            const MotionAuditOptions& opts = {});

// |V|_kappa (2 C01 + 2 min(|log|f1||, |log|1 - f1||) + |log|f1 - f2||).
double lemma2_ratio_bound(Complex f1, Complex f2, double royden_norm);

// Lemma 2 along random unit directions at `base_points` random points of the
// ball B_R, for every pair of finite labels outside {0, 1}. Relative slack.
Certificate check_lemma2(const FiniteMotion& m, double R, int base_points,
                         const CheckOptions& opts = {});

struct HolderQuery {
  Complex z;
  std::size_t first;
  std::size_t second;
};

// `count` random points of B_R with random distinct label pairs.
std::vector<HolderQuery> holder_queries(const FiniteMotion& m, double R, int count,
                                        std::uint64_t seed);

struct HolderReport {
  Certificate certificate;
  double R = 0.0;
  double alpha = 1.0;  // e^{-R}
  double constant = 0.0;
  std::vector<double> quotients{};  // lhs / rhs-without-constant per query
  double fitted_exponent = 0.0;
  double exponent_band = 0.0;  // 95% half-width of the OLS slope

  nlohmann::json to_json() const;
};

// max(5, 5^alpha e^{C(1 - alpha)} 2 M), M = M(R, 3), C = 2 C01 + 2 log M.
double holder_spherical_constant(double R);
// C_R (1 + M(R, R')^2).
double holder_euclidean_constant(double R, double Rp);

// Spherical Holder inequality with constant holder_spherical_constant(R).
HolderReport check_holder_spherical(const FiniteMotion& m, double R,
                                    std::span<const HolderQuery> queries,
                                    const CheckOptions& opts = {});

// Both sides of the Euclidean Holder inequality; labels must satisfy |w| < R'.
HolderReport check_holder_euclidean(const FiniteMotion& m, double R, double Rp,
                                    std::span<const HolderQuery> queries,
                                    const CheckOptions& opts = {});

}  // namespace harnack
