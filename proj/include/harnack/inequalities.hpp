#pragma once

// Closed-form bounds and randomized certifiers for the Harnack, Landau,
// Schottky and Hempel type inequalities on the unit disk.
//
// Two-sided envelope checks record the log-space slack
//   kappa + log(bound_scale) - |log ratio|,
// one-sided bounds |x| <= B record (bound_scale * B - |x|) / (bound_scale * B).
// bound_scale < 1 tightens every bound; negative controls use 0.95.

#include <harnack/analytic_function.hpp>
#include <harnack/certificate.hpp>
#include <harnack/rng.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace harnack {

struct PointPair {
  Complex z;
  Complex z0;
};

struct CheckOptions {
  std::uint64_t seed = 0;
  double tolerance = 1e-9;
  double bound_scale = 1.0;
  // Polar audit grid for range preconditions (rings x spokes up to audit_radius).
  // Near the circle the covering approaches its cusp values 0, 1, inf
  // (|S| ~ 1e-270 at |z| = 0.99), so the default stays at 0.95.
  double audit_radius = 0.95;
  int audit_rings = 24;
  int audit_spokes = 48;
};

struct Envelope {
  double lower;
  double upper;
};

// (e^-kappa, e^kappa).
Envelope harnack_envelope(double kappa);

// |f(z0)|^alpha M^(1-alpha), alpha = e^-kappa.
double two_constants_bound(Complex f_at_z0, double M, double kappa);

// |V|_kappa |f| (C01 + |log|f||).
double landau_bound(Complex f_val, double royden_norm);

// (C01 + |Re h(z0)|) e^kappa + |Im h(z0)| - C01.
double cor4_growth_bound(Complex h_at_z0, double kappa);

// e^-C01 (e^C01 max(1, R'))^(e^R).
double schottky_bound(double R, double Rp);

// Continues log f along the segment z0 -> z starting from log_start.
// Throws BranchError if f vanishes or the argument cannot be followed.
Complex continue_log(const AnalyticFunction& f, Complex z0, Complex z, Complex log_start);

// Checks that `witness` is a continuous logarithm of f along z0 -> z:
// exp(witness) == f and no jump of size >= pi relative to the continuation.
void audit_log_witness(const AnalyticFunction& f, const AnalyticFunction& witness, Complex z0,
                       Complex z);

// Range audits on the polar grid of `opts`; throw AuditError with the node.
void audit_omits_zero_one(const AnalyticFunction& f, const CheckOptions& opts);
void audit_positive_real_part(const AnalyticFunction& f, const CheckOptions& opts);

// Harnack envelope for u = Re F on the disk.
Certificate check_harnack(const AnalyticFunction& F, std::span<const PointPair> pairs,
                          const CheckOptions& opts = {});
Certificate check_harnack(const AnalyticFunction& F, Complex z, Complex z0,
                          const CheckOptions& opts = {});

// |f(z)| <= two_constants_bound(f(z0), M, kappa) for |f| < M on the disk.
Certificate check_two_constants(const AnalyticFunction& f, double M,
                                std::span<const PointPair> pairs, const CheckOptions& opts = {});

// |f'(z)| <= landau_bound(f(z), 2 / (1 - |z|^2)) for f omitting 0, 1.
Certificate check_landau(const AnalyticFunction& f, std::span<const Complex> points,
                         const CheckOptions& opts = {});

// Envelope for (C01 + |log|f(z)||) / (C01 + |log|f(z0)||); with use_log_branch
// the same for |log f| along the continuous branch (witness if given, else
// continued from the principal value at z0).
Certificate check_prop3(const AnalyticFunction& f, std::span<const PointPair> pairs,
                        bool use_log_branch, const std::optional<AnalyticFunction>& log_witness = {},
                        const CheckOptions& opts = {});

// Envelope for (C01 + |log e^{-i arg f(z0)} f(z)|) / (C01 + |log|f(z0)||).
Certificate check_arg_refined(const AnalyticFunction& f, std::span<const PointPair> pairs,
                              const std::optional<AnalyticFunction>& log_witness = {},
                              const CheckOptions& opts = {});

// |h(z)| <= cor4_growth_bound(h(z0), kappa) for h omitting 2 pi i Z.
Certificate check_cor4(const AnalyticFunction& h, std::span<const PointPair> pairs,
                       const CheckOptions& opts = {});

// |int_{|f(z0)|}^{|f(z)|} rho(-r) dr| <= kappa(z, z0).
Certificate check_hempel_implicit(const AnalyticFunction& f, std::span<const PointPair> pairs,
                                  const CheckOptions& opts = {});

// Envelope for log(1/|f(z)|) / log(1/|f(z0)|) when 0 < |f| < 1.
Certificate check_punctured_disk_harnack(const AnalyticFunction& f,
                                         std::span<const PointPair> pairs,
                                         const CheckOptions& opts = {});

// Admissible maps of the disk omitting 0 and 1.
struct AdmissibleFunction {
  AnalyticFunction f;
  std::optional<AnalyticFunction> log_witness;
  std::string family;
};

// One random member: S o (contracted disk automorphism), -exp(P) with
// sum |a_n| < pi, or an anharmonic image of either.
AdmissibleFunction random_admissible(Rng& rng);
std::vector<AdmissibleFunction> admissible_family(std::size_t count, std::uint64_t seed);

// sup |f(z)| over kappa(0, z) <= R for admissible f with |f(0)| <= R',
// recorded against schottky_bound(R, R'). Functions with |f(0)| > R' are skipped.
Certificate check_schottky(std::span<const AdmissibleFunction> family, double R, double Rp,
                           int points_per_function, const CheckOptions& opts = {});

// Random pairs with |z|, |z0| <= radius.
std::vector<PointPair> random_pairs(Rng& rng, std::size_t count, double radius);

}  // namespace harnack
