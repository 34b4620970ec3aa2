#pragma once

// Hyperbolic density rho of C \ {0,1} (curvature -1), by two independent
// routes: the Agard area integral and the modular lambda covering.

#include <harnack/certificate.hpp>
#include <harnack/errors.hpp>

#include <cstdint>
#include <memory>
#include <span>
#include <string>

namespace harnack {

enum class DomainTag { unit_disk, punctured_disk, twice_punctured_plane };
enum class DensityMethod : std::uint8_t { agard = 0, modular = 1, automatic = 2, closed_form = 3 };

std::string to_string(DomainTag d);
std::string to_string(DensityMethod m);
DomainTag domain_from_string(const std::string& s);
DensityMethod method_from_string(const std::string& s);

struct DensityEvaluation {
  double value = 0.0;
  double error_estimate = 0.0;  // absolute
  DensityMethod method = DensityMethod::modular;
};

// 1/rho(z) = |z(z-1)|/(2 pi) * int_C dS / |zeta (zeta-1) (zeta-z)|.
// Throws AccuracyError when the estimate exceeds tol * value.
DensityEvaluation rho01_agard_eval(Complex z, double tol = 1e-9);
double rho01_agard(Complex z, double tol = 1e-9);

// rho(lambda(tau)) = 1 / (Im tau |lambda'(tau)|) after an anharmonic reduction.
double rho01_modular(Complex z);

// Modular route for dist(z, {0,1}) >= 1e-3 and |z| <= 1e8, Agard otherwise.
DensityEvaluation rho01_auto(Complex z, double tol = 1e-9);

struct C01Constant {
  double value = 0.0;
};

// Gamma(1/4)^4 / (4 pi^2).
C01Constant c01_constant();
// (1/pi) int |zeta (zeta^2 - 1)|^{-1} dS = 1 / rho(-1) by the Agard route.
C01Constant c01_agard(double tol = 1e-9);

// Cached Gamma(1/4)^4 / (4 pi^2).
double c01();

// |int_{r1}^{r2} rho(-r) dr|; throws DivergenceError if an endpoint is 0.
double hempel_radial_integral(double r1, double r2);

// Eq. (4) sandwich |z||log|z|| <= 1/rho <= |z|(C + |log|z||) and, inside the
// punctured unit disk, rho(z) >= rho(-|z|) >= 1/(|z|(C + log 1/|z|)).
// Slacks are relative: (rhs - lhs) / max(|lhs|, |rhs|).
Certificate check_density_bounds(std::span<const Complex> samples, std::uint64_t seed = 0,
                                 double tolerance = 1e-6);

class DensityCache;

// Evaluatable density of one of the three model domains.
class DensityModel {
 public:
  explicit DensityModel(DomainTag domain, DensityMethod method = DensityMethod::automatic,
                        double tolerance = 1e-9);

  DomainTag domain() const { return domain_; }
  DensityMethod method() const { return method_; }
  double tolerance() const { return tolerance_; }

  // True when z lies in the domain (for C \ {0,1}: z != 0, 1).
  bool contains(Complex z) const;
  DensityEvaluation evaluate(Complex z) const;
  double operator()(Complex z) const { return evaluate(z).value; }

  void attach_cache(std::shared_ptr<DensityCache> cache) { cache_ = std::move(cache); }
  const std::shared_ptr<DensityCache>& cache() const { return cache_; }

 private:
  DomainTag domain_;
  DensityMethod method_;
  double tolerance_;
  std::shared_ptr<DensityCache> cache_;
};

}  // namespace harnack
