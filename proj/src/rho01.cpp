#include <harnack/density_cache.hpp>
#include <harnack/geometry.hpp>
#include <harnack/modular.hpp>
#include <harnack/rho01.hpp>

#include "quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace harnack {

namespace {

constexpr double kPi = std::numbers::pi;
using detail::integrate;

void require_off_punctures(Complex z, const char* what) {
  require_finite(z, what);
  if (z == Complex{0.0} || z == Complex{1.0}) {
    throw PunctureError(std::string(what) + ": z is one of the punctures 0, 1");
  }
}

struct Integral {
  double value = 0.0;
  double error = 0.0;
};

// int_C dS / |(zeta - s0)(zeta - s1)(zeta - s2)|.
// A partition of unity w_k = d_k^-4 / sum_j d_j^-4 splits the integrand into
// three pieces, each singular at one point only; piece k is integrated in
// polar coordinates around s_k, where the factor 1/r cancels the area
// element. Radially: [0, L] directly (L = distance to the nearest other
// singularity), [L, D] in log r (the piece behaves like 1/r there when the
// singularities are badly scaled), [D, inf) by r = D/t. The angular range is
// split at the directions of the two other singularities, where the piece has
// kinks.
Integral three_point_integral(const std::array<Complex, 3>& s, double tol) {
  Integral total;
  for (int k = 0; k < 3; ++k) {
    const Complex c = s[k];
    const Complex a = s[(k + 1) % 3];
    const Complex b = s[(k + 2) % 3];
    const double reach = std::min(std::abs(a - c), std::abs(b - c));
    auto piece = [&](double r, double theta) {
      const Complex zeta = c + std::polar(r, theta);
      const double da = std::abs(zeta - a);
      const double db = std::abs(zeta - b);
      if (da == 0.0 || db == 0.0) return 0.0;
      const double r2 = r * r;
      const double qa = r2 / (da * da);
      const double qb = r2 / (db * db);
      return 1.0 / ((1.0 + qa * qa + qb * qb) * da * db);
    };
    const double span = 2.0 * std::max(std::abs(a - c), std::abs(b - c));
    const double log_ratio = std::log(span / reach);
    // Mean inner error over the sampled angles, times the angular length,
    // estimates the integrated inner error.
    double inner_error_sum = 0.0;
    long inner_calls = 0;
    auto radial = [&](double theta) {
      double e1 = 0.0, e2 = 0.0, e3 = 0.0;
      const double near = integrate([&](double r) { return piece(r, theta); }, 0.0, reach, 0.1 * tol, &e1);
      const double middle = integrate(
          [&](double u) {
            const double r = reach * std::exp(u);
            return piece(r, theta) * r;
          },
          0.0, log_ratio, 0.1 * tol, &e2);
      const double far = integrate(
          [&](double t) { return t == 0.0 ? 0.0 : piece(span / t, theta) * span / (t * t); }, 0.0,
          1.0, 0.1 * tol, &e3);
      inner_error_sum += e1 + e2 + e3;
      ++inner_calls;
      return near + middle + far;
    };
    double t1 = std::arg(a - c);
    double t2 = std::arg(b - c);
    if (t2 < t1) std::swap(t1, t2);
    double e1 = 0.0, e2 = 0.0;
    const double arc1 = t2 > t1 ? integrate(radial, t1, t2, tol, &e1) : 0.0;
    const double arc2 = integrate(radial, t2, t1 + 2.0 * kPi, tol, &e2);
    total.value += arc1 + arc2;
    total.error += e1 + e2 + 2.0 * kPi * inner_error_sum / static_cast<double>(std::max(inner_calls, 1L));
  }
  return total;
}

}  // namespace

std::string to_string(DomainTag d) {
  switch (d) {
    case DomainTag::unit_disk: return "disk";
    case DomainTag::punctured_disk: return "punctured-disk";
    case DomainTag::twice_punctured_plane: return "c01";
  }
  return "?";
}

std::string to_string(DensityMethod m) {
  switch (m) {
    case DensityMethod::agard: return "agard";
    case DensityMethod::modular: return "modular";
    case DensityMethod::automatic: return "auto";
    case DensityMethod::closed_form: return "closed-form";
  }
  return "?";
}

DomainTag domain_from_string(const std::string& s) {
  if (s == "disk") return DomainTag::unit_disk;
  if (s == "punctured-disk") return DomainTag::punctured_disk;
  if (s == "c01") return DomainTag::twice_punctured_plane;
  throw std::invalid_argument("unknown domain '" + s + "' (disk|punctured-disk|c01)");
}

DensityMethod method_from_string(const std::string& s) {
  if (s == "agard") return DensityMethod::agard;
  if (s == "modular") return DensityMethod::modular;
  if (s == "auto") return DensityMethod::automatic;
  throw std::invalid_argument("unknown method '" + s + "' (agard|modular|auto)");
}

DensityEvaluation rho01_agard_eval(Complex z, double tol) {
  require_off_punctures(z, "rho01_agard");
  if (!(tol > 0.0)) throw DomainError("rho01_agard: tolerance must be positive");
  // Far out the three singularities are badly scaled; rho(z) = rho(1/z)/|z|^2.
  if (std::abs(z) > 1e4) {
    DensityEvaluation inner = rho01_agard_eval(1.0 / z, tol);
    const double s = 1.0 / std::norm(z);
    return {inner.value * s, inner.error_estimate * s, DensityMethod::agard};
  }
  // The quadrature resolves the cluster near 0 better than near 1; rho(z) = rho(1 - z).
  if (std::abs(z - 1.0) < 1e-4 && std::abs(z - 1.0) < std::abs(z)) return rho01_agard_eval(1.0 - z, tol);
  const Integral j = three_point_integral({Complex{0.0}, Complex{1.0}, z}, tol);
  const double factor = std::abs(z * (z - 1.0)) / (2.0 * kPi);
  const double inv_rho = factor * j.value;
  const double rho = 1.0 / inv_rho;
  const double rel = j.error / j.value;
  const double err = rho * rel / std::max(1.0 - rel, 0.5);
  if (!std::isfinite(rho) || !(rel <= tol)) {
    throw AccuracyError("rho01_agard: quadrature did not reach the requested tolerance", rho, err);
  }
  return {rho, err, DensityMethod::agard};
}

double rho01_agard(Complex z, double tol) { return rho01_agard_eval(z, tol).value; }

double rho01_modular(Complex z) {
  require_off_punctures(z, "rho01_modular");
  const modular::AnharmonicReduction red = modular::reduce_anharmonic(z);
  const Complex tau = modular::tau_from_lambda(red.image);
  const modular::LambdaJet jet = modular::lambda_theta(tau);
  return red.scale / (tau.imag() * std::abs(jet.derivative));
}

DensityEvaluation rho01_auto(Complex z, double tol) {
  require_off_punctures(z, "rho01_auto");
  const double dist = std::min(std::abs(z), std::abs(z - 1.0));
  if (dist >= 1e-3 && std::abs(z) <= 1e8) {
    const double v = rho01_modular(z);
    return {v, 1e-13 * v, DensityMethod::modular};
  }
  return rho01_agard_eval(z, tol);
}

C01Constant c01_constant() {
  const double g = std::tgamma(0.25);
  return {g * g * g * g / (4.0 * kPi * kPi)};
}

C01Constant c01_agard(double tol) {
  // Singularities at 0, 1, -1; the prefactor |z(z-1)| at z = -1 is 2.
  const Integral j = three_point_integral({Complex{0.0}, Complex{1.0}, Complex{-1.0}}, tol);
  if (!(j.error <= tol * j.value)) {
    throw AccuracyError("c01_agard: quadrature did not reach the requested tolerance",
                        j.value / kPi, j.error / kPi);
  }
  return {j.value / kPi};
}

double c01() {
  static const double value = c01_constant().value;
  return value;
}

double hempel_radial_integral(double r1, double r2) {
  if (!std::isfinite(r1) || !std::isfinite(r2)) {
    throw DomainError("hempel_radial_integral: non-finite endpoint");
  }
  if (r1 == 0.0 || r2 == 0.0) {
    throw DivergenceError("hempel_radial_integral: int rho(-r) dr diverges at r = 0");
  }
  if (r1 < 0.0 || r2 < 0.0) throw DomainError("hempel_radial_integral: endpoints must be positive");
  if (r1 == r2) return 0.0;
  // r = e^s makes the integrand bounded on any range of scales.
  const double s1 = std::log(std::min(r1, r2));
  const double s2 = std::log(std::max(r1, r2));
  double err = 0.0;
  const double v = integrate(
      [](double s) {
        const double r = std::exp(s);
        return rho01_modular(Complex{-r, 0.0}) * r;
      },
      s1, s2, 1e-13, &err);
  return v;
}

Certificate check_density_bounds(std::span<const Complex> samples, std::uint64_t seed,
                                 double tolerance) {
  Certificate cert("density_bounds", seed, tolerance);
  const double c = c01();
  auto rel = [](double lhs, double rhs) {
    const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
    return (rhs - lhs) / scale;
  };
  for (const Complex& z : samples) {
    const std::vector<double> where{z.real(), z.imag()};
    double inv_rho = 0.0;
    try {
      inv_rho = 1.0 / rho01_auto(z).value;
    } catch (const AccuracyError& e) {
      throw AccuracyError(std::string(e.what()) + " at z = (" + std::to_string(z.real()) + ", " +
                              std::to_string(z.imag()) + ")",
                          e.value(), e.achieved_error());
    }
    const double r = std::abs(z);
    const double lr = std::abs(std::log(r));
    double worst = std::min(rel(r * lr, inv_rho), rel(inv_rho, r * (c + lr)));
    if (r < 1.0) {
      const double rho_z = 1.0 / inv_rho;
      const double rho_neg = rho01_auto(Complex{-r, 0.0}).value;
      worst = std::min({worst, rel(rho_neg, rho_z), rel(1.0 / (r * (c + lr)), rho_neg)});
    }
    cert.record(worst, where);
  }
  cert.details["C01"] = c;
  return cert;
}

DensityModel::DensityModel(DomainTag domain, DensityMethod method, double tolerance)
    : domain_(domain), method_(method), tolerance_(tolerance) {
  if (!(tolerance > 0.0)) throw DomainError("DensityModel: tolerance must be positive");
}

bool DensityModel::contains(Complex z) const {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  switch (domain_) {
    case DomainTag::unit_disk: return std::abs(z) < 1.0;
    case DomainTag::punctured_disk: return std::abs(z) < 1.0 && z != Complex{0.0};
    case DomainTag::twice_punctured_plane: return z != Complex{0.0} && z != Complex{1.0};
  }
  return false;
}

DensityEvaluation DensityModel::evaluate(Complex z) const {
  switch (domain_) {
    case DomainTag::unit_disk: return {poincare_disk_density(z), 0.0, DensityMethod::closed_form};
    case DomainTag::punctured_disk:
      return {punctured_disk_density(z), 0.0, DensityMethod::closed_form};
    case DomainTag::twice_punctured_plane:
      if (cache_) {
        if (auto hit = cache_->lookup(z, method_, tolerance_)) return *hit;
      }
      switch (method_) {
        case DensityMethod::agard: return rho01_agard_eval(z, tolerance_);
        case DensityMethod::modular: {
          const double v = rho01_modular(z);
          return {v, 1e-13 * v, DensityMethod::modular};
        }
        default: return rho01_auto(z, tolerance_);
      }
  }
  throw InternalError("DensityModel: unknown domain");
}

}  // namespace harnack
