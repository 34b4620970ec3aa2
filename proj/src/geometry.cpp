#include <harnack/geometry.hpp>

#include <cmath>
#include <string>

namespace harnack {

void require_finite(Complex z, const char* what) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw DomainError(std::string(what) + ": non-finite coordinate");
  }
}

MobiusMap::MobiusMap(Complex a_, Complex b_, Complex c_, Complex d_) : a(a_), b(b_), c(c_), d(d_) {
  if (std::abs(a * d - b * c) == 0.0) {
    throw DomainError("MobiusMap: degenerate coefficients (ad - bc == 0)");
  }
}

MobiusMap MobiusMap::disk_translation(Complex p) {
  if (std::abs(p) >= 1.0) throw DomainError("disk_translation: |p| >= 1");
  return {1.0, p, std::conj(p), 1.0};
}

MobiusMap MobiusMap::disk_swap(Complex p) {
  if (std::abs(p) >= 1.0) throw DomainError("disk_swap: |p| >= 1");
  return {-1.0, p, -std::conj(p), 1.0};
}

MobiusMap MobiusMap::disk_automorphism(double theta, Complex p) {
  if (std::abs(p) >= 1.0) throw DomainError("disk_automorphism: |p| >= 1");
  const Complex rot = std::polar(1.0, theta);
  return {rot, -rot * p, -std::conj(p), 1.0};
}

Complex MobiusMap::operator()(Complex z) const {
  const Complex den = c * z + d;
  if (std::abs(den) == 0.0) throw SingularEvaluationError("MobiusMap: evaluation at the pole");
  return (a * z + b) / den;
}

Complex MobiusMap::derivative(Complex z) const {
  const Complex den = c * z + d;
  if (std::abs(den) == 0.0) throw SingularEvaluationError("MobiusMap: derivative at the pole");
  return determinant() / (den * den);
}

MobiusMap operator*(const MobiusMap& m1, const MobiusMap& m2) {
  return {m1.a * m2.a + m1.b * m2.c, m1.a * m2.b + m1.b * m2.d, m1.c * m2.a + m1.d * m2.c,
          m1.c * m2.b + m1.d * m2.d};
}

namespace {

void require_in_disk(Complex z, const char* what) {
  require_finite(z, what);
  if (std::abs(z) >= 1.0) throw DomainError(std::string(what) + ": point not inside the unit disk");
}

}  // namespace

double poincare_disk_distance(Complex z1, Complex z2) {
  require_in_disk(z1, "poincare_disk_distance");
  require_in_disk(z2, "poincare_disk_distance");
  // |z1 - z2| / |1 - conj(z2) z1| loses accuracy near the boundary; the
  // equivalent form 1 - t^2 = (1-|z1|^2)(1-|z2|^2)/|1 - conj(z2) z1|^2 keeps it.
  const Complex num = z1 - z2;
  const Complex den = 1.0 - std::conj(z2) * z1;
  const double t = std::abs(num) / std::abs(den);
  if (t < 0.5) return 2.0 * std::atanh(t);
  const double one_minus_t2 =
      (1.0 - std::norm(z1)) * (1.0 - std::norm(z2)) / std::norm(den);
  // 2 artanh t = log((1+t)^2 / (1 - t^2))
  return std::log((1.0 + t) * (1.0 + t) / one_minus_t2);
}

double poincare_disk_density(Complex z) {
  require_in_disk(z, "poincare_disk_density");
  return 2.0 / (1.0 - std::norm(z));
}

double punctured_disk_density(Complex z) {
  require_finite(z, "punctured_disk_density");
  const double r = std::abs(z);
  if (r == 0.0) throw PunctureError("punctured_disk_density: z = 0 is the puncture");
  if (r >= 1.0) throw DomainError("punctured_disk_density: |z| >= 1");
  return 1.0 / (r * std::log(1.0 / r));
}

double spherical_distance(const ExtendedPoint& w1, const ExtendedPoint& w2) {
  if (w1.infinite && w2.infinite) return 0.0;
  if (w1.infinite || w2.infinite) {
    const Complex w = w1.infinite ? w2.value : w1.value;
    require_finite(w, "spherical_distance");
    return 1.0 / std::sqrt(1.0 + std::norm(w));
  }
  require_finite(w1.value, "spherical_distance");
  require_finite(w2.value, "spherical_distance");
  const double d = std::abs(w1.value - w2.value) /
                   (std::sqrt(1.0 + std::norm(w1.value)) * std::sqrt(1.0 + std::norm(w2.value)));
  return std::min(d, 1.0);
}

double hermitian_norm(std::span<const Complex> z) {
  double s = 0.0;
  for (const Complex& c : z) {
    require_finite(c, "hermitian_norm");
    s += std::norm(c);
  }
  return std::sqrt(s);
}

double ball_royden_norm(std::span<const Complex> direction, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw DomainError("ball_royden_norm: R must be positive");
  return 2.0 * hermitian_norm(direction) / radius;
}

double ball_royden_norm(const TangentVector& v, double radius) {
  require_finite(v.base, "ball_royden_norm");
  if (v.base != Complex{}) throw DomainError("ball_royden_norm: tangent vector must be based at the center");
  return ball_royden_norm(std::span<const Complex>(&v.direction, 1), radius);
}

}  // namespace harnack
