#pragma once

// Closed-form planar metrics: Möbius maps, the Poincaré disk (curvature -1),
// the punctured disk, the chordal metric on the Riemann sphere and the
// Royden norm of a centered ball.

#include <harnack/errors.hpp>

#include <complex>
#include <span>

namespace harnack {

// Throws DomainError unless both coordinates are finite.
void require_finite(Complex z, const char* what);

// z -> (a z + b) / (c z + d), ad - bc != 0.
struct MobiusMap {
  Complex a{1.0}, b{0.0}, c{0.0}, d{1.0};

  MobiusMap() = default;
  MobiusMap(Complex a_, Complex b_, Complex c_, Complex d_);

  static MobiusMap identity() { return {}; }
  // Disk automorphism sending 0 to p: zeta -> (zeta + p) / (1 + conj(p) zeta).
  static MobiusMap disk_translation(Complex p);
  // Involution exchanging 0 and p: eta -> (p - eta) / (1 - conj(p) eta).
  static MobiusMap disk_swap(Complex p);
  // e^{i theta} (zeta - p) / (1 - conj(p) zeta).
  static MobiusMap disk_automorphism(double theta, Complex p);

  Complex determinant() const { return a * d - b * c; }
  MobiusMap inverse() const { return {d, -b, -c, a}; }
  // Evaluates the map; throws SingularEvaluationError at the pole.
  Complex operator()(Complex z) const;
  Complex derivative(Complex z) const;
};

// (m1 * m2)(z) == m1(m2(z)).
MobiusMap operator*(const MobiusMap& m1, const MobiusMap& m2);

// Point of the Riemann sphere; `infinite` tags the point at infinity.
struct ExtendedPoint {
  Complex value{};
  bool infinite = false;

  static ExtendedPoint infinity() { return {Complex{}, true}; }
  ExtendedPoint() = default;
  ExtendedPoint(Complex v) : value(v) {}  // NOLINT: implicit by design of call sites
  ExtendedPoint(Complex v, bool inf) : value(v), infinite(inf) {}
};

struct TangentVector {
  Complex base{};
  Complex direction{};
};

// log((1 + |w|) / (1 - |w|)) with w the Möbius translate of z2 to the origin.
double poincare_disk_distance(Complex z1, Complex z2);

// 2 / (1 - |z|^2).
double poincare_disk_density(Complex z);

// 1 / (|z| log(1/|z|)) on 0 < |z| < 1.
double punctured_disk_density(Complex z);

// Chordal distance |w1 - w2| / (sqrt(1+|w1|^2) sqrt(1+|w2|^2)), in [0, 1].
double spherical_distance(const ExtendedPoint& w1, const ExtendedPoint& w2);

// 2 |V| / R for a tangent vector at the center of the ball of radius R.
double ball_royden_norm(const TangentVector& v, double radius);
double ball_royden_norm(std::span<const Complex> direction, double radius);

// Hermitian norm of a point of C^n.
double hermitian_norm(std::span<const Complex> z);

}  // namespace harnack
