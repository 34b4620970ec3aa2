#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>

namespace harnack::detail {

using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
inline constexpr unsigned kMaxDepth = 15;

// Boost's estimate degrades with depth on short intervals, so every integral
// is mapped onto [-1, 1] first. `error` receives the absolute estimate.
template <class F>
double integrate(F f, double a, double b, double tol, double* error) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double e = 0.0;
  const double v =
      GK::integrate([&](double x) { return f(mid + half * x); }, -1.0, 1.0, kMaxDepth, tol, &e);
  if (error != nullptr) *error = e * std::abs(half);
  return v * half;
}

}  // namespace harnack::detail
