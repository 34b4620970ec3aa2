#pragma once

// Immutable expression trees for holomorphic test functions and maps.

#include <harnack/geometry.hpp>

#include <json.hpp>

#include <memory>
#include <string>
#include <vector>

namespace harnack {

class AnalyticFunction {
 public:
  enum class Kind {
    constant, identity, affine, mobius, exp, log, series, compose,
    add, sub, mul, div, neg, pow, covering
  };

  // The identity z -> z.
  AnalyticFunction();

  static AnalyticFunction constant(Complex c);
  static AnalyticFunction identity();
  static AnalyticFunction affine(Complex a, Complex b);  // a z + b
  static AnalyticFunction mobius(const MobiusMap& m);
  static AnalyticFunction exp(const AnalyticFunction& f);
  // Principal logarithm of f plus 2 pi i * branch.
  static AnalyticFunction log(const AnalyticFunction& f, int branch = 0);
  // sum_n coeffs[n] (z - center)^n on |z - center| < radius.
  static AnalyticFunction series(std::vector<Complex> coeffs, Complex center, double radius);
  // Universal covering of C \ {0,1} by the disk, S(0) = -1, S'(0) > 0.
  static AnalyticFunction covering();
  static AnalyticFunction pow(const AnalyticFunction& f, int n);

  // (*this)(inner(z)).
  AnalyticFunction compose(const AnalyticFunction& inner) const;

  friend AnalyticFunction operator+(const AnalyticFunction& f, const AnalyticFunction& g);
  friend AnalyticFunction operator-(const AnalyticFunction& f, const AnalyticFunction& g);
  friend AnalyticFunction operator*(const AnalyticFunction& f, const AnalyticFunction& g);
  friend AnalyticFunction operator/(const AnalyticFunction& f, const AnalyticFunction& g);
  friend AnalyticFunction operator-(const AnalyticFunction& f);

  Kind kind() const;
  Complex operator()(Complex z) const;

  // Richardson-extrapolated central difference (4 D(h/2) - D(h)) / 3.
  Complex derivative(Complex z, double step = 1e-5) const;

  nlohmann::json to_json() const;
  static AnalyticFunction from_json(const nlohmann::json& j);
  std::string describe() const;

 private:
  struct Node;
  explicit AnalyticFunction(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

}  // namespace harnack
