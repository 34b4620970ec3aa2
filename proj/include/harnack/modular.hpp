#pragma once

// Elliptic modular lambda function and the universal covering of the
// twice-punctured plane built from it.
//
// lambda(tau) = (theta2(q) / theta3(q))^4 with q = exp(i pi tau) maps the
// upper half-plane onto C \ {0, 1}; it is invariant under Gamma(2) and
//   lambda(tau + 1) = lambda / (lambda - 1),   lambda(-1/tau) = 1 - lambda.

#include <harnack/errors.hpp>

namespace harnack::modular {

struct LambdaJet {
  Complex value;
  Complex derivative;  // d lambda / d tau
};

// Arithmetic-geometric mean with the "right" choice of square roots.
Complex agm(Complex a, Complex b);

// Complete elliptic integral of the first kind K(m), m = k^2, m not in [1, inf).
Complex elliptic_k(Complex m);

// lambda and lambda' straight from the theta series (no reduction).
// Requires |q| <= kMaxNome; otherwise throws InternalError.
LambdaJet lambda_theta(Complex tau);

// lambda at any tau in the upper half-plane; reduces tau to the standard
// fundamental domain first and maps the value back.
Complex lambda(Complex tau);

// Largest nome accepted by lambda_theta.
inline constexpr double kMaxNome = 0.5;

// The anharmonic group {z, 1-z, 1/z, 1/(1-z), z/(z-1), (z-1)/z} permutes
// {0, 1, inf}; each member is an isometry of the hyperbolic metric of C\{0,1}.
struct AnharmonicReduction {
  int index = 0;     // which of the six maps
  Complex image;     // T(z), of minimal modulus among the six
  double scale = 1;  // |T'(z)|
};
AnharmonicReduction reduce_anharmonic(Complex z);
Complex apply_anharmonic(int index, Complex z);

// A preimage tau of w under lambda, for w in the reduced region
// (|w| <= 1, |1 - w| <= 1, Re w <= 1/2). Refined by Newton on the theta series.
Complex tau_from_lambda(Complex w);

// Universal covering S of C \ {0,1} from the unit disk normalized by
// S(0) = -1, S'(0) > 0. It maps (-1, 1) onto the negative real axis.
Complex covering(Complex zeta);

}  // namespace harnack::modular
