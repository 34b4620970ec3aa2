#include <harnack/modular.hpp>

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace harnack::modular {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSeriesCutoff = 1e-16;
const Complex kI{0.0, 1.0};

Complex nome(Complex tau) { return std::exp(kI * kPi * tau); }


}  // namespace

Complex agm(Complex a, Complex b) {
  for (int i = 0; i < 64; ++i) {
    const Complex an = 0.5 * (a + b);
    Complex bn = std::sqrt(a * b);
    if (std::abs(an - bn) > std::abs(an + bn)) bn = -bn;
    a = an;
    b = bn;
    if (std::abs(a - b) <= 4e-16 * std::abs(a)) break;
  }
  return 0.5 * (a + b);
}

Complex elliptic_k(Complex m) {
  if (m.imag() == 0.0 && m.real() >= 1.0) throw DomainError("elliptic_k: m on the branch cut [1, inf)");
  return kPi / (2.0 * agm(1.0, std::sqrt(1.0 - m)));
}

LambdaJet lambda_theta(Complex tau) {
  if (!(tau.imag() > 0.0)) throw InternalError("lambda_theta: tau not in the upper half-plane");
  const Complex q = nome(tau);
  if (!(std::abs(q) <= kMaxNome)) {
    throw InternalError("lambda_theta: nome too large for the theta series (|q| >= kMaxNome)");
  }
  // theta2^4 = 16 q A^4 with A = sum_{n>=0} q^{n(n+1)};  theta3 = 1 + 2 sum_{n>=1} q^{n^2}.
  // dA and dB carry q * d/dq of the respective sums.
  Complex a_sum{1.0}, a_dq{0.0};
  Complex b_sum{1.0}, b_dq{0.0};
  for (int n = 1; n < 64; ++n) {
    const double ea = static_cast<double>(n) * (n + 1);
    const double eb = static_cast<double>(n) * n;
    const Complex ta = std::pow(q, ea);
    const Complex tb = 2.0 * std::pow(q, eb);
    a_sum += ta;
    a_dq += ea * ta;
    b_sum += tb;
    b_dq += eb * tb;
    if (std::abs(tb) * eb <= kSeriesCutoff * std::abs(b_sum) &&
        std::abs(ta) * ea <= kSeriesCutoff * std::abs(a_sum)) {
      break;
    }
  }
  const Complex ratio = a_sum / b_sum;
  const Complex r2 = ratio * ratio;
  const Complex value = 16.0 * q * r2 * r2;
  // d/dtau = i pi q d/dq; log-derivative of 16 q A^4 / B^4.
  const Complex logderiv = 1.0 + 4.0 * a_dq / a_sum - 4.0 * b_dq / b_sum;
  return {value, kI * kPi * value * logderiv};
}

Complex lambda(Complex tau) {
  if (!(tau.imag() > 0.0) || !std::isfinite(tau.real()) || !std::isfinite(tau.imag())) {
    throw DomainError("lambda: tau must lie in the upper half-plane");
  }
  // true: shift by an odd integer (x -> x/(x-1)), false: tau -> -1/tau (x -> 1-x)
  std::vector<bool> ops;
  for (int iter = 0; iter < 4096; ++iter) {
    const double n = std::nearbyint(tau.real());
    tau -= n;
    if (std::fmod(std::abs(n), 2.0) == 1.0) ops.push_back(true);
    if (std::norm(tau) < 1.0 - 1e-15) {
      tau = -1.0 / tau;
      ops.push_back(false);
    } else {
      break;
    }
  }
  // Compose the recorded actions as one integer matrix before applying it:
  // forming 1 - v explicitly would lose a tiny v entirely.
  Complex m00{1.0}, m01{0.0}, m10{0.0}, m11{1.0};
  for (bool shift : ops) {
    // shift: [[1, 0], [1, -1]], inversion: [[-1, 1], [0, 1]]; right-multiply.
    const Complex a = shift ? 1.0 : -1.0, b = shift ? 0.0 : 1.0;
    const Complex c = shift ? 1.0 : 0.0, d = shift ? -1.0 : 1.0;
    const Complex n00 = m00 * a + m01 * c, n01 = m00 * b + m01 * d;
    const Complex n10 = m10 * a + m11 * c, n11 = m10 * b + m11 * d;
    m00 = n00; m01 = n01; m10 = n10; m11 = n11;
  }
  const Complex v = lambda_theta(tau).value;
  return (m00 * v + m01) / (m10 * v + m11);
}

Complex apply_anharmonic(int index, Complex z) {
  switch (index) {
    case 0: return z;
    case 1: return 1.0 - z;
    case 2: return 1.0 / z;
    case 3: return 1.0 / (1.0 - z);
    case 4: return z / (z - 1.0);
    case 5: return (z - 1.0) / z;
    default: throw InternalError("apply_anharmonic: index out of range");
  }
}

AnharmonicReduction reduce_anharmonic(Complex z) {
  AnharmonicReduction best{0, z, 1.0};
  double best_mod = std::abs(z);
  for (int k = 1; k < 6; ++k) {
    const Complex w = apply_anharmonic(k, z);
    const double m = std::abs(w);
    if (m < best_mod) {
      best_mod = m;
      best.index = k;
      best.image = w;
    }
  }
  switch (best.index) {
    case 0: case 1: best.scale = 1.0; break;
    case 2: case 5: best.scale = 1.0 / std::norm(z); break;
    case 3: case 4: best.scale = 1.0 / std::norm(1.0 - z); break;
  }
  return best;
}

Complex tau_from_lambda(Complex w) {
  if (w == Complex{} || w == Complex{1.0}) throw PunctureError("tau_from_lambda: w is a puncture");
  // tau = i K(1 - w) / K(w) = i agm(1, sqrt(1 - w)) / agm(1, sqrt(w)).
  Complex tau = kI * agm(1.0, std::sqrt(1.0 - w)) / agm(1.0, std::sqrt(w));
  for (int it = 0; it < 4; ++it) {
    const LambdaJet jet = lambda_theta(tau);
    const Complex step = (jet.value - w) / jet.derivative;
    tau -= step;
    if (std::abs(step) <= 1e-15 * std::abs(tau)) break;
  }
  const LambdaJet check = lambda_theta(tau);
  if (!(std::abs(check.value - w) <= 1e-11 * std::abs(w))) {
    throw InternalError("tau_from_lambda: inversion of lambda did not converge");
  }
  return tau;
}

Complex covering(Complex zeta) {
  if (!(std::abs(zeta) < 1.0)) throw DomainError("covering: point not inside the unit disk");
  const Complex tau = 1.0 + kI * (1.0 + zeta) / (1.0 - zeta);
  return lambda(tau);
}

}  // namespace harnack::modular
