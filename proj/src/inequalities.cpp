#include <harnack/inequalities.hpp>
#include <harnack/rho01.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace harnack {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> flat(std::initializer_list<Complex> pts) {
  std::vector<double> out;
  for (const Complex& p : pts) {
    out.push_back(p.real());
    out.push_back(p.imag());
  }
  return out;
}

double envelope_slack(double kappa, double ratio, double scale) {
  return kappa + std::log(scale) - std::abs(std::log(ratio));
}

double upper_slack(double value, double bound, double scale) {
  const double b = scale * bound;
  return (b - value) / std::max(std::abs(b), 1e-300);
}

template <class Test>
void for_each_audit_node(const CheckOptions& opts, Test&& test) {
  test(Complex{});
  for (int i = 1; i <= opts.audit_rings; ++i) {
    const double r = opts.audit_radius * i / opts.audit_rings;
    for (int k = 0; k < opts.audit_spokes; ++k) {
      test(std::polar(r, 2.0 * kPi * (k + 0.5 * (i % 2)) / opts.audit_spokes));
    }
  }
}

void require_pair_in_disk(const PointPair& p) {
  require_finite(p.z, "pair");
  require_finite(p.z0, "pair");
  if (std::abs(p.z) >= 1.0 || std::abs(p.z0) >= 1.0) throw DomainError("pair outside the unit disk");
}

struct LogSample {
  Complex point;
  Complex log;
};

// Adaptive walk along z0 -> z keeping every argument increment below pi/8.
std::vector<LogSample> log_path(const AnalyticFunction& f, Complex z0, Complex z, Complex log_start) {
  std::vector<LogSample> path{{z0, log_start}};
  const Complex v0 = f(z0);
  if (std::abs(std::exp(log_start) - v0) > 1e-8 * std::abs(v0)) {
    throw BranchError("continue_log: starting value is not a logarithm of f(z0)", z0);
  }
  if (z == z0) return path;
  constexpr double kMaxStep = 1.0 / 16.0;
  double t = 0.0, dt = kMaxStep;
  double arg = log_start.imag();
  while (t < 1.0) {
    dt = std::min(dt, 1.0 - t);
    const Complex w = z0 + (t + dt) * (z - z0);
    const Complex v = f(w);
    if (v == Complex{} || !std::isfinite(std::abs(v))) {
      throw BranchError("continue_log: f vanishes or is not finite on the path", w);
    }
    const double step = std::remainder(std::arg(v) - arg, 2.0 * kPi);
    if (std::abs(step) > kPi / 8.0) {
      dt *= 0.5;
      if (dt < 1e-12) throw BranchError("continue_log: argument jump of size >= pi", w);
      continue;
    }
    t = (dt == 1.0 - t) ? 1.0 : t + dt;
    arg += step;
    path.push_back({w, Complex{std::log(std::abs(v)), arg}});
    dt = std::min(2.0 * dt, kMaxStep);
  }
  return path;
}

// Continuous log f(z) on a path from z0 starting at the witness or principal value.
std::pair<Complex, Complex> branch_logs(const AnalyticFunction& f, const PointPair& p,
                                        const std::optional<AnalyticFunction>& witness) {
  if (witness) {
    audit_log_witness(f, *witness, p.z0, p.z);
    return {(*witness)(p.z0), (*witness)(p.z)};
  }
  const Complex start = std::log(f(p.z0));
  return {start, continue_log(f, p.z0, p.z, start)};
}

}  // namespace

Envelope harnack_envelope(double kappa) {
  if (!(kappa >= 0.0)) throw DomainError("harnack_envelope: kappa must be >= 0");
  return {std::exp(-kappa), std::exp(kappa)};
}

double two_constants_bound(Complex f_at_z0, double M, double kappa) {
  const double a = std::abs(f_at_z0);
  if (!(a > 0.0 && a < M)) throw DomainError("two_constants_bound: need 0 < |f(z0)| < M");
  if (!(kappa >= 0.0)) throw DomainError("two_constants_bound: kappa must be >= 0");
  if (std::isinf(kappa)) return M;
  const double alpha = std::exp(-kappa);
  return std::exp(alpha * std::log(a) + (1.0 - alpha) * std::log(M));
}

double landau_bound(Complex f_val, double royden_norm) {
  require_finite(f_val, "landau_bound");
  if (f_val == Complex{0.0} || f_val == Complex{1.0}) {
    throw PunctureError("landau_bound: f takes an omitted value");
  }
  if (!(royden_norm >= 0.0)) throw DomainError("landau_bound: negative Royden norm");
  const double a = std::abs(f_val);
  return royden_norm * a * (c01() + std::abs(std::log(a)));
}

double cor4_growth_bound(Complex h_at_z0, double kappa) {
  require_finite(h_at_z0, "cor4_growth_bound");
  if (!(kappa >= 0.0)) throw DomainError("cor4_growth_bound: kappa must be >= 0");
  const double c = c01();
  return (c + std::abs(h_at_z0.real())) * std::exp(kappa) + std::abs(h_at_z0.imag()) - c;
}

double schottky_bound(double R, double Rp) {
  if (!(R >= 0.0) || !(Rp > 0.0)) throw DomainError("schottky_bound: need R >= 0, R' > 0");
  const double c = c01();
  return std::exp(-c + std::exp(R) * (c + std::log(std::max(1.0, Rp))));
}

Complex continue_log(const AnalyticFunction& f, Complex z0, Complex z, Complex log_start) {
  return log_path(f, z0, z, log_start).back().log;
}

void audit_log_witness(const AnalyticFunction& f, const AnalyticFunction& witness, Complex z0,
                       Complex z) {
  const Complex start = witness(z0);
  for (const LogSample& s : log_path(f, z0, z, start)) {
    const Complex w = witness(s.point);
    const Complex v = f(s.point);
    if (std::abs(std::exp(w) - v) > 1e-8 * std::abs(v)) {
      throw BranchError("log witness: exp(L) differs from f", s.point);
    }
    if (std::abs(w.imag() - s.log.imag()) >= kPi) {
      throw BranchError("log witness: branch jump of size >= pi", s.point);
    }
  }
}

void audit_omits_zero_one(const AnalyticFunction& f, const CheckOptions& opts) {
  for_each_audit_node(opts, [&](Complex z) {
    const Complex v = f(z);
    // Coverings come within 1e-26 of the cusps at legitimate points, so only
    // exact hits, underflow and non-finite values count as violations.
    if (!std::isfinite(std::abs(v)) || std::abs(v) < 1e-300 || v == Complex{1.0}) {
      throw AuditError("f takes the value 0 or 1", flat({z, v}));
    }
  });
}

void audit_positive_real_part(const AnalyticFunction& f, const CheckOptions& opts) {
  for_each_audit_node(opts, [&](Complex z) {
    const Complex v = f(z);
    if (!(v.real() > 0.0)) throw AuditError("Re F is not positive", flat({z, v}));
  });
}

Certificate check_harnack(const AnalyticFunction& F, std::span<const PointPair> pairs,
                          const CheckOptions& opts) {
  audit_positive_real_part(F, opts);
  Certificate cert("harnack", opts.seed, opts.tolerance);
  for (const PointPair& p : pairs) {
    require_pair_in_disk(p);
    const double kappa = poincare_disk_distance(p.z, p.z0);
    const double ratio = F(p.z).real() / F(p.z0).real();
    cert.record(envelope_slack(kappa, ratio, opts.bound_scale), flat({p.z, p.z0}));
  }
  return cert;
}

Certificate check_harnack(const AnalyticFunction& F, Complex z, Complex z0, const CheckOptions& opts) {
  const PointPair p{z, z0};
  return check_harnack(F, std::span<const PointPair>(&p, 1), opts);
}

Certificate check_two_constants(const AnalyticFunction& f, double M, std::span<const PointPair> pairs,
                                const CheckOptions& opts) {
  for_each_audit_node(opts, [&](Complex z) {
    const Complex v = f(z);
    if (!(std::abs(v) < M)) throw AuditError("|f| >= M", flat({z, v}));
  });
  Certificate cert("two_constants", opts.seed, opts.tolerance);
  for (const PointPair& p : pairs) {
    require_pair_in_disk(p);
    const double kappa = poincare_disk_distance(p.z, p.z0);
    const double bound = opts.bound_scale * two_constants_bound(f(p.z0), M, kappa);
    cert.record(std::log(bound) - std::log(std::abs(f(p.z))), flat({p.z, p.z0}));
  }
  return cert;
}

Certificate check_landau(const AnalyticFunction& f, std::span<const Complex> points,
                         const CheckOptions& opts) {
  audit_omits_zero_one(f, opts);
  Certificate cert("landau", opts.seed, opts.tolerance);
  for (const Complex& z : points) {
    if (!(std::abs(z) < 1.0 - 1e-4)) throw DomainError("check_landau: point too close to the circle");
    const double deriv = std::abs(f.derivative(z));
    const double bound = landau_bound(f(z), poincare_disk_density(z));
    cert.record(upper_slack(deriv, bound, opts.bound_scale), flat({z}));
  }
  cert.details["C01"] = c01();
  return cert;
}

Certificate check_prop3(const AnalyticFunction& f, std::span<const PointPair> pairs,
                        bool use_log_branch, const std::optional<AnalyticFunction>& log_witness,
                        const CheckOptions& opts) {
  audit_omits_zero_one(f, opts);
  Certificate cert(use_log_branch ? "prop3_branch" : "prop3", opts.seed, opts.tolerance);
  const double c = c01();
  for (const PointPair& p : pairs) {
    require_pair_in_disk(p);
    const double kappa = poincare_disk_distance(p.z, p.z0);
    double num = 0.0, den = 0.0;
    if (use_log_branch) {
      const auto [l0, l] = branch_logs(f, p, log_witness);
      num = c + std::abs(l);
      den = c + std::abs(l0);
    } else {
      num = c + std::abs(std::log(std::abs(f(p.z))));
      den = c + std::abs(std::log(std::abs(f(p.z0))));
    }
    cert.record(envelope_slack(kappa, num / den, opts.bound_scale), flat({p.z, p.z0}));
  }
  cert.details["C01"] = c;
  return cert;
}

Certificate check_arg_refined(const AnalyticFunction& f, std::span<const PointPair> pairs,
                              const std::optional<AnalyticFunction>& log_witness,
                              const CheckOptions& opts) {
  audit_omits_zero_one(f, opts);
  Certificate cert("arg_refined", opts.seed, opts.tolerance);
  const double c = c01();
  for (const PointPair& p : pairs) {
    require_pair_in_disk(p);
    const double kappa = poincare_disk_distance(p.z, p.z0);
    const auto [l0, l] = branch_logs(f, p, log_witness);
    // log(e^{-i arg f(z0)} f) on the same branch is l - i Im l0.
    const double num = c + std::abs(l - Complex{0.0, l0.imag()});
    const double den = c + std::abs(l0.real());
    cert.record(envelope_slack(kappa, num / den, opts.bound_scale), flat({p.z, p.z0}));
  }
  cert.details["C01"] = c;
  return cert;
}

Certificate check_cor4(const AnalyticFunction& h, std::span<const PointPair> pairs,
                       const CheckOptions& opts) {
  for_each_audit_node(opts, [&](Complex z) {
    const Complex v = h(z);
    const double k = std::nearbyint(v.imag() / (2.0 * kPi));
    if (std::abs(v - Complex{0.0, 2.0 * kPi * k}) < 1e-12) {
      throw AuditError("h takes a value in 2 pi i Z", flat({z, v}));
    }
  });
  Certificate cert("cor4", opts.seed, opts.tolerance);
  for (const PointPair& p : pairs) {
    require_pair_in_disk(p);
    const double kappa = poincare_disk_distance(p.z, p.z0);
    cert.record(upper_slack(std::abs(h(p.z)), cor4_growth_bound(h(p.z0), kappa), opts.bound_scale),
                flat({p.z, p.z0}));
  }
  return cert;
}

Certificate check_hempel_implicit(const AnalyticFunction& f, std::span<const PointPair> pairs,
                                  const CheckOptions& opts) {
  audit_omits_zero_one(f, opts);
  Certificate cert("hempel", opts.seed, opts.tolerance);
  for (const PointPair& p : pairs) {
    require_pair_in_disk(p);
    const double kappa = poincare_disk_distance(p.z, p.z0);
    const double lhs = hempel_radial_integral(std::abs(f(p.z0)), std::abs(f(p.z)));
    cert.record(opts.bound_scale * kappa - lhs, flat({p.z, p.z0}));
  }
  return cert;
}

Certificate check_punctured_disk_harnack(const AnalyticFunction& f, std::span<const PointPair> pairs,
                                         const CheckOptions& opts) {
  for_each_audit_node(opts, [&](Complex z) {
    const double a = std::abs(f(z));
    if (!(a > 0.0 && a < 1.0)) throw AuditError("f leaves the punctured disk", flat({z, f(z)}));
  });
  Certificate cert("punctured_disk_harnack", opts.seed, opts.tolerance);
  for (const PointPair& p : pairs) {
    require_pair_in_disk(p);
    const double kappa = poincare_disk_distance(p.z, p.z0);
    const double ratio = std::log(1.0 / std::abs(f(p.z))) / std::log(1.0 / std::abs(f(p.z0)));
    cert.record(envelope_slack(kappa, ratio, opts.bound_scale), flat({p.z, p.z0}));
  }
  return cert;
}

AdmissibleFunction random_admissible(Rng& rng) {
  auto base = [&rng]() -> AdmissibleFunction {
    if (rng.uniform() < 0.5) {
      // Past |w| ~ 0.9 the covering sits near its cusps and anharmonic
      // images round to exactly 0 or 1.
      const double shrink = rng.uniform(0.3, 0.9);
      const MobiusMap m = MobiusMap::disk_automorphism(rng.angle(), rng.in_disk(0.9));
      const AnalyticFunction inner =
          AnalyticFunction::affine(shrink, 0.0).compose(AnalyticFunction::mobius(m));
      return {AnalyticFunction::covering().compose(inner), std::nullopt, "covering"};
    }
    // -exp(P) with sum |a_n| < pi: |Im P| < pi keeps e^P off -1.
    const int degree = rng.integer(1, 4);
    std::vector<Complex> coeffs(degree + 1);
    double total = 0.0;
    for (Complex& a : coeffs) {
      a = rng.in_disk(1.0);
      total += std::abs(a);
    }
    const double budget = rng.uniform(0.1, 0.99) * kPi;
    for (Complex& a : coeffs) a *= budget / total;
    const AnalyticFunction p = AnalyticFunction::series(coeffs, 0.0, 2.0);
    return {-AnalyticFunction::exp(p), p + AnalyticFunction::constant({0.0, kPi}), "neg_exp"};
  };
  AdmissibleFunction g = base();
  if (rng.uniform() < 0.3) {
    // anharmonic images permute {0, 1, inf}
    const AnalyticFunction one = AnalyticFunction::constant(1.0);
    switch (rng.integer(0, 4)) {
      case 0: return {one - g.f, std::nullopt, g.family + "/1-f"};
      case 1: {
        std::optional<AnalyticFunction> w;
        if (g.log_witness) w = -*g.log_witness;
        return {one / g.f, w, g.family + "/1/f"};
      }
      case 2: return {g.f / (g.f - one), std::nullopt, g.family + "/f/(f-1)"};
      case 3: return {one / (one - g.f), std::nullopt, g.family + "/1/(1-f)"};
      default: return {(g.f - one) / g.f, std::nullopt, g.family + "/(f-1)/f"};
    }
  }
  return g;
}

std::vector<AdmissibleFunction> admissible_family(std::size_t count, std::uint64_t seed) {
  std::vector<AdmissibleFunction> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(seed, i);
    out.push_back(random_admissible(rng));
  }
  return out;
}

Certificate check_schottky(std::span<const AdmissibleFunction> family, double R, double Rp,
                           int points_per_function, const CheckOptions& opts) {
  const double bound = schottky_bound(R, Rp);
  const double radius = std::tanh(0.5 * R);
  Certificate cert("schottky", opts.seed, opts.tolerance);
  double empirical_sup = 0.0;
  std::uint64_t used = 0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const AnalyticFunction& f = family[i].f;
    if (std::abs(f(0.0)) > Rp) continue;
    ++used;
    Rng rng(opts.seed, i);
    for (int k = 0; k < points_per_function; ++k) {
      // the maximum modulus sits on the boundary circle; sample it densely
      const Complex z = k % 4 == 3 ? rng.in_disk(radius) : std::polar(radius, rng.angle());
      const double v = std::abs(f(z));
      empirical_sup = std::max(empirical_sup, v);
      cert.record(upper_slack(v, bound, opts.bound_scale), flat({z}));
    }
  }
  cert.details["bound"] = bound;
  cert.details["empirical_sup"] = empirical_sup;
  cert.details["functions"] = static_cast<double>(used);
  cert.details["R"] = R;
  cert.details["Rprime"] = Rp;
  return cert;
}

std::vector<PointPair> random_pairs(Rng& rng, std::size_t count, double radius) {
  std::vector<PointPair> out(count);
  for (PointPair& p : out) p = {rng.in_disk(radius), rng.in_disk(radius)};
  return out;
}

}  // namespace harnack
