#include <harnack/errors.hpp>
#include <harnack/motions.hpp>
#include <harnack/rho01.hpp>
#include <harnack/rng.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace harnack {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> flat(const ExtendedPoint& w) {
  if (w.infinite) return {kInf, kInf};
  return {w.value.real(), w.value.imag()};
}

std::vector<double> witness(Complex z, const ExtendedPoint& a, const ExtendedPoint& b) {
  std::vector<double> out = {z.real(), z.imag()};
  for (const auto& w : {a, b}) {
    const auto f = flat(w);
    out.insert(out.end(), f.begin(), f.end());
  }
  return out;
}

bool is_value(const ExtendedPoint& w, double v) { return !w.infinite && w.value == Complex{v}; }

// Radius of the Euclidean disk around 0 that the Mobius translate maps onto B_R(z0).
double ball_radius(double R) {
  if (!(R >= 0.0) || !std::isfinite(R)) throw DomainError("motion: R must be finite and >= 0");
  return std::tanh(0.5 * R);
}

// Grid points of B_R(z0): the centre plus n x n nodes of [-r, r]^2 inside |zeta| <= r.
std::vector<Complex> ball_grid(Complex z0, double R, int n) {
  const double r = ball_radius(R);
  const MobiusMap to_ball = MobiusMap::disk_translation(z0);
  std::vector<Complex> out = {z0};
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const Complex zeta{-r + 2.0 * r * i / (n - 1), -r + 2.0 * r * j / (n - 1)};
      if (std::abs(zeta) <= r) out.push_back(to_ball(zeta));
    }
  }
  return out;
}

Complex random_ball_point(Rng& rng, Complex z0, double R) {
  return MobiusMap::disk_translation(z0)(rng.in_disk(ball_radius(R)));
}

void require_in_ball(const FiniteMotion& m, Complex z, double R) {
  if (!(std::abs(z) < 1.0) ||
      poincare_disk_distance(z, m.base_point()) > R * (1.0 + 1e-12) + 1e-12) {
    throw DomainError("motion: query point outside the Kobayashi ball B_R");
  }
}

// OLS slope of y on x with a 95% half-width.
std::pair<double, double> fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2) return {std::nan(""), std::nan("")};
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  if (!(sxx > 0.0)) return {std::nan(""), std::nan("")};
  const double slope = sxy / sxx;
  if (n < 3) return {slope, std::nan("")};
  double rss = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double e = y[k] - my - slope * (x[k] - mx);
    rss += e * e;
  }
  return {slope, 1.96 * std::sqrt(rss / (n - 2) / sxx)};
}

}  // namespace

ExtendedPoint FiniteMotion::operator()(Complex z, std::size_t k) const {
  const auto& w = labels_.at(k);
  if (w.infinite) return ExtendedPoint::infinity();
  if (!tracks_[k]) return w;
  const Complex v = (*tracks_[k])(z);
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return ExtendedPoint::infinity();
  return v;
}

Complex FiniteMotion::derivative(Complex z, std::size_t k) const {
  if (labels_.at(k).infinite || !tracks_[k]) return Complex{};
  return tracks_[k]->derivative(z);
}

std::optional<std::size_t> FiniteMotion::find(const ExtendedPoint& w) const {
  for (std::size_t k = 0; k < labels_.size(); ++k) {
    if (labels_[k].infinite == w.infinite && (w.infinite || labels_[k].value == w.value)) return k;
  }
  return std::nullopt;
}

nlohmann::json FiniteMotion::to_json() const {
  nlohmann::json j;
  j["base_point"] = {z0_.real(), z0_.imag()};
  j["labels"] = nlohmann::json::array();
  j["tracks"] = nlohmann::json::array();
  for (std::size_t k = 0; k < labels_.size(); ++k) {
    if (labels_[k].infinite) {
      j["labels"].push_back("inf");
    } else {
      j["labels"].push_back({labels_[k].value.real(), labels_[k].value.imag()});
    }
    j["tracks"].push_back(tracks_[k] ? tracks_[k]->to_json() : nlohmann::json());
  }
  j["normalized"] = normalized_;
  return j;
}

FiniteMotion motion_from_json(const nlohmann::json& j, const MotionAuditOptions& opts) {
  try {
    const auto& bp = j.at("base_point");
    const Complex z0{bp.at(0).get<double>(), bp.at(1).get<double>()};
    const auto& labels = j.at("labels");
    const auto& tracks = j.at("tracks");
    if (labels.size() != tracks.size()) {
      throw std::invalid_argument("motion: labels and tracks differ in length");
    }
    std::vector<MotionTrack> out;
    for (std::size_t k = 0; k < labels.size(); ++k) {
      MotionTrack t;
      if (labels[k].is_string()) {
        if (labels[k].get<std::string>() != "inf") {
          throw std::invalid_argument("motion: unknown label");
        }
        t.label = ExtendedPoint::infinity();
      } else {
        t.label = Complex{labels[k].at(0).get<double>(), labels[k].at(1).get<double>()};
      }
      if (!tracks[k].is_null()) t.track = AnalyticFunction::from_json(tracks[k]);
      out.push_back(std::move(t));
    }
    return build_motion(std::move(out), z0, opts);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("motion: malformed JSON: ") + e.what());
  }
}

FiniteMotion build_motion(std::vector<MotionTrack> tracks, Complex z0,
                          const MotionAuditOptions& opts) {
  require_finite(z0, "build_motion");
  if (!(std::abs(z0) < 1.0)) throw DomainError("build_motion: base point outside the disk");
  FiniteMotion m;
  m.z0_ = z0;
  for (auto& t : tracks) {
    if (!t.label.infinite) require_finite(t.label.value, "build_motion label");
    if (t.label.infinite && t.track) {
      throw NormalizationError("build_motion: the label at infinity must stay fixed",
                               {z0.real(), z0.imag(), kInf, kInf});
    }
    m.labels_.push_back(t.label);
    m.tracks_.push_back(std::move(t.track));
  }
  for (std::size_t a = 0; a < m.labels_.size(); ++a) {
    for (std::size_t b = a + 1; b < m.labels_.size(); ++b) {
      if (spherical_distance(m.labels_[a], m.labels_[b]) <= opts.collision) {
        throw InjectivityError("build_motion: repeated label",
                               witness(z0, m.labels_[a], m.labels_[b]));
      }
    }
  }
  m.normalized_ = m.find(Complex{0.0}) && m.find(Complex{1.0}) &&
                  m.find(ExtendedPoint::infinity());
  if (opts.require_normalized && !m.normalized_) {
    throw NormalizationError("build_motion: 0, 1 and infinity must be labels",
                             {z0.real(), z0.imag()});
  }
  for (std::size_t k = 0; k < m.labels_.size(); ++k) {
    const auto& w = m.labels_[k];
    if (w.infinite || !m.tracks_[k]) continue;
    const Complex at = (*m.tracks_[k])(z0);
    if (!(std::abs(at - w.value) <= 1e-12 * std::max(1.0, std::abs(w.value)))) {
      throw NormalizationError("build_motion: phi(z0, w) != w",
                               {z0.real(), z0.imag(), w.value.real(), w.value.imag(), at.real(),
                                at.imag()});
    }
    if (is_value(w, 0.0) || is_value(w, 1.0)) {
      for (const Complex z : ball_grid(z0, opts.R, 16)) {
        const Complex v = (*m.tracks_[k])(z);
        if (!(std::abs(v - w.value) <= 1e-12)) {
          throw NormalizationError("build_motion: track of 0 or 1 is not constant",
                                   {z.real(), z.imag(), w.value.real(), w.value.imag(), v.real(),
                                    v.imag()});
        }
      }
    }
  }
  audit_motion(m, opts);
  return m;
}

MotionAudit audit_motion(const FiniteMotion& m, const MotionAuditOptions& opts) {
  if (opts.grid < 2) throw DomainError("audit_motion: grid must have at least 2 nodes per side");
  const std::size_t L = m.size();
  MotionAudit best;
  double previous = kInf;
  int n = opts.grid;
  std::vector<ExtendedPoint> values(L);
  std::vector<double> pair_min(L * L, kInf);
  std::vector<Complex> pair_at(L * L, m.base_point());
  for (int round = 0; round <= opts.max_doublings; ++round, n *= 2) {
    MotionAudit cur;
    cur.min_separation = kInf;
    cur.grid = n;
    for (const Complex z : ball_grid(m.base_point(), opts.R, n)) {
      for (std::size_t k = 0; k < L; ++k) values[k] = m(z, k);
      for (std::size_t a = 0; a < L; ++a) {
        for (std::size_t b = a + 1; b < L; ++b) {
          const double d = spherical_distance(values[a], values[b]);
          if (!(d > opts.collision)) {
            throw InjectivityError("audit_motion: tracks collide",
                                   witness(z, m.label(a), m.label(b)));
          }
          if (d < pair_min[a * L + b]) {
            pair_min[a * L + b] = d;
            pair_at[a * L + b] = z;
          }
          if (d < cur.min_separation) {
            cur.min_separation = d;
            cur.where = z;
            cur.first = a;
            cur.second = b;
          }
        }
      }
    }
    best = cur;
    if (std::abs(cur.min_separation - previous) <= opts.stability * cur.min_separation) break;
    previous = cur.min_separation;
  }
  // Collisions between grid nodes: zeros of the holomorphic difference.
  const double r = ball_radius(opts.R);
  const MobiusMap from_ball = MobiusMap::disk_translation(m.base_point()).inverse();
  for (std::size_t a = 0; a < L; ++a) {
    for (std::size_t b = a + 1; b < L; ++b) {
      if (m.label(a).infinite || m.label(b).infinite || (!m.track(a) && !m.track(b))) continue;
      Complex z = pair_at[a * L + b];
      for (int it = 0; it < 60; ++it) {
        const ExtendedPoint fa = m(z, a), fb = m(z, b);
        if (fa.infinite || fb.infinite) break;
        const Complex g = fa.value - fb.value;
        const Complex dg = m.derivative(z, a) - m.derivative(z, b);
        // A zero is reached when g vanishes or the Newton step collapses;
        // away from zeros (e.g. g = e^h) the step stays bounded below.
        const Complex step = g == Complex{0.0} ? Complex{0.0} : g / dg;
        if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
        if (std::abs(step) <= 1e-13) {
          if (std::abs(from_ball(z)) <= r * (1.0 + 1e-12)) {
            throw InjectivityError("audit_motion: tracks collide between grid nodes",
                                   witness(z, m.label(a), m.label(b)));
          }
          break;
        }
        z -= step;
        if (!(std::abs(z) < 1.0)) break;
      }
    }
  }
  return best;
}

FiniteMotion invert_motion(const FiniteMotion& m, const MotionAuditOptions& opts) {
  std::vector<MotionTrack> out;
  for (std::size_t k = 0; k < m.size(); ++k) {
    const auto& w = m.label(k);
    MotionTrack t;
    if (w.infinite) {
      t.label = Complex{0.0};
      t.track = AnalyticFunction::constant(0.0);
    } else if (w.value == Complex{0.0}) {
      t.label = ExtendedPoint::infinity();
    } else {
      t.label = 1.0 / w.value;
      if (m.track(k)) t.track = AnalyticFunction::constant(1.0) / *m.track(k);
    }
    out.push_back(std::move(t));
  }
  MotionAuditOptions o = opts;
  o.require_normalized = m.normalized();
  return build_motion(std::move(out), m.base_point(), o);
}

FiniteMotion relabel_motion(const FiniteMotion& m, std::span<const std::size_t> order,
                            const MotionAuditOptions& opts) {
  if (order.size() != m.size()) throw DomainError("relabel_motion: order must list every label");
  std::vector<MotionTrack> out;
  for (std::size_t k : order) out.push_back({m.label(k), m.track(k)});
  MotionAuditOptions o = opts;
  o.require_normalized = m.normalized();
  return build_motion(std::move(out), m.base_point(), o);
}

double lemma2_ratio_bound(Complex f1, Complex f2, double royden_norm) {
  require_finite(f1, "lemma2_ratio_bound");
  require_finite(f2, "lemma2_ratio_bound");
  if (!(royden_norm >= 0.0)) throw DomainError("lemma2_ratio_bound: negative norm");
  for (Complex f : {f1, f2}) {
    if (f == Complex{0.0} || f == Complex{1.0}) {
      throw PunctureError("lemma2_ratio_bound: values must omit 0 and 1");
    }
  }
  if (f1 == f2) throw DomainError("lemma2_ratio_bound: coincident values");
  const double m = std::min(std::abs(std::log(std::abs(f1))), std::abs(std::log(std::abs(1.0 - f1))));
  return royden_norm * (2.0 * c01() + 2.0 * m + std::abs(std::log(std::abs(f1 - f2))));
}

Certificate check_lemma2(const FiniteMotion& m, double R, int base_points,
                         const CheckOptions& opts) {
  Certificate cert("lemma2", opts.seed, opts.tolerance);
  std::vector<std::size_t> movable;
  for (std::size_t k = 0; k < m.size(); ++k) {
    const auto& w = m.label(k);
    if (!w.infinite && !is_value(w, 0.0) && !is_value(w, 1.0)) movable.push_back(k);
  }
  Rng rng(opts.seed);
  for (int b = 0; b < base_points; ++b) {
    const Complex z = random_ball_point(rng, m.base_point(), R);
    const Complex v = rng.unit();
    const double norm = poincare_disk_density(z);
    for (std::size_t a : movable) {
      for (std::size_t c : movable) {
        if (a == c) continue;
        const ExtendedPoint f1 = m(z, a), f2 = m(z, c);
        if (f1.infinite || f2.infinite) {
          throw AuditError("lemma2: track reaches infinity", witness(z, m.label(a), m.label(c)));
        }
        const Complex d = f1.value - f2.value;
        const double lhs = std::abs((m.derivative(z, a) - m.derivative(z, c)) * v) / std::abs(d);
        const double bound = opts.bound_scale * lemma2_ratio_bound(f1.value, f2.value, norm);
        cert.record((bound - lhs) / bound, {z.real(), z.imag(), double(a), double(c)});
      }
    }
  }
  cert.details["R"] = R;
  cert.details["base_points"] = base_points;
  cert.finalize();
  return cert;
}

std::vector<HolderQuery> holder_queries(const FiniteMotion& m, double R, int count,
                                        std::uint64_t seed) {
  if (m.size() < 2) throw DomainError("holder_queries: need two labels");
  Rng rng(seed);
  std::vector<HolderQuery> out;
  for (int k = 0; k < count; ++k) {
    const Complex z = random_ball_point(rng, m.base_point(), R);
    const int n = static_cast<int>(m.size());
    const auto a = static_cast<std::size_t>(rng.integer(0, n - 1));
    auto b = static_cast<std::size_t>(rng.integer(0, n - 2));
    if (b >= a) ++b;
    out.push_back({z, a, b});
  }
  return out;
}

double holder_spherical_constant(double R) {
  const double alpha = std::exp(-R);
  const double M = schottky_bound(R, 3.0);
  const double C = 2.0 * c01() + 2.0 * std::log(M);
  return std::max(5.0, std::pow(5.0, alpha) * std::exp(C * (1.0 - alpha)) * 2.0 * M);
}

double holder_euclidean_constant(double R, double Rp) {
  const double M = schottky_bound(R, Rp);
  return holder_spherical_constant(R) * (1.0 + M * M);
}

nlohmann::json HolderReport::to_json() const {
  nlohmann::json j = certificate.to_json();
  const auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); };
  j["R"] = num(R);
  j["alpha"] = num(alpha);
  j["C_R"] = num(constant);
  j["fitted_exponent"] = num(fitted_exponent);
  j["exponent_band"] = num(exponent_band);
  j["quotients"] = nlohmann::json::array();
  for (double q : quotients) j["quotients"].push_back(num(q));
  return j;
}

HolderReport check_holder_spherical(const FiniteMotion& m, double R,
                                    std::span<const HolderQuery> queries,
                                    const CheckOptions& opts) {
  if (!m.normalized()) throw NormalizationError("holder: motion is not normalized", {});
  MotionAuditOptions audit;
  audit.R = R;
  audit_motion(m, audit);
  HolderReport rep{Certificate("holder_spherical", opts.seed, opts.tolerance)};
  rep.R = R;
  rep.alpha = std::exp(-R);
  rep.constant = holder_spherical_constant(R);
  std::vector<double> xs, ys;
  for (const auto& q : queries) {
    require_in_ball(m, q.z, R);
    if (q.first == q.second || q.first >= m.size() || q.second >= m.size()) {
      throw DomainError("holder: query needs two distinct labels");
    }
    const double s0 = spherical_distance(m.label(q.first), m.label(q.second));
    const double lhs = spherical_distance(m(q.z, q.first), m(q.z, q.second));
    const double rhs = opts.bound_scale * rep.constant * std::pow(s0, rep.alpha);
    rep.certificate.record((rhs - lhs) / rhs, {q.z.real(), q.z.imag(), double(q.first),
                                               double(q.second)});
    rep.quotients.push_back(lhs / std::pow(s0, rep.alpha));
    if (lhs > 0.0) {
      xs.push_back(std::log(s0));
      ys.push_back(std::log(lhs));
    }
  }
  std::tie(rep.fitted_exponent, rep.exponent_band) = fit_slope(xs, ys);
  rep.certificate.details["R"] = R;
  rep.certificate.details["alpha"] = rep.alpha;
  rep.certificate.details["C_R"] = rep.constant;
  rep.certificate.finalize();
  return rep;
}

HolderReport check_holder_euclidean(const FiniteMotion& m, double R, double Rp,
                                    std::span<const HolderQuery> queries,
                                    const CheckOptions& opts) {
  if (!m.normalized()) throw NormalizationError("holder: motion is not normalized", {});
  if (!(Rp > 0.0)) throw DomainError("holder: R' must be positive");
  MotionAuditOptions audit;
  audit.R = R;
  audit_motion(m, audit);
  HolderReport rep{Certificate("holder_euclidean", opts.seed, opts.tolerance)};
  rep.R = R;
  rep.alpha = std::exp(-R);
  rep.constant = holder_euclidean_constant(R, Rp);
  std::vector<double> xs, ys;
  for (const auto& q : queries) {
    require_in_ball(m, q.z, R);
    if (q.first == q.second || q.first >= m.size() || q.second >= m.size()) {
      throw DomainError("holder: query needs two distinct labels");
    }
    const auto& w1 = m.label(q.first);
    const auto& w2 = m.label(q.second);
    if (w1.infinite || w2.infinite || !(std::abs(w1.value) < Rp) || !(std::abs(w2.value) < Rp)) {
      throw DomainError("holder: labels must lie in the disk of radius R'");
    }
    const ExtendedPoint p1 = m(q.z, q.first), p2 = m(q.z, q.second);
    if (p1.infinite || p2.infinite) {
      throw AuditError("holder: track reaches infinity", witness(q.z, w1, w2));
    }
    const double dw = std::abs(w1.value - w2.value);
    const double dphi = std::abs(p1.value - p2.value);
    const double upper = opts.bound_scale * rep.constant * std::pow(dw, rep.alpha);
    const double lower = std::pow(dw / rep.constant, 1.0 / rep.alpha) / opts.bound_scale;
    const std::vector<double> wit = {q.z.real(), q.z.imag(), double(q.first), double(q.second)};
    rep.certificate.record((upper - dphi) / upper, wit);
    rep.certificate.record((dphi - lower) / std::max(dphi, lower), wit);
    rep.quotients.push_back(dphi / std::pow(dw, rep.alpha));
    xs.push_back(std::log(dw));
    ys.push_back(std::log(dphi));
  }
  std::tie(rep.fitted_exponent, rep.exponent_band) = fit_slope(xs, ys);
  rep.certificate.details["R"] = R;
  rep.certificate.details["Rprime"] = Rp;
  rep.certificate.details["alpha"] = rep.alpha;
  rep.certificate.details["C_R"] = rep.constant;
  rep.certificate.finalize();
  return rep;
}

}  // namespace harnack
