#include <harnack/kobayashi.hpp>
#include <harnack/motions.hpp>
#include <harnack/rho01.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace harnack;
using AF = AnalyticFunction;

namespace {

constexpr double kC01 = 4.37687923045295;
const double kLog3 = std::log(3.0);
const Complex kI{0.0, 1.0};

std::vector<MotionTrack> fixed_labels() {
  return {{Complex{0.0}, std::nullopt}, {Complex{1.0}, std::nullopt},
          {ExtendedPoint::infinity(), std::nullopt}};
}

// 0, 1, inf fixed; 2 -> 2 + z/4; i -> i (1 + z/4).
FiniteMotion two_disk_motion() {
  auto t = fixed_labels();
  t.push_back({Complex{2.0}, AF::affine(0.25, 2.0)});
  t.push_back({kI, AF::affine(0.25 * kI, kI)});
  return build_motion(t, 0.0);
}

// w |w|^{-2z/(1+z)}: at real z = r the label w > 0 moves to w^{(1-r)/(1+r)}.
FiniteMotion power_motion(const std::vector<Complex>& ws) {
  auto t = fixed_labels();
  const AF exponent = AF::mobius(MobiusMap(-2.0, 0.0, 1.0, 1.0));
  for (Complex w : ws) {
    t.push_back({w, AF::constant(w) * AF::exp(AF::constant(std::log(std::abs(w))) * exponent)});
  }
  return build_motion(t, 0.0);
}

std::vector<HolderQuery> finite_pairs(const FiniteMotion& m, std::initializer_list<Complex> zs) {
  std::vector<HolderQuery> out;
  for (Complex z : zs) {
    for (std::size_t a = 0; a < m.size(); ++a) {
      for (std::size_t b = 0; b < m.size(); ++b) {
        if (a != b && !m.label(a).infinite && !m.label(b).infinite) out.push_back({z, a, b});
      }
    }
  }
  return out;
}

}  // namespace

TEST(BuildMotion, IdentityAndTwoDisks) {
  auto t = fixed_labels();
  t.push_back({Complex{2.0}, std::nullopt});
  const FiniteMotion id = build_motion(t, 0.0);
  EXPECT_TRUE(id.normalized());
  EXPECT_EQ(id(Complex(0.3, 0.2), 3).value, Complex{2.0});
  const FiniteMotion m = two_disk_motion();
  EXPECT_EQ(m.size(), 5u);
  EXPECT_NEAR(std::abs(m(0.5, 3).value - 2.125), 0.0, 1e-15);
  const MotionAudit a = audit_motion(m);
  EXPECT_GT(a.min_separation, 0.1);
  EXPECT_GE(a.grid, 64);
}

TEST(BuildMotion, RepeatedLabelCollision) {
  auto t = fixed_labels();
  t.push_back({Complex{2.0}, AF::affine(1.0, 2.0)});
  t.push_back({Complex{2.0}, AF::affine(-1.0, 2.0)});
  try {
    build_motion(t, 0.0);
    FAIL() << "expected InjectivityError";
  } catch (const InjectivityError& e) {
    ASSERT_EQ(e.witness().size(), 6u);
    EXPECT_EQ(e.witness()[0], 0.0);
    EXPECT_EQ(e.witness()[1], 0.0);
    EXPECT_EQ(e.witness()[2], 2.0);
    EXPECT_EQ(e.witness()[4], 2.0);
  }
}

TEST(BuildMotion, CollisionBetweenGridNodes) {
  // 2 + z and 3 - z meet at z = 1/2, which is not a grid node.
  auto t = fixed_labels();
  t.push_back({Complex{2.0}, AF::affine(1.0, 2.0)});
  t.push_back({Complex{3.0}, AF::affine(-1.0, 3.0)});
  try {
    build_motion(t, 0.0);
    FAIL() << "expected InjectivityError";
  } catch (const InjectivityError& e) {
    EXPECT_NEAR(e.witness()[0], 0.5, 1e-9);
    EXPECT_NEAR(e.witness()[1], 0.0, 1e-9);
  }
  // Outside the audited ball the same tracks are accepted.
  MotionAuditOptions small;
  small.R = 0.5;  // Euclidean radius tanh(1/4) < 1/2
  EXPECT_NO_THROW(build_motion(t, 0.0, small));
}

TEST(BuildMotion, TrackHittingAPuncture) {
  auto t = fixed_labels();
  t.push_back({Complex{0.5}, AF::affine(1.0, 0.5)});  // reaches 1 at z = 1/2
  EXPECT_THROW(build_motion(t, 0.0), InjectivityError);
}

TEST(BuildMotion, NormalizationFailures) {
  auto t = fixed_labels();
  t.push_back({Complex{2.0}, AF::affine(1.0, 3.0)});
  EXPECT_THROW(build_motion(t, 0.0), NormalizationError);

  t = fixed_labels();
  t[0].track = AF::affine(0.001, 0.0);
  EXPECT_THROW(build_motion(t, 0.0), NormalizationError);

  t = fixed_labels();
  t[2].track = AF::identity();
  EXPECT_THROW(build_motion(t, 0.0), NormalizationError);

  t = fixed_labels();
  t.erase(t.begin() + 1);
  EXPECT_THROW(build_motion(t, 0.0), NormalizationError);
  MotionAuditOptions loose;
  loose.require_normalized = false;
  EXPECT_FALSE(build_motion(t, 0.0, loose).normalized());
  const FiniteMotion un = build_motion(t, 0.0, loose);
  const std::vector<HolderQuery> q = {{0.0, 0, 1}};
  EXPECT_THROW(check_holder_spherical(un, 1.0, q), NormalizationError);
}

TEST(BuildMotion, OffCenterBasePoint) {
  const Complex z0(0.3, -0.2);
  auto t = fixed_labels();
  t.push_back({Complex{2.0}, AF::affine(0.25, 2.0 - 0.25 * z0)});
  const FiniteMotion m = build_motion(t, z0);
  EXPECT_EQ(m.base_point(), z0);
  const auto q = holder_queries(m, 1.0, 50, 9);
  for (const auto& h : q) EXPECT_LE(kobayashi_disk(h.z, z0), 1.0 + 1e-12);
  EXPECT_TRUE(check_holder_spherical(m, 1.0, q).certificate.pass);
}

TEST(Lemma2, Examples) {
  EXPECT_NEAR(lemma2_ratio_bound(2.0, kI, 2.0), 2.0 * (2.0 * kC01 + std::log(std::sqrt(5.0))),
              1e-12);
  EXPECT_NEAR(lemma2_ratio_bound(2.0, kI, 2.0), 19.1168, 1e-3);
  // Measured ratio for the two-disk motion at z = 0 with |V| = 1.
  const double measured = std::abs(0.25 - 0.25 * kI) / std::abs(2.0 - kI);
  EXPECT_NEAR(measured, 0.1581, 1e-4);
  EXPECT_LE(measured, lemma2_ratio_bound(2.0, kI, 2.0));
  const Complex f1 = std::polar(1.0, std::numbers::pi / 3);
  EXPECT_NEAR(lemma2_ratio_bound(f1, 3.0, 1.0),
              2.0 * kC01 + std::abs(std::log(std::abs(f1 - 3.0))), 1e-12);
  EXPECT_GT(lemma2_ratio_bound(2.0, 1e6, 1.0), lemma2_ratio_bound(2.0, 1e3, 1.0));
  EXPECT_THROW(lemma2_ratio_bound(2.0, 2.0, 1.0), DomainError);
  EXPECT_THROW(lemma2_ratio_bound(1.0, 2.0, 1.0), PunctureError);
  EXPECT_THROW(lemma2_ratio_bound(2.0, 0.0, 1.0), PunctureError);
}

TEST(Lemma2, HoldsOnMotions) {
  CheckOptions opts;
  opts.tolerance = 1e-6;
  const Certificate a = check_lemma2(two_disk_motion(), 1.5, 100, opts);
  EXPECT_TRUE(a.pass);
  EXPECT_EQ(a.samples, 200u);
  const FiniteMotion p = power_motion({0.1, 0.5, 2.0, Complex(0.3, 0.4), Complex(-3.0, 1.0)});
  const Certificate b = check_lemma2(p, 1.5, 100, opts);
  EXPECT_TRUE(b.pass);
  EXPECT_GE(b.worst_slack, -1e-6);
}

TEST(HolderSpherical, ConstantFollowsTheProof) {
  const double R = kLog3, alpha = 1.0 / 3.0;
  const double M = std::exp(-kC01) * std::pow(3.0 * std::exp(kC01), 3.0);
  const double C = 2.0 * kC01 + 2.0 * std::log(M);
  EXPECT_NEAR(holder_spherical_constant(R) /
                  (std::pow(5.0, alpha) * std::exp(C * (1.0 - alpha)) * 2.0 * M),
              1.0, 1e-12);
  // R = 0: alpha = 1, M = 3, so 5 * 2 * 3.
  EXPECT_NEAR(holder_spherical_constant(0.0), 30.0, 1e-12);
  EXPECT_GE(holder_euclidean_constant(R, 3.0), holder_spherical_constant(R));
}

TEST(HolderSpherical, IdentityAndTwoDisks) {
  auto t = fixed_labels();
  t.push_back({Complex{2.0}, std::nullopt});
  t.push_back({Complex(0.0, -3.0), std::nullopt});
  const FiniteMotion id = build_motion(t, 0.0);
  const auto q = holder_queries(id, 2.0, 200, 4);
  const HolderReport r = check_holder_spherical(id, 2.0, q);
  EXPECT_TRUE(r.certificate.pass);
  EXPECT_NEAR(r.fitted_exponent, 1.0, 1e-12);

  const FiniteMotion m = two_disk_motion();
  const auto pairs = finite_pairs(m, {Complex(0.5)});
  const HolderReport s = check_holder_spherical(m, kLog3, pairs);
  EXPECT_TRUE(s.certificate.pass);
  EXPECT_NEAR(s.alpha, 1.0 / 3.0, 1e-15);
  EXPECT_GT(s.certificate.worst_slack, 0.9);
  const auto j = s.to_json();
  EXPECT_TRUE(j.contains("alpha"));
  EXPECT_TRUE(j.contains("fitted_exponent"));
  EXPECT_EQ(j.at("inequality"), "holder_spherical");
}

TEST(HolderSpherical, FarPairsAreAutomatic) {
  const FiniteMotion m = two_disk_motion();
  // 0 and infinity are at spherical distance 1 and never move.
  const std::vector<HolderQuery> q = {{0.4, 0, 2}};
  const HolderReport r = check_holder_spherical(m, 1.0, q);
  EXPECT_TRUE(r.certificate.pass);
  EXPECT_NEAR(r.quotients[0], 1.0, 1e-15);
}

TEST(HolderSpherical, QueriesOutsideTheBallAreRejected) {
  const FiniteMotion m = two_disk_motion();
  const std::vector<HolderQuery> q = {{0.9, 0, 3}};
  EXPECT_THROW(check_holder_spherical(m, kLog3, q), DomainError);
  const std::vector<HolderQuery> same = {{0.1, 3, 3}};
  EXPECT_THROW(check_holder_spherical(m, kLog3, same), DomainError);
}

TEST(HolderSpherical, NegativeControl) {
  // The spherical constant is at least 5, so a tightened bound still holds;
  // a bound_scale below 1/C_R must fail for the moving pair.
  const FiniteMotion m = two_disk_motion();
  const auto pairs = finite_pairs(m, {Complex(0.5)});
  CheckOptions absurd;
  absurd.bound_scale = 0.1 / holder_spherical_constant(kLog3);
  EXPECT_FALSE(check_holder_spherical(m, kLog3, pairs, absurd).certificate.pass);
}

TEST(HolderEuclidean, TwoDisksAndFittedExponent) {
  const FiniteMotion m = two_disk_motion();
  const double R = kLog3;
  const auto pairs = finite_pairs(m, {Complex(0.5), Complex(-0.3, 0.3), Complex(0.0, 0.45)});
  const HolderReport r = check_holder_euclidean(m, R, 3.0, pairs);
  EXPECT_TRUE(r.certificate.pass);
  EXPECT_GE(r.fitted_exponent, std::exp(-R) - 0.02);
  EXPECT_GT(r.exponent_band, 0.0);
  std::vector<HolderQuery> with_inf = {{0.1, 2, 3}};
  EXPECT_THROW(check_holder_euclidean(m, R, 3.0, with_inf), DomainError);
  EXPECT_THROW(check_holder_euclidean(m, R, 1.5, pairs), DomainError);
}

TEST(HolderEuclidean, DiskExponentIsSharp) {
  // At |z| = r the certified exponent is (1 - r)/(1 + r), and the power
  // motion attains it on pairs (w, 0).
  const double r = 0.5;
  const double R = kobayashi_disk(0.0, r);
  std::vector<Complex> ws;
  for (int k = 1; k <= 8; ++k) ws.push_back(std::pow(10.0, -k));
  const FiniteMotion p = power_motion(ws);
  std::vector<HolderQuery> q;
  const auto zero = *p.find(Complex{0.0});
  for (std::size_t k = 3; k < p.size(); ++k) q.push_back({Complex{r}, k, zero});
  const HolderReport rep = check_holder_euclidean(p, R, 1.0, q);
  EXPECT_NEAR(rep.alpha, (1 - r) / (1 + r), 1e-15);
  EXPECT_TRUE(rep.certificate.pass);
  EXPECT_NEAR(rep.fitted_exponent, rep.alpha, 1e-9);
}

TEST(HolderInvariance, RelabelingAndInversion) {
  const FiniteMotion m = power_motion({0.2, 3.0, Complex(0.5, 0.5)});
  const double R = 1.2;
  const auto q = holder_queries(m, R, 300, 17);
  const HolderReport base = check_holder_spherical(m, R, q);
  EXPECT_TRUE(base.certificate.pass);

  const std::vector<std::size_t> order = {5, 3, 0, 4, 2, 1};
  const FiniteMotion rel = relabel_motion(m, order);
  std::vector<std::size_t> where(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) where[order[k]] = k;
  std::vector<HolderQuery> q2;
  for (const auto& h : q) q2.push_back({h.z, where[h.first], where[h.second]});
  const HolderReport relabeled = check_holder_spherical(rel, R, q2);
  EXPECT_EQ(relabeled.certificate.worst_slack, base.certificate.worst_slack);

  const FiniteMotion inv = invert_motion(m);
  const HolderReport inverted = check_holder_spherical(inv, R, q);
  ASSERT_EQ(inverted.quotients.size(), base.quotients.size());
  for (std::size_t k = 0; k < q.size(); ++k) {
    EXPECT_NEAR(inverted.quotients[k], base.quotients[k], 1e-12 * base.quotients[k]);
  }
  EXPECT_NEAR(inverted.certificate.worst_slack, base.certificate.worst_slack, 1e-12);
}

TEST(MotionJson, RoundTrip) {
  const FiniteMotion m = two_disk_motion();
  const FiniteMotion back = motion_from_json(m.to_json());
  ASSERT_EQ(back.size(), m.size());
  for (std::size_t k = 0; k < m.size(); ++k) {
    const auto a = m(Complex(0.2, 0.1), k), b = back(Complex(0.2, 0.1), k);
    EXPECT_EQ(a.infinite, b.infinite);
    EXPECT_EQ(a.value, b.value);
  }
  auto bad = m.to_json();
  bad["labels"][0] = "nowhere";
  EXPECT_THROW(motion_from_json(bad), std::invalid_argument);
  bad = m.to_json();
  bad["tracks"][3] = AF::affine(1.0, 5.0).to_json();
  EXPECT_THROW(motion_from_json(bad), NormalizationError);
}
