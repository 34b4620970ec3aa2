#include <harnack/dbar.hpp>
#include <harnack/rng.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

using namespace harnack;

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

// (1 - |z|^2)^3 on the unit disk; its transform is (1 - (1 - |z|^2)^4) / (4z).
GridField bump(GridRegion r, std::uint32_t n) {
  return GridField::sample(r, n, n, [](Complex z) {
    const double s = std::norm(z);
    return s < 1.0 ? Complex(std::pow(1.0 - s, 3)) : Complex{};
  });
}

Complex bump_transform(Complex z) {
  const double s = std::norm(z);
  if (s == 0.0) return {};
  return (s < 1.0 ? 1.0 - std::pow(1.0 - s, 4) : 1.0) / (4.0 * z);
}

double max_node_error(const GridField& f, const std::function<Complex(Complex)>& exact) {
  double err = 0.0;
  for (std::uint32_t j = 0; j < f.ny(); ++j)
    for (std::uint32_t i = 0; i < f.nx(); ++i) err = std::max(err, std::abs(f.at(i, j) - exact(f.node(i, j))));
  return err;
}

double interior_residual(const GridField& a) {
  const GridField d = dbar(cauchy_transform(a));
  double worst = 0.0;
  for (std::uint32_t j = 1; j + 1 < a.ny(); ++j)
    for (std::uint32_t i = 1; i + 1 < a.nx(); ++i) worst = std::max(worst, std::abs(d.at(i, j) - a.at(i, j)));
  return worst;
}

const GridRegion kSquare2{-2, 2, -2, 2};
const GridRegion kSquare3{-3, 3, -3, 3};

LogLipschitzWitness plane_witness() {
  return make_indicator_witness(0.3, 0.0, 1.0, 3.0, std::exp(1.0), WitnessDomain::plane, kSquare3, 241);
}

std::vector<Complex> points_in_disk(double radius, int n) {
  std::vector<Complex> pts;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) {
      const Complex z(-radius + 2.0 * radius * i / n, -radius + 2.0 * radius * j / n);
      if (std::abs(z) <= radius) pts.push_back(z);
    }
  return pts;
}

}  // namespace

TEST(GridFieldTest, RejectsBadGeometry) {
  EXPECT_THROW(GridField(GridRegion{-1, 1, -1, 1}, 9, 17), DomainError);
  EXPECT_THROW(GridField(GridRegion{1, -1, -1, 1}, 9, 9), DomainError);
  EXPECT_THROW(GridField(kSquare2, 1, 9), DomainError);
  EXPECT_THROW(GridField::sample(kSquare2, 5, 5, [](Complex) { return Complex(NAN, 0); }), DomainError);
  GridField g(GridRegion{-1, 3, 0, 2}, 9, 5);
  EXPECT_DOUBLE_EQ(g.h(), 0.5);
}

TEST(GridFieldTest, InterpolationIsExactForAffineFields) {
  auto g = GridField::sample(kSquare2, 17, 17, [](Complex z) { return 2.0 * z + 3.0 * std::conj(z) - kI; });
  for (Complex z : {Complex(0.13, -1.7), Complex(1.99, 1.99), Complex(-2, 0.4)})
    EXPECT_LT(std::abs(g.interpolate(z) - (2.0 * z + 3.0 * std::conj(z) - kI)), 1e-13);
  EXPECT_THROW(g.interpolate(Complex(2.1, 0)), DomainError);
}

TEST(GridFieldTest, FileRoundTripKeepsKindAndValues) {
  const auto dir = std::filesystem::temp_directory_path() / "harnack_dbar_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "field.bin";
  auto g = GridField::sample(kSquare2, 33, 33, [](Complex z) { return std::exp(z) / 3.0; });
  g.write(path, 5);
  std::uint8_t kind = 0;
  const GridField back = GridField::read(path, &kind);
  EXPECT_EQ(kind, 5);
  EXPECT_EQ(back.region(), g.region());
  EXPECT_EQ(back.values(), g.values());
  EXPECT_THROW(g.write(path, 16), DomainError);

  // A density grid is not a complex field.
  GridFile density;
  density.header = {kSquare2, 3, 3, grid_tag::kDensity, 0.0};
  density.planes = {std::vector<double>(9, 1.0)};
  write_grid_file(dir / "density.bin", density);
  EXPECT_THROW(GridField::read(dir / "density.bin"), DataIntegrityError);
  std::filesystem::remove_all(dir);
}

TEST(CauchyTransform, ZeroFieldGivesZero) {
  const GridField z(kSquare2, 33, 33);
  const GridField t = cauchy_transform(z);
  EXPECT_EQ(t.max_abs(), 0.0);
  EXPECT_EQ(cauchy_transform(z, false, TransformMethod::direct).max_abs(), 0.0);
}

TEST(CauchyTransform, IndicatorMatchesClosedForm) {
  for (std::uint32_t n : {129u, 257u}) {
    const GridField a = disk_indicator_field(kSquare2, n, 0.0, 1.0, 1.0);
    const GridField t = cauchy_transform(a);
    const double h = a.h();
    const double err = max_node_error(t, [](Complex z) { return disk_indicator_transform(z, 0.0, 1.0); });
    EXPECT_LE(err, 5 * h) << "n=" << n;
    RecordProperty("indicator_error_over_h_" + std::to_string(n), std::to_string(err / h));
  }
}

TEST(CauchyTransform, ProbePointsAgreeWithDirectSum) {
  const GridField a = disk_indicator_field(kSquare2, 129, 0.0, 1.0, 1.0);
  const GridField t = cauchy_transform(a);
  Rng rng(11, 0);
  for (int k = 0; k < 20; ++k) {
    const auto i = static_cast<std::uint32_t>(rng.integer(0, 128));
    const auto j = static_cast<std::uint32_t>(rng.integer(0, 128));
    const Complex z = a.node(i, j);
    const Complex direct = cauchy_transform_at(a, z);
    EXPECT_LT(std::abs(direct - t.at(i, j)), 1e-12) << z;
    EXPECT_LE(std::abs(direct - disk_indicator_transform(z, 0.0, 1.0)), 5 * a.h()) << z;
  }
  // Off-node probes against the closed form.
  for (int k = 0; k < 20; ++k) {
    const Complex z(rng.uniform(-1.9, 1.9), rng.uniform(-1.9, 1.9));
    EXPECT_LE(std::abs(cauchy_transform_at(a, z) - disk_indicator_transform(z, 0.0, 1.0)), 5 * a.h()) << z;
  }
}

TEST(CauchyTransform, FftAndDirectRoutesAgree) {
  Rng rng(3, 1);
  auto a = GridField::sample(GridRegion{-1, 1, -0.5, 1}, 33, 25, [&](Complex z) {
    return std::abs(z) < 0.8 ? Complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) : Complex{};
  });
  for (bool normalize : {false, true}) {
    const GridField f = cauchy_transform(a, normalize, TransformMethod::fft);
    const GridField d = cauchy_transform(a, normalize, TransformMethod::direct);
    double diff = 0.0;
    for (std::size_t k = 0; k < f.values().size(); ++k) diff = std::max(diff, std::abs(f.values()[k] - d.values()[k]));
    EXPECT_LT(diff, 1e-12 * std::max(1.0, d.max_abs()));
  }
}

TEST(CauchyTransform, NormalizedValueAtZeroVanishes) {
  Rng rng(5, 2);
  auto a = GridField::sample(kSquare2, 41, 41, [&](Complex z) {
    return std::abs(z) < 1.5 ? Complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) : Complex{};
  });
  const GridField t = cauchy_transform(a);
  const auto zero = a.node_index(0.0);
  ASSERT_TRUE(zero);
  EXPECT_EQ(t.at(zero->first, zero->second), Complex{});
  // Off-lattice origin: the direct route subtracts its own value at 0.
  auto b = GridField::sample(GridRegion{-1.03, 0.97, -0.91, 1.09}, 21, 21, [](Complex z) {
    return std::abs(z) < 0.7 ? Complex(1.0 + z.real(), 0) : Complex{};
  });
  EXPECT_FALSE(b.node_index(0.0));
  EXPECT_LT(std::abs(cauchy_transform_at(b, 0.0)), 1e-15);
}

TEST(CauchyTransform, DbarInvertsTransformAtFirstOrder) {
  double previous = 0.0;
  for (std::uint32_t n : {65u, 129u, 257u}) {
    const GridField a = bump(kSquare2, n);
    const double res = interior_residual(a);
    EXPECT_LE(res, 5 * a.h() * a.max_abs()) << "n=" << n;
    if (previous > 0.0) {
      EXPECT_LE(res, 0.5 * previous) << "n=" << n;
    }
    previous = res;
    EXPECT_LE(max_node_error(cauchy_transform(a), bump_transform), a.h()) << "n=" << n;
  }
}

TEST(Schwarz, ZeroDataGivesZero) {
  const SchwarzIntegral h(std::vector<double>(64, 0.0));
  EXPECT_EQ(h(Complex(0.3, 0.2)), Complex{});
}

TEST(Schwarz, ReproducesLinearFunctions) {
  const std::size_t n = 4096;
  std::vector<double> s(n), c(n);
  for (std::size_t k = 0; k < n; ++k) {
    s[k] = std::sin(2 * kPi * k / n);
    c[k] = std::cos(2 * kPi * k / n);
  }
  const SchwarzIntegral hs(s), hc(c);
  const GridField gs = hs.on_grid(GridRegion{-1, 1, -1, 1}, 41, 0.9);
  double err_s = 0.0, err_c = 0.0;
  for (std::uint32_t j = 0; j < gs.ny(); ++j)
    for (std::uint32_t i = 0; i < gs.nx(); ++i) {
      const Complex z = gs.node(i, j);
      if (std::abs(z) > 0.9) continue;
      err_s = std::max(err_s, std::abs(gs.at(i, j) - z));
      err_c = std::max(err_c, std::abs(hc(z) - kI * z));
    }
  EXPECT_LE(err_s, 1e-10);
  EXPECT_LE(err_c, 1e-10);
}

TEST(Schwarz, HolomorphicWithVanishingRealPartAtZero) {
  const std::size_t n = 4096;
  Rng rng(9, 0);
  std::vector<double> data(n);
  double coef[6];
  for (double& c : coef) c = rng.uniform(-1, 1);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = 2 * kPi * k / n;
    data[k] = coef[0] + coef[1] * std::sin(t) + coef[2] * std::cos(2 * t) + coef[3] * std::sin(5 * t) +
              coef[4] / (1.2 - std::cos(t)) + coef[5] * std::exp(std::sin(3 * t));
  }
  const SchwarzIntegral h(data);
  EXPECT_LT(std::abs(h(0.0).real()), 1e-14);
  EXPECT_LE(cauchy_riemann_residual(h, GridRegion{-1, 1, -1, 1}, 33, 0.9), 1e-8);
}

TEST(Schwarz, RecoversKnownHolomorphicFunction) {
  // H = e^z + i/(3 - z) - 1 has Re H(0) = 0.
  auto H = [](Complex z) { return std::exp(z) + kI / (3.0 - z) - 1.0; };
  const std::size_t n = 4096;
  std::vector<double> data(n);
  for (std::size_t k = 0; k < n; ++k) data[k] = H(std::polar(1.0, 2 * kPi * k / n)).imag();
  ASSERT_NEAR(H(0.0).real(), 0.0, 1e-15);
  const SchwarzIntegral h(data);
  for (double r : {0.0, 0.5, 0.9})
    for (int k = 0; k < 12; ++k) {
      const Complex z = std::polar(r, 2 * kPi * k / 12 + 0.3);
      EXPECT_LT(std::abs(h(z) - H(z)), 1e-10) << z;
    }
}

TEST(Schwarz, BoundedDataObeysGrowthBound) {
  const std::size_t n = 2048;
  Rng rng(21, 0);
  std::vector<double> data(n);
  const double B = 1.7;
  for (double& v : data) v = rng.uniform(-B, B);
  const SchwarzIntegral h(data);
  for (double r : {0.0, 0.3, 0.6, 0.9})
    for (int k = 0; k < 16; ++k) {
      const Complex z = std::polar(r, 2 * kPi * k / 16 + 0.1);
      EXPECT_LE(std::abs(h(z).real()), 2 * B / (1 - r)) << z;
    }
}

TEST(Schwarz, RejectsBadInput) {
  std::vector<double> d(64, 0.0);
  d[3] = NAN;
  EXPECT_THROW(SchwarzIntegral{d}, DomainError);
  EXPECT_THROW(SchwarzIntegral(std::vector<double>(4, 0.0)), DomainError);
  const SchwarzIntegral ok(std::vector<double>(64, 1.0));
  EXPECT_THROW(ok(1.0), DomainError);
}

TEST(Constants, PublishedValues) {
  // q = 4/3: c0 = (2/pi) (3 pi)^{3/4}.
  EXPECT_NEAR(c0_constant(4.0), 2.0 / kPi * std::pow(3 * kPi, 0.75), 1e-14);
  EXPECT_GT(c0_constant(2.01), c0_constant(4.0));
  EXPECT_THROW(c0_constant(2.0), DomainError);
  EXPECT_NEAR(prop5_constant(4.0, 0.0), kPi, 1e-15);
  // p = 4, p' = 3/2: q' = 3, far term (2 pi)^{1/3}.
  EXPECT_NEAR(c1_constant(4.0, 1.5),
              4.0 / kPi * std::max(std::pow(3 * kPi, 0.75), std::pow(2 * kPi, 1.0 / 3.0)), 1e-14);
  EXPECT_THROW(c1_constant(4.0, 2.0), DomainError);
}

TEST(Witness, ZeroCoefficientIsConstant) {
  const LogLipschitzWitness w = make_witness(GridField(kSquare2, 33, 33), 3.0, 2.0, WitnessDomain::plane);
  for (Complex z : {Complex(0.5), Complex(-1, 1.5)}) EXPECT_EQ(w.f(z), 2.0 * std::exp(-3.0));
  const std::vector<Complex> pts{0.5, Complex(1, 1)};
  const Certificate c = check_prop6(w, pts);
  EXPECT_TRUE(c.pass);
  EXPECT_EQ(c.details.at("C"), 1.0);
  EXPECT_EQ(c.details.at("max_ratio"), 1.0);
}

TEST(Witness, IndicatorPlaneWitnessClosedForm) {
  const LogLipschitzWitness w = plane_witness();
  EXPECT_EQ(w.ahat_at(0.0), Complex{});
  EXPECT_NEAR(std::abs(w.g(0.5)) / std::abs(w.g(0.0)), std::exp(0.15), 1e-14);
  EXPECT_NEAR(std::exp(0.15), 1.1618, 1e-4);
  const Complex z(0.3, -0.4), zo(1.5, 0.7);
  EXPECT_LT(std::abs(w.ahat_at(z) - 0.3 * std::conj(z)), 1e-15);
  EXPECT_LT(std::abs(w.ahat_at(zo) - 0.3 / zo), 1e-15);

  // Exact identity |f_zbar| = |a| |f| |log M/f| at the nodes.
  for (std::uint32_t j = 0; j < w.a.ny(); j += 7)
    for (std::uint32_t i = 0; i < w.a.nx(); i += 7) {
      const Complex q = w.a.node(i, j);
      const Complex logMf = std::log(w.M / w.f(q));
      ASSERT_LT(std::abs(logMf - w.g(q)), 1e-12);
      EXPECT_NEAR(w.dbar_f_abs(q), std::abs(w.a.at(i, j)) * std::abs(w.f(q)) * std::abs(logMf),
                  1e-13 * std::abs(w.f(q)));
    }

  // The FFT route reproduces the closed form.
  const LogLipschitzWitness numeric = make_witness(w.a, 3.0, std::exp(1.0), WitnessDomain::plane);
  EXPECT_LE(max_node_error(numeric.ahat, [&](Complex q) { return w.ahat_at(q); }), 5 * 0.3 * w.a.h());
  EXPECT_NEAR(numeric.norm_p, w.norm_p, 1e-12);
  // ||0.3 1_D||_p = 0.3 pi^{1/p}, up to the cell coverage quadrature.
  EXPECT_NEAR(w.norm_p, 0.3 * std::pow(kPi, 0.25), 3e-3);
}

TEST(Witness, DiskWitnessAuditsHypotheses) {
  const GridRegion unit{-1, 1, -1, 1};
  const auto w = make_indicator_witness(0.3, 0.0, 1.0, 3.0, 1.0, WitnessDomain::disk, unit, 201);
  for (Complex z : {Complex(-0.99, 0), Complex(0, 0.9), Complex(0.5, 0.5)}) {
    EXPECT_GT(w.g(z).real(), 1.0);
    EXPECT_LT(std::abs(w.f(z)), std::exp(-1.0));
  }
  EXPECT_GT(w.norm_p, 0.0);
  // Re g = 1.05 e^{x} cos y drops below 1 near x = -1.
  EXPECT_THROW(make_indicator_witness(1.0, 0.0, 1.0, 1.05, 1.0, WitnessDomain::disk, unit, 101), HypothesisError);
  // Support must stay inside the disk.
  EXPECT_THROW(make_indicator_witness(0.3, 0.0, 1.2, 3.0, 1.0, WitnessDomain::disk, GridRegion{-2, 2, -2, 2}, 101),
               HypothesisError);
  EXPECT_THROW(make_indicator_witness(0.3, 0.0, 0.5, 3.0, 2.0, WitnessDomain::disk, unit, 101), DomainError);
  EXPECT_THROW(make_indicator_witness(0.3, 0.0, 0.5, 1.0, 1.0, WitnessDomain::disk, unit, 101), DomainError);
  EXPECT_THROW(make_indicator_witness(0.3, 0.0, 0.5, 3.0, 0.5, WitnessDomain::plane, unit, 101), DomainError);
  EXPECT_THROW(make_indicator_witness(0.3, 0.0, 0.5, 3.0, 1.0, WitnessDomain::plane, unit, 101, 2.0), DomainError);
}

TEST(Witness, PlaneWitnessAuditsHypotheses) {
  // Support touching the grid boundary is not compact.
  EXPECT_THROW(make_indicator_witness(0.3, 0.0, 2.5, 3.0, 1.0, WitnessDomain::plane, kSquare2, 65), HypothesisError);
  // |f| < 1 fails when log M exceeds Re g somewhere.
  EXPECT_THROW(make_indicator_witness(0.3, 0.0, 1.0, 3.0, std::exp(2.5), WitnessDomain::plane, kSquare2, 65),
               HypothesisError);
}

TEST(Prop5, ZeroCoefficientAndIndicatorWitness) {
  const GridRegion unit{-1, 1, -1, 1};
  const auto zero = make_witness(GridField(unit, 33, 33), 3.0, 1.0, WitnessDomain::disk);
  const std::vector<Complex> pts{0.5, Complex(0, -0.9), Complex(0.3, 0.3)};
  const Certificate c0 = check_prop5(zero, pts);
  EXPECT_TRUE(c0.pass);
  EXPECT_NEAR(c0.details.at("max_abs_log_ratio"), 0.0, 1e-15);

  const auto w = make_indicator_witness(0.3, 0.0, 1.0, 3.0, 1.0, WitnessDomain::disk, unit, 201);
  const std::vector<Complex> half{0.5};
  const Certificate c = check_prop5(w, half);
  EXPECT_TRUE(c.pass);
  EXPECT_NEAR(c.details.at("c"), prop5_constant(4.0, w.norm_p), 1e-14);
  EXPECT_GT(c.worst_slack, 0.0);
  const Certificate many = check_prop5(w, points_in_disk(0.95, 24));
  EXPECT_TRUE(many.pass);

  // Negative control: shrink the envelope below the observed ratio.
  CheckOptions tight;
  tight.bound_scale = std::exp(-2.0 * c.details.at("c") / 0.5);
  EXPECT_FALSE(check_prop5(w, half, tight).pass);
  EXPECT_THROW(check_prop5(w, std::vector<Complex>{1.0}), DomainError);
  EXPECT_THROW(check_prop5(plane_witness(), half), DomainError);
}

TEST(Prop5, EnvelopeWidensTowardTheCircle) {
  const double c = prop5_constant(4.0, 0.4);
  double last_upper = 0.0, last_lower = 0.0;
  for (double r = 0.0; r < 0.999; r += 0.05) {
    const double upper = c / (1 - r), lower = c / std::pow(1 - r, 1.5);
    EXPECT_GT(upper, last_upper);
    EXPECT_GT(lower, last_lower);
    last_upper = upper;
    last_lower = lower;
  }
}

TEST(Prop6, IndicatorWitnessMaxRatio) {
  const LogLipschitzWitness w = plane_witness();
  const Certificate c = check_prop6(w, points_in_disk(2.0, 80));
  EXPECT_TRUE(c.pass);
  EXPECT_NEAR(c.details.at("max_ratio"), std::exp(0.3), 1e-3);
  EXPECT_NEAR(c.details.at("min_ratio"), std::exp(-0.3), 1e-3);
  EXPECT_NEAR(c.details.at("C_right"), std::exp(0.3), 1e-12);
  EXPECT_NEAR(c.details.at("C"), std::exp(0.6), 1e-12);
  EXPECT_LE(c.details.at("C"), c.details.at("c1_bound"));

  // Negative control: the right inequality is tight at z = 1.
  CheckOptions tight;
  tight.bound_scale = 0.99;
  EXPECT_FALSE(check_prop6(w, points_in_disk(2.0, 80), tight).pass);
}

TEST(Prop6, ShiftedWitnessHasTheSameConstant) {
  const LogLipschitzWitness w = plane_witness();
  // f_s(z) = f(z + 5): the coefficient moves to the disk about -5.
  const auto s = make_indicator_witness(0.3, -5.0, 1.0, w.g(5.0), w.M, WitnessDomain::plane,
                                        GridRegion{-8, 3, -3, 3}, 441);
  for (Complex z : {Complex(0.0), Complex(1, 1), Complex(-5.5, 0.2)}) EXPECT_LT(std::abs(s.f(z) - w.f(z + 5.0)), 1e-13);
  const auto pts = points_in_disk(2.0, 40);
  const Certificate a = check_prop6(w, pts), b = check_prop6(s, pts);
  EXPECT_TRUE(a.pass);
  EXPECT_TRUE(b.pass);
  EXPECT_NEAR(a.details.at("C"), b.details.at("C"), 1e-3);
}

TEST(Prop6, NumericalWitnessStaysUnderPublishedBound) {
  const GridField a = bump(kSquare3, 193);
  for (double scale : {0.1, 0.4}) {
    GridField sa = a;
    for (Complex& v : sa.values()) v *= Complex(scale, 0.5 * scale);
    const auto w = make_witness(sa, 3.0, 1.5, WitnessDomain::plane);
    const Certificate c = check_prop6(w, points_in_disk(2.5, 30));
    EXPECT_TRUE(c.pass);
    EXPECT_LE(c.details.at("C"), c.details.at("c1_bound"));
    EXPECT_GE(c.details.at("C"), c.details.at("max_ratio"));
  }
}

TEST(Prop6Corollaries, ConstantAndIndicatorWitnesses) {
  const auto constant = make_witness(GridField(kSquare2, 17, 17), 3.0, 2.0, WitnessDomain::plane);
  const Certificate c0 = check_prop6_corollaries(constant);
  EXPECT_TRUE(c0.pass);
  EXPECT_EQ(c0.details.at("C"), 1.0);
  EXPECT_EQ(c0.details.at("C2"), 1.0);
  EXPECT_EQ(c0.details.at("inf_f"), c0.details.at("sup_f"));

  const Certificate c = check_prop6_corollaries(plane_witness());
  EXPECT_TRUE(c.pass);
  EXPECT_GT(c.details.at("inf_f"), 0.0);
  // Cor. 3: sup|e^{a_hat}| / inf|e^{a_hat}| = e^{2 sup |Re a_hat|} = e^{0.6}.
  EXPECT_NEAR(c.details.at("cor3_ratio"), std::exp(0.6), 1e-4);
  EXPECT_LE(c.details.at("cor3_ratio"), c.details.at("cor3_bound"));
  // sup|f| <= (inf|f|)^{1/C2} in the scaled form |f|/M.
  const double M = std::exp(1.0);
  EXPECT_LE(std::log(c.details.at("sup_f") / M), std::log(c.details.at("inf_f") / M) / c.details.at("C2"));
}
