#include <harnack/analytic_function.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace harnack;
using AF = AnalyticFunction;

TEST(AnalyticFunction, NodeEvaluation) {
  const Complex z{0.3, -0.2};
  EXPECT_EQ(AF::identity()(z), z);
  EXPECT_EQ(AF::constant({1, 2})(z), Complex(1, 2));
  EXPECT_EQ(AF::affine(2.0, 1.0)(z), 2.0 * z + 1.0);
  EXPECT_LT(std::abs(AF::exp(AF::identity())(z) - std::exp(z)), 1e-15);
  EXPECT_LT(std::abs(AF::log(AF::identity(), 1)(z) - (std::log(z) + Complex(0, 2 * std::numbers::pi))), 1e-15);
  EXPECT_LT(std::abs(AF::pow(AF::identity(), -3)(z) - 1.0 / (z * z * z)), 1e-12);
  EXPECT_LT(std::abs(AF::series({1.0, 2.0, 3.0}, 0.1, 1.0)(z) - (1.0 + 2.0 * (z - 0.1) + 3.0 * (z - 0.1) * (z - 0.1))), 1e-15);
  const AF f = AF::exp(AF::identity()) * AF::affine(1.0, 2.0) - AF::constant(1.0) / AF::identity();
  EXPECT_LT(std::abs(f(z) - (std::exp(z) * (z + 2.0) - 1.0 / z)), 1e-14);
  EXPECT_LT(std::abs(AF::exp(AF::identity()).compose(AF::affine(2.0, 0.0))(z) - std::exp(2.0 * z)), 1e-15);
}

TEST(AnalyticFunction, DomainErrors) {
  EXPECT_THROW(AF::log(AF::identity())(0.0), DomainError);
  EXPECT_THROW(AF::series({1.0}, 0.0, 0.5)(0.6), DomainError);
  EXPECT_THROW((AF::constant(1.0) / AF::identity())(0.0), SingularEvaluationError);
  EXPECT_THROW(AF::covering()(1.0), DomainError);
  EXPECT_THROW(AF::mobius(MobiusMap(1.0, 0.0, 1.0, -0.5))(0.5), SingularEvaluationError);
}

TEST(AnalyticFunction, RichardsonDerivative) {
  const AF f = AF::exp(AF::identity()) * AF::identity();
  for (Complex z : {Complex{0.0}, Complex{0.4, 0.3}, Complex{-0.7, 0.1}}) {
    const Complex exact = std::exp(z) * (1.0 + z);
    EXPECT_LT(std::abs(f.derivative(z) - exact), 1e-9 * std::abs(exact));
  }
}

TEST(AnalyticFunction, JsonRoundTrip) {
  const AF f = AF::log(AF::covering().compose(AF::mobius(MobiusMap::disk_translation({0.1, 0.2}))), -1) +
               AF::pow(AF::series({1.0, {0, 1}}, 0.0, 2.0), 2) / AF::affine(3.0, {0, 1}) - (-AF::constant(2.0));
  const AF g = AF::from_json(nlohmann::json::parse(f.to_json().dump()));
  for (Complex z : {Complex{0.1, 0.1}, Complex{-0.5, 0.2}}) EXPECT_EQ(f(z), g(z));
  EXPECT_EQ(f.describe(), g.describe());
  EXPECT_THROW(AF::from_json(nlohmann::json{{"op", "sin"}}), std::invalid_argument);
}
