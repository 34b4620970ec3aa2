#include <harnack/analytic_function.hpp>
#include <harnack/modular.hpp>

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace harnack {

struct AnalyticFunction::Node {
  Kind kind = Kind::identity;
  Complex a{}, b{};                 // constant / affine coefficients, series center
  MobiusMap mobius;
  int n = 0;                        // log branch or power
  double radius = 0.0;              // series radius
  std::vector<Complex> coeffs;
  std::shared_ptr<const Node> lhs;  // unary argument, outer function or left operand
  std::shared_ptr<const Node> rhs;  // inner function or right operand
};

AnalyticFunction::AnalyticFunction() : node_(std::make_shared<Node>()) {}

AnalyticFunction::AnalyticFunction(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

AnalyticFunction AnalyticFunction::constant(Complex c) {
  require_finite(c, "AnalyticFunction::constant");
  auto n = std::make_shared<Node>();
  n->kind = Kind::constant;
  n->a = c;
  return AnalyticFunction(n);
}

AnalyticFunction AnalyticFunction::identity() { return AnalyticFunction(); }

AnalyticFunction AnalyticFunction::affine(Complex a, Complex b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::affine;
  n->a = a;
  n->b = b;
  return AnalyticFunction(n);
}

AnalyticFunction AnalyticFunction::mobius(const MobiusMap& m) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::mobius;
  n->mobius = m;
  return AnalyticFunction(n);
}

AnalyticFunction AnalyticFunction::exp(const AnalyticFunction& f) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::exp;
  n->lhs = f.node_;
  return AnalyticFunction(n);
}

AnalyticFunction AnalyticFunction::log(const AnalyticFunction& f, int branch) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::log;
  n->lhs = f.node_;
  n->n = branch;
  return AnalyticFunction(n);
}

AnalyticFunction AnalyticFunction::series(std::vector<Complex> coeffs, Complex center, double radius) {
  if (coeffs.empty()) throw DomainError("AnalyticFunction::series: no coefficients");
  if (!(radius > 0.0)) throw DomainError("AnalyticFunction::series: radius must be positive");
  auto n = std::make_shared<Node>();
  n->kind = Kind::series;
  n->coeffs = std::move(coeffs);
  n->a = center;
  n->radius = radius;
  return AnalyticFunction(n);
}

AnalyticFunction AnalyticFunction::covering() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::covering;
  return AnalyticFunction(n);
}

AnalyticFunction AnalyticFunction::pow(const AnalyticFunction& f, int power) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::pow;
  n->lhs = f.node_;
  n->n = power;
  return AnalyticFunction(n);
}

AnalyticFunction AnalyticFunction::compose(const AnalyticFunction& inner) const {
  auto n = std::make_shared<Node>();
  n->kind = Kind::compose;
  n->lhs = node_;
  n->rhs = inner.node_;
  return AnalyticFunction(n);
}

namespace {

template <class N>
std::shared_ptr<N> binary(AnalyticFunction::Kind k, std::shared_ptr<const N> l, std::shared_ptr<const N> r) {
  auto n = std::make_shared<N>();
  n->kind = k;
  n->lhs = std::move(l);
  n->rhs = std::move(r);
  return n;
}

}  // namespace

AnalyticFunction operator+(const AnalyticFunction& f, const AnalyticFunction& g) {
  return AnalyticFunction(binary(AnalyticFunction::Kind::add, f.node_, g.node_));
}
AnalyticFunction operator-(const AnalyticFunction& f, const AnalyticFunction& g) {
  return AnalyticFunction(binary(AnalyticFunction::Kind::sub, f.node_, g.node_));
}
AnalyticFunction operator*(const AnalyticFunction& f, const AnalyticFunction& g) {
  return AnalyticFunction(binary(AnalyticFunction::Kind::mul, f.node_, g.node_));
}
AnalyticFunction operator/(const AnalyticFunction& f, const AnalyticFunction& g) {
  return AnalyticFunction(binary(AnalyticFunction::Kind::div, f.node_, g.node_));
}
AnalyticFunction operator-(const AnalyticFunction& f) {
  auto n = std::make_shared<AnalyticFunction::Node>();
  n->kind = AnalyticFunction::Kind::neg;
  n->lhs = f.node_;
  return AnalyticFunction(n);
}

AnalyticFunction::Kind AnalyticFunction::kind() const { return node_->kind; }

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

Complex AnalyticFunction::operator()(Complex z) const {
  const Node& n = *node_;
  auto sub = [](const std::shared_ptr<const Node>& p, Complex w) { return AnalyticFunction(p)(w); };
  switch (n.kind) {
    case Kind::constant: return n.a;
    case Kind::identity: return z;
    case Kind::affine: return n.a * z + n.b;
    case Kind::mobius: return n.mobius(z);
    case Kind::exp: return std::exp(sub(n.lhs, z));
    case Kind::log: {
      const Complex v = sub(n.lhs, z);
      if (v == Complex{}) throw DomainError("AnalyticFunction: log of zero");
      return std::log(v) + Complex{0.0, kTwoPi * n.n};
    }
    case Kind::series: {
      const Complex d = z - n.a;
      if (!(std::abs(d) < n.radius)) throw DomainError("AnalyticFunction: series outside its disk");
      Complex acc{};
      for (auto it = n.coeffs.rbegin(); it != n.coeffs.rend(); ++it) acc = acc * d + *it;
      return acc;
    }
    case Kind::compose: return sub(n.lhs, sub(n.rhs, z));
    case Kind::add: return sub(n.lhs, z) + sub(n.rhs, z);
    case Kind::sub: return sub(n.lhs, z) - sub(n.rhs, z);
    case Kind::mul: return sub(n.lhs, z) * sub(n.rhs, z);
    case Kind::div: {
      const Complex den = sub(n.rhs, z);
      if (den == Complex{}) throw SingularEvaluationError("AnalyticFunction: division by zero");
      return sub(n.lhs, z) / den;
    }
    case Kind::neg: return -sub(n.lhs, z);
    case Kind::pow: {
      const Complex v = sub(n.lhs, z);
      if (n.n < 0 && v == Complex{}) throw SingularEvaluationError("AnalyticFunction: pole of a negative power");
      Complex acc{1.0};
      Complex base = n.n < 0 ? 1.0 / v : v;
      for (int e = std::abs(n.n); e > 0; e >>= 1) {
        if (e & 1) acc *= base;
        base *= base;
      }
      return acc;
    }
    case Kind::covering: return modular::covering(z);
  }
  throw InternalError("AnalyticFunction: unknown node kind");
}

Complex AnalyticFunction::derivative(Complex z, double step) const {
  if (!(step > 0.0)) throw DomainError("AnalyticFunction::derivative: step must be positive");
  auto central = [&](double h) { return ((*this)(z + h) - (*this)(z - h)) / (2.0 * h); };
  return (4.0 * central(0.5 * step) - central(step)) / 3.0;
}

namespace {

const char* kind_name(AnalyticFunction::Kind k) {
  using K = AnalyticFunction::Kind;
  switch (k) {
    case K::constant: return "constant";
    case K::identity: return "identity";
    case K::affine: return "affine";
    case K::mobius: return "mobius";
    case K::exp: return "exp";
    case K::log: return "log";
    case K::series: return "series";
    case K::compose: return "compose";
    case K::add: return "add";
    case K::sub: return "sub";
    case K::mul: return "mul";
    case K::div: return "div";
    case K::neg: return "neg";
    case K::pow: return "pow";
    case K::covering: return "covering";
  }
  return "?";
}

AnalyticFunction::Kind kind_from_name(const std::string& s) {
  using K = AnalyticFunction::Kind;
  for (K k : {K::constant, K::identity, K::affine, K::mobius, K::exp, K::log, K::series, K::compose,
              K::add, K::sub, K::mul, K::div, K::neg, K::pow, K::covering}) {
    if (s == kind_name(k)) return k;
  }
  throw std::invalid_argument("AnalyticFunction: unknown node kind '" + s + "'");
}

nlohmann::json cjson(Complex c) { return nlohmann::json::array({c.real(), c.imag()}); }

Complex from_cjson(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("complex value must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

nlohmann::json AnalyticFunction::to_json() const {
  const Node& n = *node_;
  nlohmann::json j;
  j["op"] = kind_name(n.kind);
  auto child = [](const std::shared_ptr<const Node>& p) { return AnalyticFunction(p).to_json(); };
  switch (n.kind) {
    case Kind::constant: j["value"] = cjson(n.a); break;
    case Kind::identity: break;
    case Kind::affine: j["a"] = cjson(n.a); j["b"] = cjson(n.b); break;
    case Kind::mobius:
      j["coefficients"] = {cjson(n.mobius.a), cjson(n.mobius.b), cjson(n.mobius.c), cjson(n.mobius.d)};
      break;
    case Kind::exp: case Kind::neg: j["arg"] = child(n.lhs); break;
    case Kind::log: j["arg"] = child(n.lhs); j["branch"] = n.n; break;
    case Kind::pow: j["arg"] = child(n.lhs); j["power"] = n.n; break;
    case Kind::series:
      j["center"] = cjson(n.a);
      j["radius"] = n.radius;
      j["coefficients"] = nlohmann::json::array();
      for (const Complex& c : n.coeffs) j["coefficients"].push_back(cjson(c));
      break;
    case Kind::compose: j["outer"] = child(n.lhs); j["inner"] = child(n.rhs); break;
    case Kind::add: case Kind::sub: case Kind::mul: case Kind::div:
      j["lhs"] = child(n.lhs);
      j["rhs"] = child(n.rhs);
      break;
    case Kind::covering: break;
  }
  return j;
}

AnalyticFunction AnalyticFunction::from_json(const nlohmann::json& j) {
  const Kind k = kind_from_name(j.at("op").get<std::string>());
  switch (k) {
    case Kind::constant: return constant(from_cjson(j.at("value")));
    case Kind::identity: return identity();
    case Kind::affine: return affine(from_cjson(j.at("a")), from_cjson(j.at("b")));
    case Kind::mobius: {
      const auto& c = j.at("coefficients");
      return mobius(MobiusMap(from_cjson(c.at(0)), from_cjson(c.at(1)), from_cjson(c.at(2)),
                              from_cjson(c.at(3))));
    }
    case Kind::exp: return exp(from_json(j.at("arg")));
    case Kind::neg: return -from_json(j.at("arg"));
    case Kind::log: return log(from_json(j.at("arg")), j.value("branch", 0));
    case Kind::pow: return pow(from_json(j.at("arg")), j.at("power").get<int>());
    case Kind::series: {
      std::vector<Complex> coeffs;
      for (const auto& c : j.at("coefficients")) coeffs.push_back(from_cjson(c));
      return series(std::move(coeffs), from_cjson(j.at("center")), j.at("radius").get<double>());
    }
    case Kind::compose: return from_json(j.at("outer")).compose(from_json(j.at("inner")));
    case Kind::add: return from_json(j.at("lhs")) + from_json(j.at("rhs"));
    case Kind::sub: return from_json(j.at("lhs")) - from_json(j.at("rhs"));
    case Kind::mul: return from_json(j.at("lhs")) * from_json(j.at("rhs"));
    case Kind::div: return from_json(j.at("lhs")) / from_json(j.at("rhs"));
    case Kind::covering: return covering();
  }
  throw InternalError("AnalyticFunction::from_json: unknown node kind");
}

std::string AnalyticFunction::describe() const { return to_json().dump(); }

}  // namespace harnack
