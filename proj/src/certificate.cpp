#include <harnack/certificate.hpp>

#include <cmath>
#include <stdexcept>

namespace harnack {

Certificate::Certificate(std::string id, std::uint64_t seed_, double tolerance)
    : inequality(std::move(id)), seed(seed_) {
  tolerances["slack"] = tolerance;
}

double Certificate::tolerance() const {
  auto it = tolerances.find("slack");
  return it == tolerances.end() ? 0.0 : it->second;
}

void Certificate::record(double slack, const std::vector<double>& witness_point) {
  record_many(slack, witness_point, 1);
}

void Certificate::record_many(double slack, const std::vector<double>& witness_point,
                              std::uint64_t count) {
  samples += count;
  // NaN slacks are failures, never silently dropped.
  if (std::isnan(slack) || slack < worst_slack) {
    worst_slack = std::isnan(slack) ? -std::numeric_limits<double>::infinity() : slack;
    witness = witness_point;
  }
  finalize();
}

void Certificate::finalize() { pass = samples == 0 || worst_slack >= -tolerance(); }

namespace {

nlohmann::json number_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

nlohmann::json Certificate::to_json() const {
  nlohmann::json j;
  j["inequality"] = inequality;
  j["samples"] = samples;
  j["seed"] = seed;
  j["worst_slack"] = number_or_null(worst_slack);
  j["witness"] = nlohmann::json::array();
  for (double w : witness) j["witness"].push_back(number_or_null(w));
  j["pass"] = pass;
  j["tolerances"] = nlohmann::json::object();
  for (const auto& [k, v] : tolerances) j["tolerances"][k] = number_or_null(v);
  if (!details.empty()) {
    j["details"] = nlohmann::json::object();
    for (const auto& [k, v] : details) j["details"][k] = number_or_null(v);
  }
  return j;
}

Certificate Certificate::from_json(const nlohmann::json& j) {
  Certificate c;
  c.inequality = j.at("inequality").get<std::string>();
  c.samples = j.at("samples").get<std::uint64_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  const auto& ws = j.at("worst_slack");
  c.worst_slack = ws.is_null() ? std::numeric_limits<double>::infinity() : ws.get<double>();
  for (const auto& w : j.at("witness")) {
    c.witness.push_back(w.is_null() ? std::numeric_limits<double>::quiet_NaN() : w.get<double>());
  }
  c.pass = j.at("pass").get<bool>();
  for (const auto& [k, v] : j.at("tolerances").items()) c.tolerances[k] = v.get<double>();
  if (j.contains("details")) {
    for (const auto& [k, v] : j.at("details").items()) {
      c.details[k] = v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
    }
  }
  return c;
}

Certificate merge(const Certificate& a, const Certificate& b) {
  if (a.inequality != b.inequality) throw std::invalid_argument("merge: different inequalities");
  Certificate out = a;
  out.samples = a.samples + b.samples;
  if (b.worst_slack < a.worst_slack) {
    out.worst_slack = b.worst_slack;
    out.witness = b.witness;
  }
  for (const auto& [k, v] : b.details) out.details.try_emplace(k, v);
  out.finalize();
  return out;
}

}  // namespace harnack
