#pragma once

// Outcome record of one inequality check. Slacks are signed: a check
// `lhs <= rhs` contributes rhs - lhs in the units documented by the
// certifier (usually log-space or relative). The certificate passes iff the
// worst slack is >= -tolerance.

#include <json.hpp>

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace harnack {

struct Certificate {
  std::string inequality;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  double worst_slack = std::numeric_limits<double>::infinity();
  std::vector<double> witness;
  bool pass = true;
  std::map<std::string, double> tolerances;
  std::map<std::string, double> details;

  Certificate() = default;
  Certificate(std::string id, std::uint64_t seed_, double tolerance);

  double tolerance() const;
  // Counts one sample; keeps the first worst slack and its witness.
  void record(double slack, const std::vector<double>& witness_point);
  void record_many(double slack, const std::vector<double>& witness_point, std::uint64_t count);
  // Recomputes `pass` from worst_slack and the slack tolerance.
  void finalize();

  nlohmann::json to_json() const;
  static Certificate from_json(const nlohmann::json& j);
};

// Associative merge of two records of the same inequality: sample counts
// add, the smaller worst slack (first one on ties) wins.
Certificate merge(const Certificate& a, const Certificate& b);

}  // namespace harnack
