#pragma once

// Certification suites driven by `harnack certify`.

#include <harnack/certificate.hpp>

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace harnack::cli {

struct SuiteOptions {
  std::uint64_t seed = 0;
  std::size_t samples = 200;
  double R = 1.0986122886681098;  // log 3
  double Rprime = 1.0;            // schottky only
  double tolerance = 1e-9;
};

const std::vector<std::string>& suite_names();  // without "all"

// Certificates (and holder reports) of one suite, in a fixed order.
// Throws std::invalid_argument for an unknown suite.
nlohmann::json run_suite(const std::string& name, const SuiteOptions& opts);

}  // namespace harnack::cli
