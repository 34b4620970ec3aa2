#include "suites.hpp"

#include <harnack/analytic_function.hpp>
#include <harnack/dbar.hpp>
#include <harnack/inequalities.hpp>
#include <harnack/motions.hpp>
#include <harnack/rho01.hpp>
#include <harnack/rng.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace harnack::cli {
namespace {

using AF = AnalyticFunction;
using Json = nlohmann::json;

CheckOptions check_options(const SuiteOptions& o) {
  CheckOptions c;
  c.seed = o.seed;
  c.tolerance = o.tolerance;
  return c;
}

// Merges certificates of the same inequality, keeping first-seen order.
class Collector {
 public:
  void add(const Certificate& c) {
    auto it = index_.find(c.inequality);
    if (it == index_.end()) {
      index_[c.inequality] = certs_.size();
      certs_.push_back(c);
    } else {
      certs_[it->second] = merge(certs_[it->second], c);
    }
  }
  Json to_json() const {
    Json out = Json::array();
    for (const Certificate& c : certs_) out.push_back(c.to_json());
    return out;
  }

 private:
  std::vector<Certificate> certs_;
  std::map<std::string, std::size_t> index_;
};

std::size_t per(std::size_t samples, std::size_t parts) { return std::max<std::size_t>(1, samples / parts); }

Json harnack_suite(const SuiteOptions& o) {
  Rng rng(o.seed, 1);
  const auto pairs = random_pairs(rng, o.samples, 0.95);
  const auto opts = check_options(o);
  const AF z = AF::identity();
  const AF extremal = AF::mobius(MobiusMap(1.0, 1.0, -1.0, 1.0));
  const AF quadratic = AF::constant(2.0) + z + AF::constant(0.5) * AF::pow(z, 2);
  Collector c;
  c.add(check_harnack(extremal, pairs, opts));
  c.add(check_harnack(quadratic, pairs, opts));
  // Nonvanishing with |f| < 1.
  c.add(check_two_constants(AF::exp(AF::affine(0.5, -0.6)), 1.0, pairs, opts));
  return c.to_json();
}

Json landau_suite(const SuiteOptions& o) {
  const std::size_t functions = std::min<std::size_t>(20, o.samples);
  const auto family = admissible_family(functions, o.seed);
  Rng rng(o.seed, 2);
  Collector c;
  for (std::size_t k = 0; k < functions; ++k) {
    const std::size_t count = o.samples / functions + (k < o.samples % functions ? 1 : 0);
    std::vector<Complex> pts;
    for (std::size_t i = 0; i < count; ++i) pts.push_back(rng.in_disk(0.95));
    c.add(check_landau(family[k].f, pts, check_options(o)));
  }
  return c.to_json();
}

Json prop3_suite(const SuiteOptions& o) {
  const std::size_t functions = per(o.samples, 20);
  const auto family = admissible_family(functions, o.seed);
  Rng rng(o.seed, 3);
  const auto opts = check_options(o);
  Collector c;
  for (const AdmissibleFunction& a : family) {
    const auto pairs = random_pairs(rng, 20, 0.9);
    c.add(check_prop3(a.f, pairs, false, std::nullopt, opts));
    c.add(check_prop3(a.f, pairs, true, a.log_witness, opts));
    c.add(check_arg_refined(a.f, pairs, a.log_witness, opts));
    if (a.log_witness) c.add(check_cor4(*a.log_witness, pairs, opts));
  }
  return c.to_json();
}

Json schottky_suite(const SuiteOptions& o) {
  const auto family = admissible_family(per(o.samples, 10), o.seed);
  Certificate cert = check_schottky(family, o.R, o.Rprime, 10, check_options(o));
  Json out = Json::array();
  out.push_back(cert.to_json());
  return out;
}

Json hempel_suite(const SuiteOptions& o) {
  const auto family = admissible_family(per(o.samples, 20), o.seed);
  Rng rng(o.seed, 5);
  const auto opts = check_options(o);
  Collector c;
  for (const AdmissibleFunction& a : family) c.add(check_hempel_implicit(a.f, random_pairs(rng, 20, 0.9), opts));
  // 0 < |f| < 1: f = exp(z/2 - 1).
  const AF f = AF::exp(AF::affine(0.5, -1.0));
  c.add(check_punctured_disk_harnack(f, random_pairs(rng, o.samples, 0.95), opts));
  std::vector<Complex> pts;
  for (std::size_t i = 0; i < o.samples; ++i) pts.push_back(rng.in_disk(10.0));
  c.add(check_density_bounds(pts, o.seed, 1e-6));
  return c.to_json();
}

FiniteMotion two_disk_motion() {
  const Complex i{0.0, 1.0};
  std::vector<MotionTrack> t{{Complex{0.0}, std::nullopt},
                             {Complex{1.0}, std::nullopt},
                             {ExtendedPoint::infinity(), std::nullopt},
                             {Complex{2.0}, AF::affine(0.25, 2.0)},
                             {i, AF::affine(0.25 * i, i)}};
  return build_motion(t, 0.0);
}

Json motions_suite(const SuiteOptions& o) {
  const FiniteMotion m = two_disk_motion();
  const auto opts = check_options(o);
  const auto queries = holder_queries(m, o.R, static_cast<int>(o.samples), o.seed);
  std::vector<HolderQuery> finite;
  for (const HolderQuery& q : queries)
    if (!m.label(q.first).infinite && !m.label(q.second).infinite) finite.push_back(q);
  Json out = Json::array();
  out.push_back(check_lemma2(m, o.R, static_cast<int>(per(o.samples, 10)), opts).to_json());
  out.push_back(check_holder_spherical(m, o.R, queries, opts).to_json());
  // Labels stay within |w| <= 2.25 on B_R for R <= log 3; R' = 3.
  out.push_back(check_holder_euclidean(m, o.R, 3.0, finite, opts).to_json());
  return out;
}

std::vector<Complex> random_points(Rng& rng, std::size_t n, double radius) {
  std::vector<Complex> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back(rng.in_disk(radius));
  return pts;
}

Json prop5_suite(const SuiteOptions& o) {
  const auto w = make_indicator_witness(0.3, 0.0, 1.0, 3.0, 1.0, WitnessDomain::disk, GridRegion{-1, 1, -1, 1}, 201);
  Rng rng(o.seed, 6);
  Json out = Json::array();
  out.push_back(check_prop5(w, random_points(rng, o.samples, 0.95), check_options(o)).to_json());
  return out;
}

Json prop6_suite(const SuiteOptions& o) {
  const auto w = make_indicator_witness(0.3, 0.0, 1.0, 3.0, std::exp(1.0), WitnessDomain::plane,
                                        GridRegion{-3, 3, -3, 3}, 241);
  Rng rng(o.seed, 7);
  const auto opts = check_options(o);
  Json out = Json::array();
  out.push_back(check_prop6(w, random_points(rng, o.samples, 2.0), opts).to_json());
  out.push_back(check_prop6_corollaries(w, opts).to_json());
  return out;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"harnack", "landau",         "prop3",      "schottky",
                                              "hempel",  "motions-holder", "dbar-prop5", "dbar-prop6"};
  return names;
}

nlohmann::json run_suite(const std::string& name, const SuiteOptions& opts) {
  if (opts.samples < 1) throw std::invalid_argument("samples must be >= 1");
  if (name == "harnack") return harnack_suite(opts);
  if (name == "landau") return landau_suite(opts);
  if (name == "prop3") return prop3_suite(opts);
  if (name == "schottky") return schottky_suite(opts);
  if (name == "hempel") return hempel_suite(opts);
  if (name == "motions-holder") return motions_suite(opts);
  if (name == "dbar-prop5") return prop5_suite(opts);
  if (name == "dbar-prop6") return prop6_suite(opts);
  if (name == "all") {
    Json out = Json::array();
    for (const std::string& s : suite_names())
      for (auto& c : run_suite(s, opts)) out.push_back(std::move(c));
    return out;
  }
  throw std::invalid_argument("unknown suite: " + name);
}

}  // namespace harnack::cli
