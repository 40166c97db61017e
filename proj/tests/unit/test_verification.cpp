#include "doctest.h"
#include "jws/verification.hpp"

using namespace jws;

TEST_CASE("report schema keeps its key order") {
  VerificationReport r;
  r.claim = "x";
  r.function = "lambda-sin";
  r.parameters = {{1.5, 0.0}};
  r.outcome = Outcome::Pass;
  const Json j = r.to_json();
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"claim", "spec", "settings", "outcome", "evidence"});
  CHECK(j["spec"]["name"] == "lambda-sin");
  CHECK(j["spec"]["params"][0] == Json::array({1.5, 0.0}));
  CHECK(j["outcome"] == "pass");
  CHECK(to_string(Outcome::Inconclusive) == "inconclusive");
}

TEST_CASE("lemniscate rule") {
  Json e{{"sampled", 1000}, {"attracted", 990}, {"wrong_side", 0}};
  CHECK(decide_lemniscate(e) == Outcome::Pass);
  e["attracted"] = 989;
  CHECK(decide_lemniscate(e) == Outcome::Fail);
  e["attracted"] = 1000;
  e["wrong_side"] = 1;
  CHECK(decide_lemniscate(e) == Outcome::Fail);
  e["sampled"] = 0;
  CHECK(decide_lemniscate(e) == Outcome::Inconclusive);
  CHECK(decide_lemniscate(e) == decide_lemniscate(e));
}

TEST_CASE("buried rule") {
  Json e{{"resolved_scales", {2.0}}, {"sampled", 10}, {"witness_failures", 0}, {"candidates", 3}};
  CHECK(decide_buried(e) == Outcome::Pass);
  e["candidates"] = 0;
  CHECK(decide_buried(e) == Outcome::Inconclusive);
  e["witness_failures"] = 1;
  CHECK(decide_buried(e) == Outcome::Fail);
  e["resolved_scales"] = Json::array();
  CHECK(decide_buried(e) == Outcome::Inconclusive);
}

TEST_CASE("spiderweb rule") {
  Json loop{{"simple", true}, {"winding", -1}, {"julia_cells_only", true}, {"oracle_surrounds", true}};
  Json e{{"chain_found", true}, {"nesting_verified", true}, {"loops", {loop, loop, loop}}};
  CHECK(decide_spiderweb(e) == Outcome::Pass);
  e["loops"][1]["winding"] = 0;
  CHECK(decide_spiderweb(e) == Outcome::Fail);
  e["loops"][1]["winding"] = 1;
  e["nesting_verified"] = false;
  CHECK(decide_spiderweb(e) == Outcome::Fail);
  e["chain_found"] = false;
  CHECK(decide_spiderweb(e) == Outcome::Fail);
}

TEST_CASE("other rules") {
  CHECK(decide_inverse_contraction({{"solver_failures", 0}, {"violations", 0}}) == Outcome::Pass);
  CHECK(decide_inverse_contraction({{"solver_failures", 1}, {"violations", 0}}) == Outcome::Fail);
  Json k{{"violations", 0}, {"family_max_ratio", 0.99}, {"koebe_ray_max_deviation", 1e-14}, {"koebe_off_ray_max_ratio", 0.9}};
  CHECK(decide_koebe(k) == Outcome::Pass);
  k["violations"] = 2;
  CHECK(decide_koebe(k) == Outcome::Fail);
  CHECK(decide_real_line({{"escaping", 0}, {"first_iterate_outside", 0}, {"orbit_exceedances", 0}}) == Outcome::Pass);
  CHECK(decide_real_line({{"escaping", 1}, {"first_iterate_outside", 0}, {"orbit_exceedances", 0}}) == Outcome::Fail);

  Json comp{{"interior", true}, {"relative_deviation", 0.02}};
  Json c{{"tolerance", 0.05}, {"components", {comp}}, {"strip_max_bounded", true}};
  CHECK(decide_congruence(c) == Outcome::Pass);
  c["components"][0]["relative_deviation"] = 0.06;
  CHECK(decide_congruence(c) == Outcome::Fail);

  Json cyc{{"parabolic", false}, {"multiplier_modulus", 0.1}};
  Json l{{"found", true}, {"lambda", {1.6, 0.0}}, {"cycles", {cyc, cyc}}, {"max_multiplier", 0.9}};
  CHECK(decide_lambda_search(l) == Outcome::Pass);
  l["lambda"] = Json::array({1.0, 0.0});
  CHECK(decide_lambda_search(l) == Outcome::Fail);
}

TEST_CASE("small checks pass and are reproducible") {
  const auto a = check_koebe_bound(2000);
  CHECK(a.outcome == Outcome::Pass);
  CHECK(a.to_json().dump() == check_koebe_bound(2000).to_json().dump());
  CHECK(decide_koebe(a.evidence) == a.outcome);

  const auto l = check_lemniscate(200);
  CHECK(l.outcome == Outcome::Pass);
  CHECK(l.to_json().dump() == check_lemniscate(200).to_json().dump());

  const auto i = check_inverse_contraction(300);
  CHECK(i.outcome == Outcome::Pass);
  CHECK(i.evidence["min_abs_cos"].get<double>() > 1.0);

  const auto r = check_real_line_trapped(500);
  CHECK(r.outcome == Outcome::Pass);
  CHECK(r.evidence["max_abs_first_iterate"].get<double>() <= 1.0 + 1e-12);
}

TEST_CASE("tiny sin region has too few loops") {
  SpiderwebSettings s;
  s.region = {-1, 1, -1, 1};
  s.resolution = 256;
  s.buried.sample_count = 20;
  const auto run = run_spiderweb_experiment(FunctionSpec::sin(), s);
  CHECK(run.report.outcome == Outcome::Fail);
  CHECK(run.report.evidence["chain_found"] == false);
  CHECK(run.chain.loops.size() < 3);
}

TEST_CASE("diameter report on a small render") {
  const auto dyn = prepare_dynamics(FunctionSpec::sin());
  const auto g = render(dyn, {-10, 10, -5, 5}, 256, 128);
  const auto rep = diameter_report(g, {0.01, 0.1, 3.0});
  const auto& counts = rep.evidence["spherical_counts"];
  REQUIRE(counts.size() == 3);
  CHECK(counts[2]["components"] == 0);
  CHECK(counts[0]["components"].get<int>() >= counts[1]["components"].get<int>());
  CHECK(rep.evidence["max_interior_euclidean_diameter"].get<double>() > 0.0);
}
