#include "doctest.h"
#include "tw/errors.hpp"
#include "tw/report.hpp"

using namespace tw;
using nlohmann::json;

TEST_CASE("config parsing") {
  const auto c = SuiteConfig::from_json(json::parse(
      R"j({"metric": "burns", "suite": "cone", "sample_count": 7, "seed": 9,
          "fiber": {"a": 2.0, "h": "-log(1 - zeta^2)"}, "tolerances": {"cone.c1_value": 1e-3}})j"));
  CHECK(c.metric == "burns");
  CHECK(c.suite == "cone");
  CHECK(c.sample_count == 7);
  CHECK(c.seed == 9);
  CHECK(c.fiber.a == 2.0);
  CHECK(c.fiber.b == 1.0);
  CHECK(c.fiber.h.value() == "-log(1 - zeta^2)");
  CHECK(c.tolerances.at("cone.c1_value") == 1e-3);
  CHECK(SuiteConfig::from_json(c.to_json()).to_json() == c.to_json());

  const auto d = SuiteConfig::from_json(json::object());
  CHECK(d.metric == "eguchi_hanson");
  CHECK(d.jet_order == 4);
  CHECK(d.tol_tier == "strict");
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(SuiteConfig::from_json(json::parse(R"({"metrc": "flat"})")), ConfigurationError);
  CHECK_THROWS_AS(SuiteConfig::from_json(json::parse(R"({"fiber": {"q": 1}})")), ConfigurationError);
  CHECK_THROWS_AS(SuiteConfig::from_json(json::parse(R"({"seed": "one"})")), ConfigurationError);
  CHECK_THROWS_AS(SuiteConfig::from_json(json::parse("[]")), ConfigurationError);

  SuiteConfig c;
  c.metric = "taub_nut";
  CHECK_THROWS_AS(c.validate(), UsageError);
  c = SuiteConfig{};
  c.suite = "everything";
  CHECK_THROWS_AS(c.validate(), UsageError);
  c = SuiteConfig{};
  c.jet_order = 3;
  CHECK_THROWS_AS(c.validate(), ConfigurationError);
  c = SuiteConfig{};
  c.fiber.a = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigurationError);
  c = SuiteConfig{};
  c.fiber.h = "alpha";
  CHECK_THROWS_AS(c.validate(), ConfigurationError);
  c = SuiteConfig{};
  c.metric = "taub_nut";
  CHECK_THROWS_AS(run_suite(c), UsageError);
}

TEST_CASE("report records and determinism") {
  SuiteConfig c;
  c.metric = "flat";
  c.suite = "curvature";
  c.sample_count = 5;
  const auto r = run_suite(c);
  REQUIRE(r.find("curvature.symmetry") != nullptr);
  CHECK(r.find("curvature.symmetry")->points_tested == 5);
  CHECK(r.find("no.such") == nullptr);
  CHECK(r.pass());
  const json j = json::parse(r.dump());
  CHECK(j["pass"] == true);
  CHECK(j["environment"]["seed"] == 1);
  CHECK(j["checks"].size() == r.checks.size());
  CHECK(r.dump().back() == '\n');
  CHECK(run_suite(c).dump() == r.dump());

  c.seed = 2;
  CHECK(run_suite(c).dump() != r.dump());
}

TEST_CASE("tolerance overrides and tiers") {
  SuiteConfig c;
  c.metric = "fubini_study";
  c.suite = "curvature";
  c.sample_count = 3;
  CHECK_FALSE(run_suite(c).find("curvature.fs_s1_scal_third")->pass);
  c.tolerances["curvature.fs_s1_scal_third"] = 10.0;
  const auto r = run_suite(c);
  CHECK(r.find("curvature.fs_s1_scal_third")->threshold == 10.0);
  CHECK(r.find("curvature.fs_s1_scal_third")->pass);

  c.tolerances.clear();
  c.tol_tier = "loose";
  CHECK(run_suite(c).find("curvature.symmetry")->threshold == doctest::Approx(1e-7));
}

TEST_CASE("non-Kahler fixture skips twistor suites") {
  SuiteConfig c;
  c.metric = "hermitian_perturbed";
  c.suite = "balanced";
  const auto r = run_suite(c);
  CHECK(r.checks.empty());
  REQUIRE(r.skipped.size() == 1);
  CHECK(r.skipped[0].check_id == "balanced");
}
