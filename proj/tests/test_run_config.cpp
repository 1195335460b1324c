#include <doctest.h>

#include "spdcfc/errors.hpp"
#include "spdcfc/run_config.hpp"

using namespace spdcfc;
using nlohmann::json;

TEST_CASE("RunConfig parses a full document") {
  const json j = json::parse(R"({
    "schema_version": 1,
    "experiment": {"crystal_length_um": 3000, "pump_waist_um": 53, "fiber_mode_radius_um": 1.48,
                   "inverse_magnification": 49,
                   "walkoffs": {"m_p": 0.07631, "m": 0.07243, "q_over_k": 0.036215}},
    "dispersion": {"sellmeier_path": "bbo.json", "cut_angle_deg": 41.0},
    "quadrature": {"n_tau": 32, "n_trans": 48}
  })");
  const RunConfig rc = RunConfig::from_json(j);
  CHECK(*rc.crystal_length_um == 3000.0);
  CHECK(rc.walkoffs->m == 0.07243);
  CHECK(rc.dispersion->cut_angle_deg == 41.0);
  CHECK(rc.dispersion->external_cone_angle_deg == 3.5);
  CHECK(rc.quadrature->n_tau == 32);
  CHECK(rc.quadrature->extent_factor == 6.0);
}

TEST_CASE("RunConfig round-trips through JSON") {
  RunConfig rc;
  rc.crystal_length_um = 1234.5678901234567;
  rc.pump_waist_um = 53.0;
  rc.fiber_mode_radius_um = 1.4849242404917498;
  rc.inverse_magnification = 49.649350649350649;
  rc.walkoffs = WalkOffSet{0.07631, 0.07243, 0.036215};
  rc.quadrature = QuadratureSpec{};
  const RunConfig back = RunConfig::from_json(json::parse(rc.to_json().dump()));
  CHECK(*back.crystal_length_um == *rc.crystal_length_um);
  CHECK(*back.fiber_mode_radius_um == *rc.fiber_mode_radius_um);
  CHECK(*back.inverse_magnification == *rc.inverse_magnification);
  CHECK(back.walkoffs->q_over_k == rc.walkoffs->q_over_k);
  CHECK(back.quadrature->target_rel_err == rc.quadrature->target_rel_err);
}

TEST_CASE("RunConfig rejects unknown keys and bad types") {
  CHECK_THROWS_AS(RunConfig::from_json(json::parse(R"({"schema_version": 1, "bogus": 1})")), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json(json::parse(R"({"schema_version": 1, "experiment": {"L": 1}})")),
                  ConfigError);
  CHECK_THROWS_AS(
      RunConfig::from_json(json::parse(R"({"schema_version": 1, "experiment": {"crystal_length_um": "3"}})")),
      ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json(json::parse(R"({"experiment": {}})")), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json(json::parse(R"({"schema_version": 2})")), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json(json::parse(R"([1, 2])")), ConfigError);
  CHECK_THROWS_AS(
      RunConfig::from_json(json::parse(R"({"schema_version": 1, "quadrature": {"n_tau": 8.5}})")), ConfigError);
  CHECK_THROWS_AS(RunConfig::load("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("RunConfig validates invariants on load") {
  CHECK_THROWS_AS(
      RunConfig::from_json(json::parse(R"({"schema_version": 1, "experiment": {"pump_waist_um": -53}})")),
      DomainError);
  CHECK_THROWS_AS(RunConfig::from_json(json::parse(
                      R"({"schema_version": 1, "experiment": {"walkoffs": {"m_p": 1.5, "m": 0, "q_over_k": 0}}})")),
                  DomainError);
  CHECK_THROWS_AS(RunConfig::from_json(json::parse(R"({"schema_version": 1, "quadrature": {"n_trans": 4}})")),
                  DomainError);
}

TEST_CASE("RunConfig ignores an echoed result block") {
  const json j = json::parse(R"({"schema_version": 1, "experiment": {}, "result": {"eta": 0.4}})");
  CHECK_NOTHROW(RunConfig::from_json(j));
}
